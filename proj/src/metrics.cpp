#include "qats/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qats {

double distance(std::span<const std::int32_t> a, std::span<const std::int32_t> b, double w) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: length mismatch");
  if (a.empty()) throw std::invalid_argument("distance: empty paths");
  if (w < 0.0) throw std::invalid_argument("distance: order w must be >= 0");
  const double n = static_cast<double>(a.size());
  if (w == 0.0) {
    std::int64_t mismatches = 0;
    for (std::size_t k = 0; k < a.size(); ++k) mismatches += (a[k] != b[k]) ? 1 : 0;
    return static_cast<double>(mismatches) / n;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += std::pow(std::abs(static_cast<double>(a[k]) - static_cast<double>(b[k])), w);
  }
  return std::pow(acc / n, 1.0 / w);
}

std::vector<double> quantiles(std::span<const double> samples, std::span<const double> betas) {
  if (samples.empty()) throw std::invalid_argument("quantiles: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<std::int64_t>(sorted.size());
  std::vector<double> out;
  out.reserve(betas.size());
  for (const double beta : betas) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("quantiles: beta must be in [0,1]");
    const auto rank = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(beta * static_cast<double>(n))));
    out.push_back(sorted[static_cast<std::size_t>(std::min(rank, n) - 1)]);
  }
  return out;
}

BenchRecord BenchContext::run(const SimConfig& config, const SearchParams& params) {
  using clock = std::chrono::steady_clock;

  model_ = model_for_config(config);
  simulate_hmm(config, sim_);
  build_cum_scores(model_, sim_.y, scores_);
  gaussian_log_densities(sim_.y, model_.gaussian()->means(), model_.gaussian()->sigma(),
                         densities_);
  qats_result_.path.resize(sim_.y.size());
  viterbi_result_.path.resize(sim_.y.size());
  viterbi_ws_.rho.ensure(config.m, config.n);
  if (config.n > 1) viterbi_ws_.zeta.ensure(config.m, config.n - 1);

  const auto t0 = clock::now();
  qats_decode(model_, scores_, params, qats_result_);
  const auto t1 = clock::now();
  viterbi_decode(model_, densities_, viterbi_ws_, viterbi_result_);
  const auto t2 = clock::now();

  BenchRecord rec;
  rec.config = config;
  rec.t_qats_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rec.t_viterbi_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  rec.d0_qats = distance(qats_result_.path, sim_.x_true, 0.0);
  rec.d0_viterbi = distance(viterbi_result_.path, sim_.x_true, 0.0);
  rec.d2_qats = distance(qats_result_.path, sim_.x_true, 2.0);
  rec.d2_viterbi = distance(viterbi_result_.path, sim_.x_true, 2.0);
  rec.s_hat_qats = qats_result_.segmentation.s();
  return rec;
}

BenchRecord bench_pair(const SimConfig& config, const SearchParams& params) {
  BenchContext ctx;
  return ctx.run(config, params);
}

std::vector<BenchRecord> run_bench(const BenchGrid& grid, const SearchParams& params,
                                   std::int64_t reps, std::uint64_t seed, int jobs) {
  if (reps < 1) throw std::invalid_argument("run_bench: need reps >= 1");
  if (grid.n.empty() || grid.m.empty() || grid.s.empty() || grid.sigma.empty())
    throw std::invalid_argument("run_bench: empty grid");
  params.validate();

  std::vector<SimConfig> configs;
  for (const std::int64_t n : grid.n) {
    for (const int m : grid.m) {
      for (const std::int64_t s : grid.s) {
        for (const double sigma : grid.sigma) {
          SimConfig c;
          c.n = n;
          c.m = m;
          c.s = s;
          c.sigma = sigma;
          c.seed = seed;
          c.validate();
          configs.push_back(c);
        }
      }
    }
  }

  const std::size_t total = configs.size() * static_cast<std::size_t>(reps);
  std::vector<BenchRecord> records(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    BenchContext ctx;
    std::int64_t warmed_config = -1;
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total) break;
      const std::size_t ci = t / static_cast<std::size_t>(reps);
      const std::size_t rep = t % static_cast<std::size_t>(reps);
      SimConfig cfg = configs[ci];
      cfg.replication_id = static_cast<std::int64_t>(rep);
      if (static_cast<std::int64_t>(ci) != warmed_config) {
        SimConfig warm = cfg;
        warm.replication_id = reps;  // stream not used by any recorded replication
        ctx.run(warm, params);
        warmed_config = static_cast<std::int64_t>(ci);
      }
      records[t] = ctx.run(cfg, params);
    }
  };

  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<SummaryRow> summarize(std::span<const BenchRecord> records,
                                  std::span<const double> betas) {
  struct Key {
    std::int64_t n;
    int m;
    std::int64_t s;
    double sigma;
    bool operator==(const Key&) const = default;
  };
  std::vector<Key> keys;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t idx = 0; idx < records.size(); ++idx) {
    const auto& c = records[idx].config;
    const Key key{c.n, c.m, c.s, c.sigma};
    std::size_t g = 0;
    for (; g < keys.size(); ++g) {
      if (keys[g] == key) break;
    }
    if (g == keys.size()) {
      keys.push_back(key);
      members.emplace_back();
    }
    members[g].push_back(idx);
  }

  std::vector<SummaryRow> rows;
  for (std::size_t g = 0; g < keys.size(); ++g) {
    std::vector<double> t_q, t_v, ratio, d0q, d0v, d2q, d2v;
    for (const std::size_t idx : members[g]) {
      const BenchRecord& r = records[idx];
      t_q.push_back(r.t_qats_ms);
      t_v.push_back(r.t_viterbi_ms);
      ratio.push_back(r.t_viterbi_ms / r.t_qats_ms);
      d0q.push_back(r.d0_qats);
      d0v.push_back(r.d0_viterbi);
      d2q.push_back(r.d2_qats);
      d2v.push_back(r.d2_viterbi);
    }
    for (const double beta : betas) {
      const double bs[1] = {beta};
      SummaryRow row;
      row.n = keys[g].n;
      row.m = keys[g].m;
      row.s = keys[g].s;
      row.sigma = keys[g].sigma;
      row.reps = static_cast<std::int64_t>(members[g].size());
      row.beta = beta;
      row.t_qats_ms = quantiles(t_q, bs)[0];
      row.t_viterbi_ms = quantiles(t_v, bs)[0];
      row.speedup = quantiles(ratio, bs)[0];
      row.d0_qats = quantiles(d0q, bs)[0];
      row.d0_viterbi = quantiles(d0v, bs)[0];
      row.d2_qats = quantiles(d2q, bs)[0];
      row.d2_viterbi = quantiles(d2v, bs)[0];
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qats
