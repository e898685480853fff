// Command-line front end: simulate, decode, bench, cache. Thin shell over the
// library; every behavior here is reachable through library calls.
//
// Exit codes: 0 success, 2 flag/parameter validation, 3 runtime failure
// (missing or malformed files, infeasible decode).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qats/io.hpp"

namespace {

int fail(int code, const std::exception& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  return code;
}

// QATS_SEED overrides --seed wherever a seed is consumed.
std::uint64_t effective_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("QATS_SEED");
  if (env == nullptr || *env == '\0') return flag_seed;
  std::uint64_t v = 0;
  for (const char* p = env; *p != '\0'; ++p) {
    if (*p < '0' || *p > '9')
      throw std::invalid_argument("QATS_SEED must be a nonnegative integer");
    v = v * 10 + static_cast<std::uint64_t>(*p - '0');
  }
  return v;
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return path;
  if (slash != std::string::npos && dot < slash) return path;
  return path.substr(0, dot);
}

qats::Segmentation runs_of(std::span<const std::int32_t> path) {
  qats::Segmentation seg;
  std::int64_t l = 1;
  for (std::size_t k = 1; k <= path.size(); ++k) {
    if (k == path.size() || path[k] != path[k - 1]) {
      seg.segments.push_back({l, static_cast<std::int64_t>(k)});
      seg.states.push_back(path[k - 1]);
      l = static_cast<std::int64_t>(k) + 1;
    }
  }
  return seg;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = j.dump(2) + "\n";
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

struct SearchFlags {
  double nu = 0.5;
  int d_o = 3;
  int v_o = 20;
  int n_seeds = 3;
  bool rotated = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--nu", nu, "Probe step factor in (0,1)");
    cmd->add_option("--d-o", d_o, "Bracket width at which search turns exhaustive");
    cmd->add_option("--v-o", v_o, "Alternation cap of the two-change search");
    cmd->add_option("--n-seeds", n_seeds, "Seeds of the two-change search");
    cmd->add_flag("--rotated", rotated, "Tilt score slices so endpoint values coincide");
  }

  qats::SearchParams params() const {
    qats::SearchParams p;
    p.nu = nu;
    p.d_o = d_o;
    p.v_o = v_o;
    p.n_seeds = n_seeds;
    p.rotated = rotated;
    return p;
  }
};

struct SimulateArgs {
  std::int64_t n = 0;
  int m = 0;
  std::int64_t s = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::int64_t rep = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  qats::SimConfig config;
  try {
    config.n = a.n;
    config.m = a.m;
    config.s = a.s;
    config.sigma = a.sigma;
    config.seed = effective_seed(a.seed);
    config.replication_id = a.rep;
    config.validate();
  } catch (const std::exception& e) {
    return fail(2, e);
  }
  try {
    const qats::SimOutput sim = qats::simulate_hmm(config);
    qats::save_sim_csv(a.out, sim);
  } catch (const std::exception& e) {
    return fail(3, e);
  }
  return 0;
}

struct DecodeArgs {
  std::string model_path;
  std::string data_path;
  std::string out;
  std::string diag;
  std::string segments;
  std::string cache;
  std::string save_cache;
  std::string algo = "qats";
  SearchFlags search;
};

int run_decode(const DecodeArgs& a) {
  qats::SearchParams params = a.search.params();
  try {
    params.validate();
  } catch (const std::exception& e) {
    return fail(2, e);
  }
  try {
    const qats::HmmModel model = qats::load_model_json(a.model_path);
    const qats::DataFile data = qats::load_data_csv(a.data_path);
    const bool want_qats = a.algo == "qats" || a.algo == "both";
    const bool want_viterbi = a.algo == "viterbi" || a.algo == "both";

    qats::CumScores scores;
    if (want_qats || !a.save_cache.empty()) {
      if (a.cache.empty()) {
        scores = qats::build_cum_scores(model, data.y);
      } else {
        scores = qats::load_cum_scores(a.cache, model);
        if (scores.n() != static_cast<std::int64_t>(data.y.size()))
          throw std::runtime_error("cache length does not match the data file");
      }
      if (!a.save_cache.empty()) qats::save_cum_scores(a.save_cache, scores);
    }

    qats::DecodeResult qres;
    if (want_qats) qres = qats::qats_decode(model, scores, params);

    qats::ViterbiResult vres;
    double viterbi_ms = 0.0;
    if (want_viterbi) {
      const qats::LogDensityMatrix g = qats::build_log_densities(model, data.y);
      const auto t0 = std::chrono::steady_clock::now();
      vres = qats::viterbi_decode(model, g);
      const auto t1 = std::chrono::steady_clock::now();
      viterbi_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }

    nlohmann::json qdiag, vdiag;
    if (want_qats) {
      qdiag = {{"s", qres.segmentation.s()},
               {"loop_iterations", qres.loop_iterations},
               {"probes_h2", qres.probes_h2},
               {"probes_h3", qres.probes_h3},
               {"wall_ms", qres.wall_ms}};
    }
    if (want_viterbi) {
      vdiag = {{"log_lik", vres.log_lik},
               {"all_impossible", vres.all_impossible},
               {"wall_ms", viterbi_ms}};
    }

    if (a.algo == "both") {
      const std::string stem = stem_of(a.out);
      qats::save_path_csv(stem + ".qats.csv", qres.path);
      qats::save_path_csv(stem + ".viterbi.csv", vres.path);
      if (!a.segments.empty()) qats::save_segments_csv(a.segments, qres.segmentation);
      if (!a.diag.empty()) {
        nlohmann::json d = {{"qats", qdiag}, {"viterbi", vdiag}};
        if (!data.x_true.empty()) {
          d["d0_qats"] = qats::distance(qres.path, data.x_true, 0.0);
          d["d0_viterbi"] = qats::distance(vres.path, data.x_true, 0.0);
          d["d2_qats"] = qats::distance(qres.path, data.x_true, 2.0);
          d["d2_viterbi"] = qats::distance(vres.path, data.x_true, 2.0);
        }
        write_json(a.diag, d);
      }
    } else if (want_qats) {
      qats::save_path_csv(a.out, qres.path);
      if (!a.segments.empty()) qats::save_segments_csv(a.segments, qres.segmentation);
      if (!a.diag.empty()) write_json(a.diag, qdiag);
    } else {
      qats::save_path_csv(a.out, vres.path);
      if (!a.segments.empty()) qats::save_segments_csv(a.segments, runs_of(vres.path));
      if (!a.diag.empty()) write_json(a.diag, vdiag);
    }
  } catch (const std::exception& e) {
    return fail(3, e);
  }
  return 0;
}

struct BenchArgs {
  std::vector<std::int64_t> n;
  std::vector<int> m;
  std::vector<std::int64_t> s;
  std::vector<double> sigma;
  std::int64_t reps = 10;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string preset;
  std::string out;
  std::string summary;
  std::vector<double> betas{0.1, 0.5, 0.9};
  SearchFlags search;
  bool reps_given = false;
  bool n_given = false, m_given = false, s_given = false, sigma_given = false;
};

int run_bench(BenchArgs& a) {
  qats::SearchParams params = a.search.params();
  qats::BenchGrid grid;
  std::uint64_t seed = 0;
  try {
    params.validate();
    seed = effective_seed(a.seed);
    if (a.preset == "paper-small") {
      grid.n = {10001};
      grid.m = {2, 3};
      grid.s = {2, 6, 11};
      grid.sigma = {0.1, 1.0};
      if (!a.reps_given) a.reps = 50;
    } else if (a.preset == "paper-headline") {
      grid.n = {1000001};
      grid.m = {2};
      grid.s = {11};
      grid.sigma = {1.0};
      if (!a.reps_given) a.reps = 20;
    } else if (!a.preset.empty()) {
      throw std::invalid_argument("unknown preset: " + a.preset);
    }
    if (a.n_given) grid.n = a.n;
    if (a.m_given) grid.m = a.m;
    if (a.s_given) grid.s = a.s;
    if (a.sigma_given) grid.sigma = a.sigma;
    if (grid.n.empty() || grid.m.empty() || grid.s.empty() || grid.sigma.empty())
      throw std::invalid_argument("bench needs --preset or all of --n/--m/--s/--sigma");
    if (a.reps < 1) throw std::invalid_argument("--reps must be >= 1");
    for (const auto n : grid.n)
      for (const auto m : grid.m)
        for (const auto s : grid.s)
          for (const auto sigma : grid.sigma) {
            qats::SimConfig c;
            c.n = n;
            c.m = m;
            c.s = s;
            c.sigma = sigma;
            c.seed = seed;
            c.validate();
          }
  } catch (const std::exception& e) {
    return fail(2, e);
  }
  try {
    const auto records = qats::run_bench(grid, params, a.reps, seed, a.jobs);
    qats::save_bench_csv(a.out, records);
    if (!a.summary.empty()) {
      const auto rows = qats::summarize(records, a.betas);
      qats::save_summary_csv(a.summary, rows);
    }
  } catch (const std::exception& e) {
    return fail(3, e);
  }
  return 0;
}

struct CacheArgs {
  std::string model_path;
  std::string data_path;
  std::string out;
};

int run_cache(const CacheArgs& a) {
  try {
    const qats::HmmModel model = qats::load_model_json(a.model_path);
    const qats::DataFile data = qats::load_data_csv(a.data_path);
    const qats::CumScores scores = qats::build_cum_scores(model, data.y);
    qats::save_cum_scores(a.out, scores);
  } catch (const std::exception& e) {
    return fail(3, e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QATS sequence decoder and benchmark harness"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Draw a hidden path and observations");
  sim->add_option("--n", sim_args.n, "Sequence length")->required();
  sim->add_option("--m", sim_args.m, "Number of states")->required();
  sim->add_option("--s", sim_args.s, "Expected number of segments")->required();
  sim->add_option("--sigma", sim_args.sigma, "Observation noise standard deviation");
  sim->add_option("--seed", sim_args.seed, "Random seed");
  sim->add_option("--rep", sim_args.rep, "Replication stream id");
  sim->add_option("--out", sim_args.out, "Output CSV (k,x_true,y)")->required();

  DecodeArgs dec_args;
  auto* dec = app.add_subcommand("decode", "Decode observations under a model");
  dec->add_option("--model", dec_args.model_path, "Model JSON")->required();
  dec->add_option("--data", dec_args.data_path, "Data CSV (k,y) or (k,x_true,y)")->required();
  dec->add_option("--out", dec_args.out, "Path CSV (stem for --algo both)")->required();
  dec->add_option("--algo", dec_args.algo, "Decoder")
      ->check(CLI::IsMember({"qats", "viterbi", "both"}));
  dec->add_option("--diag", dec_args.diag, "Diagnostics JSON");
  dec->add_option("--segments", dec_args.segments, "Segmentation CSV (ell,r,state)");
  dec->add_option("--cache", dec_args.cache, "Load the score matrix from this cache");
  dec->add_option("--save-cache", dec_args.save_cache, "Save the score matrix to this cache");
  dec_args.search.attach(dec);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Benchmark decoders over a config grid");
  auto* opt_n = bench->add_option("--n", bench_args.n, "Sequence lengths");
  auto* opt_m = bench->add_option("--m", bench_args.m, "State counts");
  auto* opt_s = bench->add_option("--s", bench_args.s, "Expected segment counts");
  auto* opt_sigma = bench->add_option("--sigma", bench_args.sigma, "Noise levels");
  auto* opt_reps = bench->add_option("--reps", bench_args.reps, "Replications per config");
  bench->add_option("--seed", bench_args.seed, "Random seed");
  bench->add_option("--jobs", bench_args.jobs, "Worker threads (0 = hardware)");
  bench->add_option("--preset", bench_args.preset, "paper-small or paper-headline");
  bench->add_option("--out", bench_args.out, "Record CSV")->required();
  bench->add_option("--summary", bench_args.summary, "Quantile summary CSV");
  bench->add_option("--beta", bench_args.betas, "Summary quantile levels");
  bench_args.search.attach(bench);

  CacheArgs cache_args;
  auto* cache = app.add_subcommand("cache", "Build and store the cumulative score matrix");
  cache->add_option("--model", cache_args.model_path, "Model JSON")->required();
  cache->add_option("--data", cache_args.data_path, "Data CSV")->required();
  cache->add_option("--out", cache_args.out, "Cache file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sim->parsed()) return run_simulate(sim_args);
  if (dec->parsed()) return run_decode(dec_args);
  if (bench->parsed()) {
    bench_args.reps_given = opt_reps->count() > 0;
    bench_args.n_given = opt_n->count() > 0;
    bench_args.m_given = opt_m->count() > 0;
    bench_args.s_given = opt_s->count() > 0;
    bench_args.sigma_given = opt_sigma->count() > 0;
    return run_bench(bench_args);
  }
  if (cache->parsed()) return run_cache(cache_args);
  return 2;
}
