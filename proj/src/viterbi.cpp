#include "qats/viterbi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qats {

void build_log_densities(const HmmModel& model, std::span<const double> y, LogDensityMatrix& out) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (n < 1) throw std::invalid_argument("build_log_densities: need at least one observation");
  const int m = model.m();
  out.values.ensure(m, n);
  for (int i = 1; i <= m; ++i) {
    double* row = out.values.row(i - 1);
    for (std::int64_t k = 1; k <= n; ++k) {
      const double g = model.emission_log_density(i, y[static_cast<std::size_t>(k - 1)]);
      if (!std::isfinite(g)) {
        throw std::invalid_argument(
            "build_log_densities: non-finite emission log-density at state " + std::to_string(i) +
            ", position " + std::to_string(k));
      }
      row[k - 1] = g;
    }
  }
}

LogDensityMatrix build_log_densities(const HmmModel& model, std::span<const double> y) {
  LogDensityMatrix out;
  build_log_densities(model, y, out);
  return out;
}

void viterbi_decode(const HmmModel& model, const LogDensityMatrix& g, ViterbiWorkspace& ws,
                    ViterbiResult& out) {
  const int m = g.m();
  const std::int64_t n = g.n();
  if (m != model.m()) throw std::invalid_argument("viterbi_decode: state count mismatch");

  ws.rho.ensure(m, n);
  if (n > 1) ws.zeta.ensure(m, n - 1);
  ws.prev.resize(static_cast<std::size_t>(m));
  out.path.resize(static_cast<std::size_t>(n));

  for (int i = 1; i <= m; ++i) ws.rho(i - 1, 0) = model.log_pi(i) + g(i, 1);

  for (std::int64_t k = 2; k <= n; ++k) {
    for (int j = 1; j <= m; ++j) ws.prev[static_cast<std::size_t>(j - 1)] = ws.rho(j - 1, k - 2);
    for (int i = 1; i <= m; ++i) {
      double best = kNegInf;
      int arg = 0;
      for (int j = 1; j <= m; ++j) {
        const double v = ws.prev[static_cast<std::size_t>(j - 1)] + model.q(j, i);
        if (arg == 0 || v > best) {
          best = v;
          arg = j;
        }
      }
      ws.zeta(i - 1, k - 2) = arg;
      ws.rho(i - 1, k - 1) = best + g(i, k);
    }
  }

  double best = kNegInf;
  int arg = 0;
  for (int i = 1; i <= m; ++i) {
    const double v = ws.rho(i - 1, n - 1);
    if (arg == 0 || v > best) {
      best = v;
      arg = i;
    }
  }
  out.log_lik = best;
  out.all_impossible = !(best > kNegInf);
  out.path[static_cast<std::size_t>(n - 1)] = arg;
  for (std::int64_t k = n - 1; k >= 1; --k) {
    out.path[static_cast<std::size_t>(k - 1)] =
        ws.zeta(out.path[static_cast<std::size_t>(k)] - 1, k - 1);
  }
}

ViterbiResult viterbi_decode(const HmmModel& model, const LogDensityMatrix& g) {
  ViterbiWorkspace ws;
  ViterbiResult out;
  viterbi_decode(model, g, ws, out);
  return out;
}

double complete_log_lik(const HmmModel& model, const LogDensityMatrix& g,
                        std::span<const std::int32_t> path) {
  const std::int64_t n = g.n();
  if (static_cast<std::int64_t>(path.size()) != n)
    throw std::invalid_argument("complete_log_lik: path length must equal n");
  for (const std::int32_t x : path) {
    if (x < 1 || x > model.m()) throw std::invalid_argument("complete_log_lik: state out of range");
  }
  double acc = model.log_pi(path[0]) + g(path[0], 1);
  for (std::int64_t k = 2; k <= n; ++k) {
    acc += model.q(path[static_cast<std::size_t>(k - 2)], path[static_cast<std::size_t>(k - 1)]) +
           g(path[static_cast<std::size_t>(k - 1)], k);
  }
  return acc;
}

std::pair<std::vector<std::int32_t>, double> brute_force_map(const HmmModel& model,
                                                             const LogDensityMatrix& g) {
  const int m = g.m();
  const std::int64_t n = g.n();
  double combos = 1.0;
  for (std::int64_t k = 0; k < n; ++k) {
    combos *= m;
    if (combos > static_cast<double>(1 << 20))
      throw std::invalid_argument("brute_force_map: m^n too large");
  }

  std::vector<std::int32_t> path(static_cast<std::size_t>(n), 1);
  std::vector<std::int32_t> best_path = path;
  double best = complete_log_lik(model, g, path);
  while (true) {
    // Next path in lexicographic order (last position varies fastest).
    std::int64_t pos = n - 1;
    while (pos >= 0 && path[static_cast<std::size_t>(pos)] == m) {
      path[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++path[static_cast<std::size_t>(pos)];
    const double v = complete_log_lik(model, g, path);
    if (v > best) {
      best = v;
      best_path = path;
    }
  }
  return {best_path, best};
}

}  // namespace qats
