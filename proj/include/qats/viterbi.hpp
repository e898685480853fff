#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qats/model.hpp"

namespace qats {

// Per-position emission log densities g(i, k) = log f_i(y_k); states and
// positions 1-based. All entries are required to be finite by the builder.
struct LogDensityMatrix {
  Matrix<double> values;  // m x n

  double operator()(int i, std::int64_t k) const { return values(i - 1, k - 1); }
  int m() const { return static_cast<int>(values.rows()); }
  std::int64_t n() const { return values.cols(); }
};

LogDensityMatrix build_log_densities(const HmmModel& model, std::span<const double> y);
void build_log_densities(const HmmModel& model, std::span<const double> y, LogDensityMatrix& out);

// Forward scores and backpointers; sized m x n and m x (n-1). Kept outside the
// decoder so timed runs do not include the allocations.
struct ViterbiWorkspace {
  Matrix<double> rho;
  Matrix<std::int32_t> zeta;
  std::vector<double> prev;
};

struct ViterbiResult {
  std::vector<std::int32_t> path;
  double log_lik = kNegInf;
  // True when every complete path has probability zero; the returned path
  // still traces the argmaxes (ties resolved to the smallest state index).
  bool all_impossible = false;
};

// Exact maximum a posteriori path by dynamic programming, O(m^2 n) time and
// O(mn) memory. Argmax ties resolve to the smallest state index.
ViterbiResult viterbi_decode(const HmmModel& model, const LogDensityMatrix& g);
void viterbi_decode(const HmmModel& model, const LogDensityMatrix& g, ViterbiWorkspace& ws,
                    ViterbiResult& out);

// Joint log likelihood of a complete path and the observations behind g.
double complete_log_lik(const HmmModel& model, const LogDensityMatrix& g,
                        std::span<const std::int32_t> path);

// Exhaustive maximizer of complete_log_lik over all m^n paths; ties go to the
// lexicographically smallest path. Guarded to m^n <= 2^20. Test oracle and
// sanity tool, not a production decoder.
std::pair<std::vector<std::int32_t>, double> brute_force_map(const HmmModel& model,
                                                             const LogDensityMatrix& g);

}  // namespace qats
