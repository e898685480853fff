#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qats/scores.hpp"

namespace qats {

struct SearchParams {
  double nu = 0.5;     // probe step factor in (0,1)
  int d_o = 3;         // bracket width at which the search turns exhaustive
  int v_o = 20;        // cap on alternations of the two-change search
  int n_seeds = 3;     // seeds of the multi-start two-change search
  bool rotated = false;  // tilt score slices so endpoint values coincide

  void validate() const {
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("SearchParams: nu must be in (0,1)");
    if (d_o <= 1) throw std::invalid_argument("SearchParams: d_o must be > 1");
    if (v_o <= 1) throw std::invalid_argument("SearchParams: v_o must be > 1");
    if (n_seeds < 1) throw std::invalid_argument("SearchParams: n_seeds must be >= 1");
  }
};

// Result of a one-dimensional search. h equals the score re-evaluated at k;
// probes counts evaluations of the underlying score functional.
struct LocalMax1D {
  std::int64_t k = 0;
  double h = kNegInf;
  std::int64_t probes = 0;
};

struct LocalMax2D {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  double h = kNegInf;
  std::int64_t probes = 0;
  int alternations = 0;
};

// Bracket-shrinking search for a local maximum of h over the integer domain
// L:R. M is the initial probe; pass 0 to use the default floor((L+nu*R)/(1+nu)).
// Shrinks the bracket geometrically while keeping the best probe inside, then
// sweeps the residual bracket exhaustively once it is narrower than d_o.
// Ties in the sweep go to the smallest index. The returned score is at least
// as large as every probed value. Probe count is bounded by
// c*log2(R-L) + d_o with a small constant c.
template <typename H>
LocalMax1D optimistic_search(std::int64_t L, std::int64_t R, std::int64_t M, H&& h, double nu,
                             int d_o) {
  if (L > R) throw std::invalid_argument("optimistic_search: empty domain");
  if (M != 0 && (M < L || M > R))
    throw std::invalid_argument("optimistic_search: M must lie in L:R (or be 0)");

  std::int64_t probes = 0;
  auto probe = [&](std::int64_t k) {
    ++probes;
    return h(k);
  };

  if (M == 0) M = static_cast<std::int64_t>(std::floor((L + nu * R) / (1.0 + nu)));

  double h_M = 0.0;
  bool have_M = false;
  while (R - L >= d_o) {
    if (!have_M) {
      h_M = probe(M);
      have_M = true;
    }
    if (R - M > M - L) {
      const std::int64_t W =
          static_cast<std::int64_t>(std::ceil(R - nu * static_cast<double>(R - M)));
      const double h_W = probe(W);
      if (h_W > h_M) {
        L = M;
        M = W;
        h_M = h_W;
      } else {
        R = W;
      }
    } else {
      const std::int64_t W =
          static_cast<std::int64_t>(std::ceil(L + nu * static_cast<double>(M - L)));
      const double h_W = probe(W);
      if (h_W > h_M) {
        R = M;
        M = W;
        h_M = h_W;
      } else {
        L = W;
      }
    }
  }

  LocalMax1D out;
  bool first = true;
  for (std::int64_t k = L; k <= R; ++k) {
    const double v = probe(k);
    if (first || v > out.h) {
      out.h = v;
      out.k = k;
      first = false;
    }
  }
  out.probes = probes;
  return out;
}

// Searches l+1:r for the best single change point of segment l:r, probing the
// two-segment score h2. Requires r - l >= 1.
LocalMax1D osh2(const CumScores& scores, std::int64_t l, std::int64_t r, std::optional<int> x0,
                const SearchParams& params);

// Alternating search for the best change-point pair of segment l:r, seeded at
// (l+1, k_o) with k_o in l+2:r. Alternates one-dimensional searches along the
// two coordinates; whenever the pair becomes adjacent it re-optimizes along
// the diagonal k2 = k1 + 1. Stops when an alternation fails to improve the
// score or after v_o alternations; the returned pair then carries the largest
// score seen. Requires r - l >= 2. If alternation_trace is non-null the score
// after each alternation is appended to it.
LocalMax2D sosh3(const CumScores& scores, std::int64_t l, std::int64_t r, std::optional<int> x0,
                 const SearchParams& params, std::int64_t k_o,
                 std::vector<double>* alternation_trace = nullptr);

// Multi-seed wrapper around sosh3: runs it from n_seeds evenly spaced seeds
// and keeps the best result (ties to the earlier seed). n_seeds is clamped to
// r - l - 1 on short segments. probes aggregates over all seeds.
LocalMax2D osh3(const CumScores& scores, std::int64_t l, std::int64_t r, std::optional<int> x0,
                const SearchParams& params);

// Seed positions used by osh3: l + 2 + floor(i*(r-l-1)/(n_seeds+1)), i=1..n_seeds.
std::vector<std::int64_t> osh3_seeds(std::int64_t l, std::int64_t r, int n_seeds);

}  // namespace qats
