#include "qats/search.hpp"

#include <algorithm>

namespace qats {

namespace {

// Runs optimistic_search over L:R, optionally on a tilted landscape whose
// endpoint values coincide (slope (h(R)-h(L))/(R-L) subtracted). The returned
// h is always the plain score at the returned k. Falls back to the plain
// landscape on single-point domains or when the tilt is not finite.
template <typename F>
LocalMax1D search_slice(std::int64_t L, std::int64_t R, std::int64_t M, F&& plain, bool rotated,
                        double nu, int d_o) {
  if (!rotated || R - L < 1) return optimistic_search(L, R, M, plain, nu, d_o);
  const double lo = plain(L);
  const double hi = plain(R);
  const double slope = (hi - lo) / static_cast<double>(R - L);
  if (!std::isfinite(slope)) return optimistic_search(L, R, M, plain, nu, d_o);
  LocalMax1D res = optimistic_search(
      L, R, M, [&](std::int64_t k) { return plain(k) - slope * static_cast<double>(k - L); }, nu,
      d_o);
  res.h = plain(res.k);
  return res;
}

}  // namespace

LocalMax1D osh2(const CumScores& scores, std::int64_t l, std::int64_t r, std::optional<int> x0,
                const SearchParams& params) {
  params.validate();
  if (r - l < 1) throw std::invalid_argument("osh2: need r - l >= 1");

  std::int64_t probes = 0;
  auto h2 = [&](std::int64_t k) {
    ++probes;
    return scores.h2(l, r, k, x0).score;
  };
  LocalMax1D res = search_slice(l + 1, r, 0, h2, params.rotated, params.nu, params.d_o);
  res.probes = probes;
  return res;
}

LocalMax2D sosh3(const CumScores& scores, std::int64_t l, std::int64_t r, std::optional<int> x0,
                 const SearchParams& params, std::int64_t k_o,
                 std::vector<double>* alternation_trace) {
  params.validate();
  if (r - l < 2) throw std::invalid_argument("sosh3: need r - l >= 2");
  if (k_o < l + 2 || k_o > r) throw std::invalid_argument("sosh3: seed must lie in l+2:r");

  std::int64_t probes = 0;
  auto h3 = [&](std::int64_t k1, std::int64_t k2) {
    ++probes;
    return scores.h3(l, r, k1, k2, x0).score;
  };

  std::int64_t k1s = l + 1;
  std::int64_t k2s = k_o;
  double h_old = kNegInf;
  double h_new = kNegInf;
  int tau = 0;  // 0: move the first change point, 1: move the second
  int v = 1;

  while ((h_old < h_new && v < params.v_o) || v == 1) {
    h_old = h_new;
    double h_star;
    if (tau == 0) {
      LocalMax1D res = search_slice(
          l + 1, k2s - 1, k1s, [&](std::int64_t k) { return h3(k, k2s); }, params.rotated,
          params.nu, params.d_o);
      k1s = res.k;
      h_star = res.h;
    } else {
      LocalMax1D res = search_slice(
          k1s + 1, r, k2s, [&](std::int64_t k) { return h3(k1s, k); }, params.rotated, params.nu,
          params.d_o);
      k2s = res.k;
      h_star = res.h;
    }
    if (k1s + 1 == k2s) {
      // Adjacent pair: re-optimize along the diagonal k2 = k1 + 1.
      LocalMax1D res = optimistic_search(
          l + 1, r - 1, k1s, [&](std::int64_t k) { return h3(k, k + 1); }, params.nu, params.d_o);
      k1s = res.k;
      k2s = res.k + 1;
      h_star = res.h;
    }
    h_new = h_star;
    if (alternation_trace) alternation_trace->push_back(h_new);
    tau = 1 - tau;
    ++v;
  }

  LocalMax2D out;
  out.k1 = k1s;
  out.k2 = k2s;
  out.h = h_new;
  out.probes = probes;
  out.alternations = v - 1;
  return out;
}

LocalMax2D osh3(const CumScores& scores, std::int64_t l, std::int64_t r, std::optional<int> x0,
                const SearchParams& params) {
  params.validate();
  if (r - l < 2) throw std::invalid_argument("osh3: need r - l >= 2");

  const int n_seeds = static_cast<int>(std::min<std::int64_t>(params.n_seeds, r - l - 1));
  const std::vector<std::int64_t> seeds = osh3_seeds(l, r, n_seeds);

  LocalMax2D best;
  std::int64_t total_probes = 0;
  bool first = true;
  for (const std::int64_t k_o : seeds) {
    LocalMax2D res = sosh3(scores, l, r, x0, params, k_o);
    total_probes += res.probes;
    if (first || res.h > best.h) {
      best = res;
      first = false;
    }
  }
  best.probes = total_probes;
  return best;
}

std::vector<std::int64_t> osh3_seeds(std::int64_t l, std::int64_t r, int n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("osh3_seeds: need n_seeds >= 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_seeds));
  for (int i = 1; i <= n_seeds; ++i) {
    out[static_cast<std::size_t>(i - 1)] =
        l + 2 + (static_cast<std::int64_t>(i) * (r - l - 1)) / (n_seeds + 1);
  }
  return out;
}

}  // namespace qats
