#include "qats/qats.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace qats {

namespace {

void check_segmentation(const Segmentation& seg) {
  if (seg.segments.size() != seg.states.size())
    throw std::invalid_argument("build_path: segments and states lengths differ");
  std::int64_t expect = 1;
  for (const Segment& s : seg.segments) {
    if (s.l != expect || s.r < s.l)
      throw std::invalid_argument("build_path: segments must tile 1:n in order");
    expect = s.r + 1;
  }
}

}  // namespace

void build_path(const Segmentation& segmentation, std::vector<std::int32_t>& out) {
  check_segmentation(segmentation);
  out.resize(static_cast<std::size_t>(segmentation.n()));
  for (std::size_t u = 0; u < segmentation.segments.size(); ++u) {
    const Segment& s = segmentation.segments[u];
    std::fill(out.begin() + (s.l - 1), out.begin() + s.r,
              static_cast<std::int32_t>(segmentation.states[u]));
  }
}

std::vector<std::int32_t> build_path(const Segmentation& segmentation) {
  std::vector<std::int32_t> out;
  build_path(segmentation, out);
  return out;
}

void qats_decode(const HmmModel& model, const CumScores& scores, const SearchParams& params,
                 DecodeResult& out) {
  params.validate();
  if (&scores.model() != &model)
    throw std::invalid_argument("qats_decode: scores were built for a different model");
  const std::int64_t n = scores.n();

  const auto t0 = std::chrono::steady_clock::now();

  auto& segments = out.segmentation.segments;
  auto& states = out.segmentation.states;
  segments.clear();
  states.clear();
  segments.push_back({1, n});
  states.push_back(1);

  std::int64_t iterations = 0;
  std::int64_t probes_h2 = 0;
  std::int64_t probes_h3 = 0;

  std::size_t u = 0;
  while (u < segments.size()) {
    ++iterations;
    const std::int64_t l = segments[u].l;
    const std::int64_t r = segments[u].r;
    const std::optional<int> x0 =
        (u > 0) ? std::optional<int>(states[u - 1]) : std::nullopt;

    const ScoredStates one = scores.h1(l, r, x0);
    double h2_best = kNegInf;
    double h3_best = kNegInf;
    LocalMax1D split2;
    LocalMax2D split3;
    if (r - l >= 1) {
      split2 = osh2(scores, l, r, x0, params);
      probes_h2 += split2.probes;
      h2_best = split2.h;
      if (r - l >= 2) {
        split3 = osh3(scores, l, r, x0, params);
        probes_h3 += split3.probes;
        h3_best = split3.h;
      }
    }

    // Ties prefer the smaller number of segments.
    int c = 1;
    double best = one.score;
    if (h2_best > best) {
      c = 2;
      best = h2_best;
    }
    if (h3_best > best) {
      c = 3;
      best = h3_best;
    }

    if (c == 1) {
      if (!(one.score > kNegInf)) {
        throw InfeasibleError("qats_decode: segment " + std::to_string(l) + ":" +
                              std::to_string(r) +
                              " admits no path of at most three constant runs");
      }
      states[u] = one.states[0];
      ++u;
    } else if (c == 2) {
      const std::int64_t k = split2.k;
      if (k <= l || k > r) throw std::logic_error("qats_decode: split point outside l+1:r");
      const ScoredStates st = scores.h2(l, r, k, x0);
      segments[u] = {l, k - 1};
      segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(u) + 1, {k, r});
      states[u] = st.states[0];
      states.insert(states.begin() + static_cast<std::ptrdiff_t>(u) + 1, st.states[1]);
    } else {
      const std::int64_t k1 = split3.k1;
      const std::int64_t k2 = split3.k2;
      if (k1 <= l || k2 <= k1 || k2 > r)
        throw std::logic_error("qats_decode: split pair outside the segment");
      const ScoredStates st = scores.h3(l, r, k1, k2, x0);
      segments[u] = {l, k1 - 1};
      segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(u) + 1,
                      {Segment{k1, k2 - 1}, Segment{k2, r}});
      states[u] = st.states[0];
      states.insert(states.begin() + static_cast<std::ptrdiff_t>(u) + 1,
                    {st.states[1], st.states[2]});
    }
  }

  build_path(out.segmentation, out.path);
  out.loop_iterations = iterations;
  out.probes_h2 = probes_h2;
  out.probes_h3 = probes_h3;
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

DecodeResult qats_decode(const HmmModel& model, const CumScores& scores,
                         const SearchParams& params) {
  DecodeResult out;
  qats_decode(model, scores, params, out);
  return out;
}

}  // namespace qats
