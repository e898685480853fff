#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qats/model.hpp"

namespace qats {

// Best states of a local 1-, 2- or 3-segment path together with its log local
// likelihood. For count >= 2 adjacent states are distinct. On an all minus
// infinity landscape the states are the lexicographically first candidate and
// score is -inf; callers must treat such a segment as infeasible.
struct ScoredStates {
  std::array<int, 3> states{0, 0, 0};
  int count = 0;
  double score = kNegInf;
};

enum class SliceDir {
  kHorizontal,  // first change point varies, second is fixed
  kVertical,    // second change point varies, first is fixed
};

namespace detail {

struct ProbeScratch {
  std::vector<double> seg1, seg2, seg3, best_last;
  std::vector<int> arg_last;
};

inline ProbeScratch& probe_scratch() {
  thread_local ProbeScratch s;
  return s;
}

}  // namespace detail

// Cumulative emission scores over one observation sequence:
//   G(i, k) = sum_{t<=k} log f_i(y_t),  G(i, 0) = 0.
// Positions k and states i are 1-based. Every probe below is O(1) in the
// segment length (O(m^2) in the number of states) and reads only G plus the
// model logs, so the object is safe for unlimited concurrent use.
//
// x0 is the confirmed state immediately left of the segment; it must be empty
// exactly when l == 1 (then the initial distribution applies instead).
class CumScores {
 public:
  CumScores() = default;

  const HmmModel& model() const { return *model_; }
  std::int64_t n() const { return n_; }
  int m() const { return model_->m(); }

  double G(int i, std::int64_t k) const { return G_(i - 1, k); }

  // Log local likelihood of the constant path i on l:r.
  double log_lik_1(std::int64_t l, std::int64_t r, int i, std::optional<int> x0) const {
    check_segment(l, r);
    check_x0(l, x0);
    check_state(i);
    return seg_score(l, l, r, i, x0);
  }

  // Two segments: state i1 on l:k-1, i2 on k:r. i1 == i2 is allowed here.
  double log_lik_2(std::int64_t l, std::int64_t k, std::int64_t r, int i1, int i2,
                   std::optional<int> x0) const {
    check_segment(l, r);
    check_x0(l, x0);
    check_state(i1);
    check_state(i2);
    if (k <= l || k > r) throw std::invalid_argument("log_lik_2: k must satisfy l < k <= r");
    return seg_score(l, l, k - 1, i1, x0) + model_->q(i1, i2) + inner_seg_score(k, r, i2);
  }

  // Three segments with jumps at k1 and k2.
  double log_lik_3(std::int64_t l, std::int64_t k1, std::int64_t k2, std::int64_t r, int i1,
                   int i2, int i3, std::optional<int> x0) const {
    check_segment(l, r);
    check_x0(l, x0);
    check_state(i1);
    check_state(i2);
    check_state(i3);
    if (k1 <= l || k2 <= k1 || k2 > r)
      throw std::invalid_argument("log_lik_3: need l < k1 < k2 <= r");
    return seg_score(l, l, k1 - 1, i1, x0) + model_->q(i1, i2) + inner_seg_score(k1, k2 - 1, i2) +
           model_->q(i2, i3) + inner_seg_score(k2, r, i3);
  }

  // Maximizes log_lik_1 over the state; ties go to the smallest index.
  ScoredStates h1(std::int64_t l, std::int64_t r, std::optional<int> x0) const {
    check_segment(l, r);
    check_x0(l, x0);
    ScoredStates out;
    out.count = 1;
    const int m = model_->m();
    for (int i = 1; i <= m; ++i) {
      const double v = seg_score(l, l, r, i, x0);
      if (i == 1 || v > out.score) {
        out.score = v;
        out.states[0] = i;
      }
    }
    return out;
  }

  // Maximizes log_lik_2 over ordered pairs i1 != i2; lexicographic tie-break.
  ScoredStates h2(std::int64_t l, std::int64_t r, std::int64_t k, std::optional<int> x0) const {
    check_segment(l, r);
    check_x0(l, x0);
    if (k <= l || k > r) throw std::invalid_argument("h2: k must satisfy l < k <= r");
    const int m = model_->m();
    auto& sc = detail::probe_scratch();
    sc.seg1.resize(static_cast<std::size_t>(m));
    sc.seg2.resize(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
      sc.seg1[static_cast<std::size_t>(i - 1)] = seg_score(l, l, k - 1, i, x0);
      sc.seg2[static_cast<std::size_t>(i - 1)] = inner_seg_score(k, r, i);
    }
    ScoredStates out;
    out.count = 2;
    bool first = true;
    for (int i1 = 1; i1 <= m; ++i1) {
      for (int i2 = 1; i2 <= m; ++i2) {
        if (i2 == i1) continue;
        const double v = sc.seg1[static_cast<std::size_t>(i1 - 1)] + model_->q(i1, i2) +
                         sc.seg2[static_cast<std::size_t>(i2 - 1)];
        if (first || v > out.score) {
          out.score = v;
          out.states[0] = i1;
          out.states[1] = i2;
          first = false;
        }
      }
    }
    return out;
  }

  // Maximizes log_lik_3 over triples with i1 != i2, i2 != i3 (m(m-1)^2
  // candidates); lexicographic tie-break. The inner maximization over i3 is
  // hoisted per middle state, so a probe costs O(m^2).
  ScoredStates h3(std::int64_t l, std::int64_t r, std::int64_t k1, std::int64_t k2,
                  std::optional<int> x0) const {
    check_segment(l, r);
    check_x0(l, x0);
    if (k1 <= l || k2 <= k1 || k2 > r) throw std::invalid_argument("h3: need l < k1 < k2 <= r");
    const int m = model_->m();
    auto& sc = detail::probe_scratch();
    sc.seg1.resize(static_cast<std::size_t>(m));
    sc.seg2.resize(static_cast<std::size_t>(m));
    sc.seg3.resize(static_cast<std::size_t>(m));
    sc.best_last.resize(static_cast<std::size_t>(m));
    sc.arg_last.resize(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
      sc.seg1[static_cast<std::size_t>(i - 1)] = seg_score(l, l, k1 - 1, i, x0);
      sc.seg2[static_cast<std::size_t>(i - 1)] = inner_seg_score(k1, k2 - 1, i);
      sc.seg3[static_cast<std::size_t>(i - 1)] = inner_seg_score(k2, r, i);
    }
    for (int j = 1; j <= m; ++j) {
      double best = kNegInf;
      int arg = 0;
      for (int i3 = 1; i3 <= m; ++i3) {
        if (i3 == j) continue;
        const double v = model_->q(j, i3) + sc.seg3[static_cast<std::size_t>(i3 - 1)];
        if (arg == 0 || v > best) {
          best = v;
          arg = i3;
        }
      }
      sc.best_last[static_cast<std::size_t>(j - 1)] = best;
      sc.arg_last[static_cast<std::size_t>(j - 1)] = arg;
    }
    ScoredStates out;
    out.count = 3;
    bool first = true;
    for (int i1 = 1; i1 <= m; ++i1) {
      for (int i2 = 1; i2 <= m; ++i2) {
        if (i2 == i1) continue;
        const double v = sc.seg1[static_cast<std::size_t>(i1 - 1)] + model_->q(i1, i2) +
                         sc.seg2[static_cast<std::size_t>(i2 - 1)] +
                         sc.best_last[static_cast<std::size_t>(i2 - 1)];
        if (first || v > out.score) {
          out.score = v;
          out.states[0] = i1;
          out.states[1] = i2;
          out.states[2] = sc.arg_last[static_cast<std::size_t>(i2 - 1)];
          first = false;
        }
      }
    }
    return out;
  }

  // h2 tilted so that the values at both domain endpoints l+1 and r coincide.
  // Falls back to the plain score when the domain is a single point or the
  // tilt is not finite.
  double h2_rotated(std::int64_t l, std::int64_t r, std::int64_t k, std::optional<int> x0) const {
    const double hk = h2(l, r, k, x0).score;
    if (r - l - 1 == 0) return hk;
    const double lo = h2(l, r, l + 1, x0).score;
    const double hi = h2(l, r, r, x0).score;
    const double tilt =
        (hi - lo) * (static_cast<double>(k - l - 1) / static_cast<double>(r - l - 1));
    if (!std::isfinite(tilt)) return hk;
    return hk - tilt;
  }

  // One-dimensional slice of h3 with one change point fixed, tilted so that
  // the slice endpoints coincide. Same degenerate-domain fallback as above.
  double h3_rotated_slice(std::int64_t l, std::int64_t r, std::int64_t fixed,
                          std::int64_t varying, SliceDir dir, std::optional<int> x0) const {
    if (dir == SliceDir::kHorizontal) {
      const std::int64_t k2 = fixed, k = varying;
      const double hk = h3(l, r, k, k2, x0).score;
      const std::int64_t denom = k2 - l - 2;
      if (denom == 0) return hk;
      const double lo = h3(l, r, l + 1, k2, x0).score;
      const double hi = h3(l, r, k2 - 1, k2, x0).score;
      const double tilt =
          (hi - lo) * (static_cast<double>(k - l - 1) / static_cast<double>(denom));
      if (!std::isfinite(tilt)) return hk;
      return hk - tilt;
    }
    const std::int64_t k1 = fixed, k = varying;
    const double hk = h3(l, r, k1, k, x0).score;
    const std::int64_t denom = r - k1 - 1;
    if (denom == 0) return hk;
    const double lo = h3(l, r, k1, k1 + 1, x0).score;
    const double hi = h3(l, r, k1, r, x0).score;
    const double tilt = (hi - lo) * (static_cast<double>(k - k1 - 1) / static_cast<double>(denom));
    if (!std::isfinite(tilt)) return hk;
    return hk - tilt;
  }

  // Internal factory: adopts an already padded m x (n+1) matrix whose first
  // column is zero. Used by the builder and the binary cache loader.
  static CumScores adopt(const HmmModel& model, Matrix<double> padded);

 private:
  // -inf diagonal terms must not turn into NaN on empty runs.
  static double stretch(double q_ii, std::int64_t count) {
    return count == 0 ? 0.0 : q_ii * static_cast<double>(count);
  }

  // Score of the leading segment seg_l:seg_r of a local path starting at l.
  double seg_score(std::int64_t l, std::int64_t seg_l, std::int64_t seg_r, int i,
                   std::optional<int> x0) const {
    const double enter = (l == 1) ? model_->log_pi(i) : model_->q(*x0, i);
    return G(i, seg_r) - G(i, seg_l - 1) + enter + stretch(model_->q(i, i), seg_r - seg_l);
  }

  // Score of a non-leading segment; the jump into it is charged separately.
  double inner_seg_score(std::int64_t seg_l, std::int64_t seg_r, int i) const {
    return G(i, seg_r) - G(i, seg_l - 1) + stretch(model_->q(i, i), seg_r - seg_l);
  }

  void check_segment(std::int64_t l, std::int64_t r) const {
    if (l < 1 || r < l || r > n_) throw std::invalid_argument("CumScores: need 1 <= l <= r <= n");
  }

  void check_state(int i) const {
    if (i < 1 || i > model_->m()) throw std::invalid_argument("CumScores: state out of range");
  }

  void check_x0(std::int64_t l, std::optional<int> x0) const {
    if ((l == 1) == x0.has_value())
      throw std::invalid_argument("CumScores: x0 must be supplied exactly when l > 1");
    if (x0) check_state(*x0);
  }

  friend void build_cum_scores(const HmmModel& model, std::span<const double> y, CumScores& out);

  const HmmModel* model_ = nullptr;
  std::int64_t n_ = 0;
  Matrix<double> G_;  // m x (n+1); column 0 is identically zero
};

// Builds G by plain left-to-right summation of the emission log densities.
// Throws std::invalid_argument if any log density is non-finite (a zero
// emission density makes every local likelihood through that point -inf and
// is rejected up front).
CumScores build_cum_scores(const HmmModel& model, std::span<const double> y);
void build_cum_scores(const HmmModel& model, std::span<const double> y, CumScores& out);

}  // namespace qats
