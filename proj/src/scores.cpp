#include "qats/scores.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qats {

CumScores CumScores::adopt(const HmmModel& model, Matrix<double> padded) {
  if (padded.rows() != model.m() || padded.cols() < 2)
    throw std::invalid_argument("CumScores: matrix shape does not match the model");
  for (std::int64_t i = 0; i < padded.rows(); ++i) {
    if (padded(i, 0) != 0.0)
      throw std::invalid_argument("CumScores: first column must be zero");
  }
  CumScores out;
  out.model_ = &model;
  out.n_ = padded.cols() - 1;
  out.G_ = std::move(padded);
  return out;
}

void build_cum_scores(const HmmModel& model, std::span<const double> y, CumScores& out) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (n < 1) throw std::invalid_argument("build_cum_scores: need at least one observation");
  const int m = model.m();

  out.G_.ensure(m, n + 1);
  for (int i = 1; i <= m; ++i) {
    double* row = out.G_.row(i - 1);
    row[0] = 0.0;
    double acc = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
      const double g = model.emission_log_density(i, y[static_cast<std::size_t>(k - 1)]);
      if (!std::isfinite(g)) {
        throw std::invalid_argument("build_cum_scores: non-finite emission log-density at state " +
                                    std::to_string(i) + ", position " + std::to_string(k));
      }
      acc += g;
      row[k] = acc;
    }
  }
  out.model_ = &model;
  out.n_ = n;
}

CumScores build_cum_scores(const HmmModel& model, std::span<const double> y) {
  CumScores out;
  build_cum_scores(model, y, out);
  return out;
}

}  // namespace qats
