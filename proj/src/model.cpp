#include "qats/model.hpp"

#include <cmath>
#include <string>

namespace qats {

namespace {

constexpr double kSumTol = 1e-9;
constexpr double kRangeTol = 1e-12;

double checked_log(double p, const char* what, int i, int j) {
  if (p < -kRangeTol || p > 1.0 + kRangeTol) {
    throw std::invalid_argument(std::string("build_model: ") + what + " entry (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ") outside [0,1]: " + std::to_string(p));
  }
  if (p <= 0.0) return kNegInf;
  return std::log(p);
}

}  // namespace

HmmModel build_model(std::span<const double> pi, const Matrix<double>& trans,
                     EmissionLogDensity emission, std::optional<GaussianEmission> gaussian) {
  const int m = static_cast<int>(pi.size());
  if (m < 2) throw std::invalid_argument("build_model: need at least two states");
  if (trans.rows() != m || trans.cols() != m)
    throw std::invalid_argument("build_model: transition matrix must be m x m");
  if (!emission) throw std::invalid_argument("build_model: emission provider must be set");
  if (gaussian && static_cast<int>(gaussian->means().size()) != m)
    throw std::invalid_argument("build_model: emission means must have one entry per state");

  HmmModel model;
  model.m_ = m;
  model.pi_.assign(pi.begin(), pi.end());
  model.trans_ = trans;
  model.log_pi_.resize(pi.size());
  model.log_trans_.resize(m, m);

  double pi_sum = 0.0;
  for (int i = 1; i <= m; ++i) {
    pi_sum += pi[static_cast<std::size_t>(i - 1)];
    model.log_pi_[static_cast<std::size_t>(i - 1)] =
        checked_log(pi[static_cast<std::size_t>(i - 1)], "pi", i, 0);
  }
  if (std::abs(pi_sum - 1.0) > kSumTol)
    throw std::invalid_argument("build_model: pi must sum to 1 (got " + std::to_string(pi_sum) + ")");

  for (int i = 1; i <= m; ++i) {
    double row_sum = 0.0;
    for (int j = 1; j <= m; ++j) {
      row_sum += trans(i - 1, j - 1);
      model.log_trans_(i - 1, j - 1) = checked_log(trans(i - 1, j - 1), "transition", i, j);
    }
    if (std::abs(row_sum - 1.0) > kSumTol)
      throw std::invalid_argument("build_model: transition row " + std::to_string(i) +
                                  " must sum to 1 (got " + std::to_string(row_sum) + ")");
  }

  model.emission_ = std::move(emission);
  model.gaussian_ = std::move(gaussian);
  return model;
}

HmmModel build_model(std::span<const double> pi, const Matrix<double>& trans,
                     GaussianEmission emission) {
  GaussianEmission copy = emission;
  EmissionLogDensity fn = [g = std::move(emission)](int state, double y) {
    return g.log_density(state, y);
  };
  return build_model(pi, trans, std::move(fn), std::move(copy));
}

Matrix<double> uniform_transition(int m, std::int64_t n, std::int64_t s) {
  if (m < 2) throw std::invalid_argument("uniform_transition: need at least two states");
  if (n < 2) throw std::invalid_argument("uniform_transition: need n >= 2");
  if (s < 1) throw std::invalid_argument("uniform_transition: need s >= 1");
  if (s > n) throw std::invalid_argument("uniform_transition: s exceeds n");

  const double p = static_cast<double>(s - 1) / static_cast<double>(n - 1);
  const double off = p / static_cast<double>(m - 1);
  Matrix<double> trans(m, m, off);
  for (int i = 0; i < m; ++i) trans(i, i) = 1.0 - p;
  return trans;
}

double expected_segments(std::int64_t n, double p) {
  if (n < 1) throw std::invalid_argument("expected_segments: need n >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("expected_segments: p must be in [0,1]");
  return 1.0 + static_cast<double>(n - 1) * p;
}

}  // namespace qats
