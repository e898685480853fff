#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qats/matrix.hpp"

namespace qats {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log f_i(y) for state i in 1:m. Must be finite for every observation that is
// fed to the score builders; zero-density observations are rejected there.
using EmissionLogDensity = std::function<double(int state, double y)>;

// Normal emission with state-dependent mean and a shared standard deviation.
class GaussianEmission {
 public:
  GaussianEmission(std::vector<double> means, double sigma)
      : means_(std::move(means)), sigma_(sigma) {
    if (means_.empty()) throw std::invalid_argument("GaussianEmission: means must be nonempty");
    if (!(sigma_ > 0.0)) throw std::invalid_argument("GaussianEmission: sigma must be > 0");
    log_norm_ = -0.5 * std::log(2.0 * std::numbers::pi * sigma_ * sigma_);
  }

  double log_density(int state, double y) const {
    const double z = (y - means_[static_cast<std::size_t>(state - 1)]) / sigma_;
    return log_norm_ - 0.5 * z * z;
  }

  const std::vector<double>& means() const { return means_; }
  double sigma() const { return sigma_; }

 private:
  std::vector<double> means_;
  double sigma_;
  double log_norm_;
};

// Finite-state HMM held in log form. States are 1-based everywhere. Structural
// zeros in pi or the transition matrix are stored as -inf, never as a finite
// sentinel. Immutable after construction; safe to share across threads.
class HmmModel {
 public:
  HmmModel() = default;

  int m() const { return m_; }
  double log_pi(int i) const { return log_pi_[static_cast<std::size_t>(i - 1)]; }
  double q(int i, int j) const { return log_trans_(i - 1, j - 1); }
  double emission_log_density(int i, double y) const { return emission_(i, y); }

  const std::vector<double>& log_pi_vector() const { return log_pi_; }
  const Matrix<double>& log_trans_matrix() const { return log_trans_; }

  // Raw probabilities as supplied at construction (not renormalized).
  const std::vector<double>& pi() const { return pi_; }
  const Matrix<double>& trans() const { return trans_; }

  // Set when the emission is Gaussian; used by the JSON serializer.
  const std::optional<GaussianEmission>& gaussian() const { return gaussian_; }

 private:
  friend HmmModel build_model(std::span<const double> pi, const Matrix<double>& trans,
                              EmissionLogDensity emission,
                              std::optional<GaussianEmission> gaussian);

  int m_ = 0;
  std::vector<double> pi_;
  std::vector<double> log_pi_;
  Matrix<double> trans_;
  Matrix<double> log_trans_;
  EmissionLogDensity emission_;
  std::optional<GaussianEmission> gaussian_;
};

// Validates pi and trans (entries in [0,1], sums within 1e-9 of 1, m >= 2) and
// stores exact logs of the inputs. Throws std::invalid_argument on violations.
HmmModel build_model(std::span<const double> pi, const Matrix<double>& trans,
                     EmissionLogDensity emission,
                     std::optional<GaussianEmission> gaussian = std::nullopt);
HmmModel build_model(std::span<const double> pi, const Matrix<double>& trans,
                     GaussianEmission emission);

// Transition matrix with uniform switching probability p = (s-1)/(n-1): each
// off-diagonal entry is p/(m-1) and the diagonal is 1-p.
Matrix<double> uniform_transition(int m, std::int64_t n, std::int64_t s);

// Expected number of constant segments of a chain of length n whose switch
// probability per step is p: 1 + (n-1)p.
double expected_segments(std::int64_t n, double p);

}  // namespace qats
