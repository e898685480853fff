#include "qats/simulate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qats {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

SimRng::SimRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}

double SimRng::normal(double mean, double sd) {
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sd * z;
}

int SimRng::categorical(std::span<const double> probs) {
  const double u = uniform01();
  double cum = 0.0;
  const int m = static_cast<int>(probs.size());
  for (int i = 1; i <= m; ++i) {
    cum += probs[static_cast<std::size_t>(i - 1)];
    if (u <= cum) return i;
  }
  return m;  // guards against cum falling short of 1 by rounding
}

void SimConfig::validate() const {
  if (n < 2) throw std::invalid_argument("SimConfig: need n >= 2");
  if (m < 2) throw std::invalid_argument("SimConfig: need m >= 2");
  if (s < 1) throw std::invalid_argument("SimConfig: need s >= 1");
  if (s > n) throw std::invalid_argument("SimConfig: s exceeds n");
  if (!(sigma > 0.0)) throw std::invalid_argument("SimConfig: sigma must be > 0");
  if (replication_id < 0) throw std::invalid_argument("SimConfig: replication_id must be >= 0");
}

void simulate_hmm(const SimConfig& config, SimOutput& out) {
  config.validate();
  const std::int64_t n = config.n;
  const int m = config.m;

  SimRng rng(config.seed, static_cast<std::uint64_t>(config.replication_id));
  out.x_true.resize(static_cast<std::size_t>(n));
  out.y.resize(static_cast<std::size_t>(n));

  const std::vector<double> pi(static_cast<std::size_t>(m), 1.0 / m);
  // n == 1 has no transitions; any valid switch probability works.
  const Matrix<double> trans = uniform_transition(m, n > 1 ? n : 2, n > 1 ? config.s : 1);

  out.x_true[0] = rng.categorical(pi);
  std::int64_t segments = 1;
  for (std::int64_t k = 2; k <= n; ++k) {
    const std::int32_t prev = out.x_true[static_cast<std::size_t>(k - 2)];
    const std::int32_t next = rng.categorical(
        std::span<const double>(trans.row(prev - 1), static_cast<std::size_t>(m)));
    out.x_true[static_cast<std::size_t>(k - 1)] = next;
    if (next != prev) ++segments;
  }
  out.true_segments = segments;

  for (std::int64_t k = 1; k <= n; ++k) {
    out.y[static_cast<std::size_t>(k - 1)] =
        rng.normal(static_cast<double>(out.x_true[static_cast<std::size_t>(k - 1)]), config.sigma);
  }
}

SimOutput simulate_hmm(const SimConfig& config) {
  SimOutput out;
  simulate_hmm(config, out);
  return out;
}

HmmModel model_for_config(const SimConfig& config) {
  config.validate();
  const std::vector<double> pi(static_cast<std::size_t>(config.m), 1.0 / config.m);
  const Matrix<double> trans =
      uniform_transition(config.m, config.n > 1 ? config.n : 2, config.n > 1 ? config.s : 1);
  std::vector<double> means(static_cast<std::size_t>(config.m));
  for (int i = 1; i <= config.m; ++i) means[static_cast<std::size_t>(i - 1)] = i;
  return build_model(pi, trans, GaussianEmission(std::move(means), config.sigma));
}

void gaussian_log_densities(std::span<const double> y, std::span<const double> means, double sigma,
                            LogDensityMatrix& out) {
  if (y.empty()) throw std::invalid_argument("gaussian_log_densities: need observations");
  if (means.empty()) throw std::invalid_argument("gaussian_log_densities: need means");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_log_densities: sigma must be > 0");

  const int m = static_cast<int>(means.size());
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma);
  const double inv_two_var = 0.5 / (sigma * sigma);
  out.values.ensure(m, n);
  for (int i = 0; i < m; ++i) {
    double* row = out.values.row(i);
    const double mean = means[static_cast<std::size_t>(i)];
    for (std::int64_t k = 0; k < n; ++k) {
      const double d = y[static_cast<std::size_t>(k)] - mean;
      row[k] = log_norm - d * d * inv_two_var;
    }
  }
}

LogDensityMatrix gaussian_log_densities(std::span<const double> y, std::span<const double> means,
                                        double sigma) {
  LogDensityMatrix out;
  gaussian_log_densities(y, means, sigma, out);
  return out;
}

}  // namespace qats
