#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qats/viterbi.hpp"

namespace qats {

// Deterministic random stream, bit-exact across platforms for the integer and
// uniform draws. Identity: mt19937_64 (fully specified by the C++ standard)
// seeded with splitmix64(seed + 0x9E3779B97F4A7C15 * (stream + 1)); uniforms
// are ((x >> 11) + 1) * 2^-53 in (0, 1]; normals use the cosine branch of
// Box-Muller; categorical draws pick the smallest index whose cumulative
// probability reaches the uniform. Distinct streams give distinct output for
// the same seed. The standard-library distributions are not used because
// their algorithms are implementation-defined.
class SimRng {
 public:
  SimRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal(double mean, double sd);

  // 1-based index into probs; zero-probability entries are never selected.
  int categorical(std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
};

struct SimConfig {
  std::int64_t n = 0;
  int m = 0;
  std::int64_t s = 0;   // expected number of segments, sets p = (s-1)/(n-1)
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::int64_t replication_id = 0;

  void validate() const;
};

struct SimOutput {
  std::vector<std::int32_t> x_true;
  std::vector<double> y;
  std::int64_t true_segments = 0;  // maximal constant runs of x_true
};

// Markov chain with uniform initial distribution and uniform_transition(m,n,s)
// transitions, then Gaussian observations with mean x_k and deviation sigma.
// The full state path is drawn first, then the observations.
SimOutput simulate_hmm(const SimConfig& config);
void simulate_hmm(const SimConfig& config, SimOutput& out);

// The model matching a simulation config: uniform pi, uniform transitions,
// Gaussian emissions with means 1..m.
HmmModel model_for_config(const SimConfig& config);

// g(i, k) = -log(2 pi sigma^2)/2 - (y_k - means_i)^2 / (2 sigma^2).
LogDensityMatrix gaussian_log_densities(std::span<const double> y, std::span<const double> means,
                                        double sigma);
void gaussian_log_densities(std::span<const double> y, std::span<const double> means, double sigma,
                            LogDensityMatrix& out);

}  // namespace qats
