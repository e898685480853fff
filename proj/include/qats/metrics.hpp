#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qats/qats.hpp"
#include "qats/simulate.hpp"

namespace qats {

// State-path distance: w == 0 gives the mismatch fraction, w > 0 gives
// (mean |a_k - b_k|^w)^(1/w). Both vectors must have equal nonzero length.
double distance(std::span<const std::int32_t> a, std::span<const std::int32_t> b, double w);

// Nearest-rank sample quantiles: value at rank max(1, ceil(beta * N)) of the
// sorted samples. beta = 0 gives the minimum and beta = 1 the maximum.
std::vector<double> quantiles(std::span<const double> samples, std::span<const double> betas);

struct BenchRecord {
  SimConfig config;
  double t_qats_ms = 0.0;
  double t_viterbi_ms = 0.0;
  double d0_qats = 0.0;
  double d0_viterbi = 0.0;
  double d2_qats = 0.0;
  double d2_viterbi = 0.0;
  std::int64_t s_hat_qats = 0;
};

// Reusable per-worker buffers so the timed decode calls perform no
// length-dependent allocations.
class BenchContext {
 public:
  BenchRecord run(const SimConfig& config, const SearchParams& params);

 private:
  HmmModel model_;
  SimOutput sim_;
  CumScores scores_;
  LogDensityMatrix densities_;
  DecodeResult qats_result_;
  ViterbiWorkspace viterbi_ws_;
  ViterbiResult viterbi_result_;
};

// One replication: simulate, build scores and densities (untimed), then time
// qats_decode and viterbi_decode and compare both paths to the truth.
BenchRecord bench_pair(const SimConfig& config, const SearchParams& params);

struct BenchGrid {
  std::vector<std::int64_t> n;
  std::vector<int> m;
  std::vector<std::int64_t> s;
  std::vector<double> sigma;
};

// Full factorial grid, reps replications each (replication ids 0..reps-1 as
// independent streams of the shared seed). Work is distributed over jobs
// worker threads (jobs <= 0 selects the hardware concurrency); each worker
// runs one discarded warm-up replication when it first meets a configuration.
// Records are ordered by configuration (n-major, then m, s, sigma), then
// replication.
std::vector<BenchRecord> run_bench(const BenchGrid& grid, const SearchParams& params,
                                   std::int64_t reps, std::uint64_t seed, int jobs);

struct SummaryRow {
  std::int64_t n = 0;
  int m = 0;
  std::int64_t s = 0;
  double sigma = 0.0;
  std::int64_t reps = 0;
  double beta = 0.0;
  double t_qats_ms = 0.0;
  double t_viterbi_ms = 0.0;
  double speedup = 0.0;  // quantile of the per-replication t_viterbi/t_qats ratios
  double d0_qats = 0.0;
  double d0_viterbi = 0.0;
  double d2_qats = 0.0;
  double d2_viterbi = 0.0;
};

// Per-configuration quantile summary of a record set, one row per beta.
std::vector<SummaryRow> summarize(std::span<const BenchRecord> records,
                                  std::span<const double> betas);

}  // namespace qats
