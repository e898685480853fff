#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qats/metrics.hpp"

namespace qats {

// Model files are JSON objects:
//   {"m": 2, "pi": [...], "trans": [[...], ...],
//    "emission": {"type": "gaussian", "means": [...], "sigma": 1.0}}
HmmModel load_model_json(const std::string& path);
void save_model_json(const HmmModel& model, const std::string& path);

// Observation CSV with header "k,y" or "k,x_true,y"; x_true is empty when the
// file carries no ground truth.
struct DataFile {
  std::vector<double> y;
  std::vector<std::int32_t> x_true;
};
DataFile load_data_csv(const std::string& path);

void save_sim_csv(const std::string& path, const SimOutput& sim);
void save_path_csv(const std::string& path, std::span<const std::int32_t> path_states);
void save_segments_csv(const std::string& path, const Segmentation& segmentation);
void save_bench_csv(const std::string& path, std::span<const BenchRecord> records);
void save_summary_csv(const std::string& path, std::span<const SummaryRow> rows);

// Binary cache of the cumulative score matrix: magic "QATSG1", then m and n as
// 64-bit little-endian integers, then m rows of n doubles (G(i,1..n), row
// major, little-endian). Loading validates the magic and the state count and
// reproduces the in-memory matrix bit-exactly.
void save_cum_scores(const std::string& path, const CumScores& scores);
CumScores load_cum_scores(const std::string& path, const HmmModel& model);

}  // namespace qats
