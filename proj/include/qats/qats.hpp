#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qats/search.hpp"

namespace qats {

// Thrown when a segment admits no path of at most three constant runs with
// positive probability (all candidate scores -inf).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Segment {
  std::int64_t l = 0;
  std::int64_t r = 0;  // inclusive

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Ordered cover of 1:n by segments with one state per segment. Adjacent
// segments may carry equal states; s() counts segments as produced by the
// decoder, not maximal constant runs.
struct Segmentation {
  std::vector<Segment> segments;
  std::vector<int> states;

  std::int64_t s() const { return static_cast<std::int64_t>(segments.size()); }
  std::int64_t n() const { return segments.empty() ? 0 : segments.back().r; }
};

struct DecodeResult {
  std::vector<std::int32_t> path;
  Segmentation segmentation;
  std::int64_t loop_iterations = 0;
  std::int64_t probes_h2 = 0;
  std::int64_t probes_h3 = 0;
  double wall_ms = 0.0;
};

// Ternary-segmentation decoder. Starts from the single segment 1:n and
// repeatedly scores the current segment as one, two or three constant runs
// (h1 always; the change-point searches when the segment is long enough).
// The best alternative either confirms the segment's state or splits it; ties
// prefer fewer segments. Deterministic: identical inputs give identical
// results apart from wall_ms. Throws InfeasibleError when a segment has no
// admissible candidate.
DecodeResult qats_decode(const HmmModel& model, const CumScores& scores,
                         const SearchParams& params);

// Same, reusing out's buffers; out.path is resized to n.
void qats_decode(const HmmModel& model, const CumScores& scores, const SearchParams& params,
                 DecodeResult& out);

// Expands a segmentation into the per-position state vector.
std::vector<std::int32_t> build_path(const Segmentation& segmentation);
void build_path(const Segmentation& segmentation, std::vector<std::int32_t>& out);

}  // namespace qats
