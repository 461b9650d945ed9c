#pragma once

// One segmentation run end to end: pick the algorithm, resolve the
// initializer (including the best-of-three mode), score against ground truth
// when available, and fill a RunReport.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fuzzyseg/grid.hpp"
#include "fuzzyseg/metrics.hpp"
#include "fuzzyseg/report.hpp"

namespace fuzzyseg {

struct SegmentOptions {
  Algorithm algorithm = Algorithm::l1fs;
  SolverConfig config;
  /// When non-empty, each listed initializer is tried and the run with the
  /// highest SA (or the lowest energy without ground truth) is kept. Ties
  /// keep the earlier entry. Otherwise config.init is used.
  std::vector<InitStrategy> init_candidates;
  const LabelMap* truth = nullptr;
  /// Pixels excluded from SA (nonzero entries).
  std::span<const std::uint8_t> ignore;
  std::string input_name;
};

struct SegmentOutcome {
  MembershipField u;
  ClassCenters c;
  LabelMap labels;
  RunReport report;
};

/// For fcm / fcm-s2 the report's energy holds the clustering objective in
/// `total` and the KKT fields are zero; the initializer fields are unused.
SegmentOutcome segment(const Image& image, const SegmentOptions& options);

}  // namespace fuzzyseg
