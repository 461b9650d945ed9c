#pragma once

// Run reports: a self-contained record of one segmentation, stored as JSON.

#include <optional>
#include <string>
#include <vector>

#include "fuzzyseg/grid.hpp"
#include "fuzzyseg/solver.hpp"

namespace fuzzyseg {

enum class Algorithm { l1fs, l2fs, fcm, fcm_s2 };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct RunReport {
  Algorithm algorithm = Algorithm::l1fs;
  SolverConfig config;
  std::string input;
  std::string init_used;  // resolved initializer, e.g. "fcm-s2"
  std::size_t iterations = 0;
  bool converged = false;
  EnergyBreakdown energy;
  KktResiduals kkt;
  std::optional<double> sa;
  std::vector<int> permutation;  // pred label -> truth label, when sa is set
  std::size_t channels = 1;
  std::vector<double> centers;  // class-major, `channels` values per class
  std::vector<std::string> warnings;
  double seconds = 0.0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Pretty-printed JSON; doubles are written with round-trip precision.
std::string to_json(const RunReport& report);

/// Throws InvalidArgument on malformed input.
RunReport report_from_json(const std::string& text);

}  // namespace fuzzyseg
