#pragma once

// Benchmark harness: sweeps noise settings, algorithms and lambda values on a
// synthetic phantom and tabulates segmentation accuracy.
//
// Spec file (JSON):
//   {
//     "phantom": "two-phase-gray",
//     "noise": [{"kind": "spin", "level": 0.4, "seed": 7}, ...],
//     "algorithms": ["l1fs", "fcm"],
//     "lambdas": {"l1fs": [0.005, 0.01]},
//     "inits": ["fcm", "fcm-s2", "random-u-fcm-c"],   optional, default all
//     "repetitions": 1,                                 optional
//     "max_iters": 500,                                 optional
//     "epsilon": 1e-6                                   optional
//   }
// Repetition k uses noise seed + k. Every TV algorithm needs a lambda list
// inside its accepted range; clustering algorithms take none.

#include <optional>
#include <string>
#include <vector>

#include "fuzzyseg/report.hpp"
#include "fuzzyseg/synth.hpp"

namespace fuzzyseg {

struct LambdaRange {
  double lo, hi;
};

/// Accepted tuning ranges: l1fs [0.001, 0.05], l2fs [0.00005, 0.0005].
LambdaRange lambda_range(Algorithm a);

struct BenchSpec {
  PhantomKind phantom = PhantomKind::two_phase_gray;
  std::vector<NoiseSpec> noise;
  std::vector<Algorithm> algorithms;
  std::vector<std::pair<Algorithm, std::vector<double>>> lambdas;
  std::vector<InitStrategy> inits = {InitStrategy::fcm, InitStrategy::fcm_s2,
                                     InitStrategy::random_u_fcm_c};
  std::size_t repetitions = 1;
  std::size_t max_iters = 500;
  std::optional<double> epsilon;

  const std::vector<double>& lambdas_for(Algorithm a) const;
  void validate() const;
};

/// Parses and validates. Throws InvalidArgument with a readable message.
BenchSpec parse_bench_spec(const std::string& text);

struct BenchRow {
  NoiseSpec noise;
  std::size_t repetition = 0;
  Algorithm algorithm = Algorithm::l1fs;
  std::optional<double> lambda;  // empty for clustering algorithms
  std::string init;              // best initializer, empty for clustering
  double sa = 0.0;
  std::size_t iterations = 0;
  std::vector<double> centers;
  std::string error;  // non-empty when the run failed
};

struct BenchResult {
  /// Best over initializers, one row per (noise, repetition, algorithm, lambda).
  std::vector<BenchRow> per_lambda;
  /// Best over lambda as well, one row per (noise, repetition, algorithm).
  std::vector<BenchRow> best;
};

/// Runs every cell with up to `jobs` worker threads. Row order follows the
/// spec regardless of completion order.
BenchResult run_bench(const BenchSpec& spec, std::size_t jobs = 1);

std::string render_csv(const BenchSpec& spec, const std::vector<BenchRow>& rows);
std::string render_table(const BenchSpec& spec, const std::vector<BenchRow>& rows);

}  // namespace fuzzyseg
