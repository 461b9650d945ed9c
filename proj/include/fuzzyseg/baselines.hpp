#pragma once

// Fuzzy c-means baselines (FCM and the median-augmented FCM_S2) and the
// initializers the TV solvers start from.

#include <cstdint>
#include <vector>

#include "fuzzyseg/grid.hpp"

namespace fuzzyseg {

struct FcmConfig {
  double p = 2.0;                 // fuzzifier
  double alpha = 5.0;             // FCM_S2 weight of the median-filtered term
  std::size_t median_window = 5;  // odd, >= 3
  std::size_t max_iters = 300;
  double tol = 1e-6;  // relative center change

  void validate() const;
};

struct FcmResult {
  MembershipField u;
  ClassCenters c;
  std::size_t iterations = 0;
  /// Objective after each membership update, then after each center update.
  std::vector<double> objective_trace;
};

/// Alternating minimization of sum_i sum_x |I(x) - c_i|^2 u_i(x)^p.
/// Centers start from the histogram: N quantiles for grayscale, the N most
/// populated coarse color cells for RGB. `seed` is accepted for interface
/// symmetry and does not influence the result.
FcmResult fcm(const Image& image, std::size_t classes,
              const FcmConfig& config = {}, std::uint64_t seed = 0);

/// FCM on |I - c|^2 + alpha |median(I) - c|^2. Centers are seeded the
/// same way as fcm, from the median-filtered image.
FcmResult fcm_s2(const Image& image, std::size_t classes,
                 const FcmConfig& config = {}, std::uint64_t seed = 0);

/// FCM objective (plain, or the FCM_S2 one when `filtered` is given).
double fcm_objective(const Image& image, const MembershipField& u,
                     const ClassCenters& c, double p,
                     const Image* filtered = nullptr, double alpha = 0.0);

/// Per-channel sliding-window median with edge replication.
Image median_filter(const Image& image, std::size_t window);

struct Initialization {
  MembershipField u;
  ClassCenters c;
};

/// fcm / fcm-s2: that method's output. random-u-fcm-c: U from
/// uniform_membership(seed), C from fcm.
Initialization init_from(InitStrategy strategy, const Image& image,
                         std::size_t classes, std::uint64_t seed,
                         const FcmConfig& config = {});

}  // namespace fuzzyseg
