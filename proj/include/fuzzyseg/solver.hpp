#pragma once

// ADMM solver for TV-regularized fuzzy segmentation with L1 fidelity (L1FS)
// and its L2-fidelity counterpart (L2FS), sharing one loop:
//
//   D <- shrink(grad U + Lambda_D / r, 1 / r)
//   W <- proj_simplex(U + Lambda_W / r - lambda * rho(I, C) / r)
//   C <- per-class weighted median (L1) or weighted mean (L2) under W
//   U <- (grad^T grad + I)^{-1} (grad^T (D - Lambda_D / r) + W - Lambda_W / r)
//   Lambda_D += r (grad U - D),  Lambda_W += r (U - W)
//
// rho is sum_ch |I_ch - c_ch| for L1 and sum_ch (I_ch - c_ch)^2 for L2.

#include <optional>
#include <string>
#include <vector>

#include "fuzzyseg/grid.hpp"
#include "fuzzyseg/operators.hpp"

namespace fuzzyseg {

enum class Fidelity { l1, l2 };

struct EnergyBreakdown {
  double tv_term = 0.0;
  double fidelity_term = 0.0;
  double total = 0.0;
  friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

struct KktResiduals {
  double primal_d = 0.0;           // |grad U - D|, RMS per class-pixel
  double primal_w = 0.0;           // |U - W|
  double dual_stationarity = 0.0;  // |grad^T Lambda_D + Lambda_W|
  friend bool operator==(const KktResiduals&, const KktResiduals&) = default;
};

struct IterationRecord {
  EnergyBreakdown energy;
  KktResiduals kkt;
  double relative_change = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

/// E(U, C) = sum_i TV(u_i) + lambda * sum_i sum_x rho(I(x), c_i) u_i(x).
EnergyBreakdown energy(const Image& image, const MembershipField& u,
                       const ClassCenters& c, double lambda,
                       Fidelity fidelity = Fidelity::l1,
                       BoundaryRule boundary = BoundaryRule::periodic);

KktResiduals kkt_residuals(const AdmmState& state,
                           BoundaryRule boundary = BoundaryRule::periodic);

/// Owns the precomputed pieces (spectral factors, sorted intensities,
/// scratch buffers) for repeated steps on one image.
class AdmmSolver {
 public:
  AdmmSolver(const Image& image, SolverConfig config,
             Fidelity fidelity = Fidelity::l1);

  const SolverConfig& config() const { return config_; }
  Fidelity fidelity() const { return fidelity_; }

  /// Zero duals; D = grad U0 and W = U0 so the state starts feasible.
  AdmmState initial_state(MembershipField u0, ClassCenters c0) const;

  /// One Gauss-Seidel sweep D, W, C, U, duals. Returns
  /// |U^{k+1} - U^k|_2 / |U^k|_2.
  double step(AdmmState& state);

  /// Messages about classes whose membership mass vanished (center frozen).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void update_d(AdmmState& s);
  void update_w(AdmmState& s);
  void update_c(AdmmState& s);
  double update_u(AdmmState& s);
  void update_duals(AdmmState& s);

  const Image& image_;
  SolverConfig config_;
  Fidelity fidelity_;
  Gradient2D gradient_;
  ScreenedPoissonSolver poisson_;
  std::vector<SortedSamples> sorted_;  // one per channel (L1 only)
  std::vector<bool> warned_;

  std::vector<double> gx_, gy_, vx_, vy_, rhs_, tmp_;
  Planes arg_;
  std::vector<std::string> warnings_;
};

/// Convenience wrapper: one step on a copy of `state`. Builds a solver each
/// call; use AdmmSolver for loops.
AdmmState admm_step(AdmmState state, const Image& image,
                    const SolverConfig& config,
                    Fidelity fidelity = Fidelity::l1);

struct RunResult {
  MembershipField u;
  ClassCenters c;
  IterationTrace trace;
  AdmmState state;
  InitStrategy init = InitStrategy::fcm;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

/// Runs from a given starting point. Throws NumericalError when the energy
/// becomes non-finite.
RunResult run_from(const Image& image, const SolverConfig& config,
                   Fidelity fidelity, MembershipField u0, ClassCenters c0);

/// L1FS from the configured initializer.
RunResult run(const Image& image, const SolverConfig& config);

/// L2FS from the configured initializer.
RunResult run_l2fs(const Image& image, const SolverConfig& config);

}  // namespace fuzzyseg
