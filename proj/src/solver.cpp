#include "fuzzyseg/solver.hpp"

#include <chrono>
#include <cmath>

#include "fuzzyseg/baselines.hpp"
#include "fuzzyseg/simd/kernels.hpp"

namespace fuzzyseg {
namespace {

void check_shapes(const Image& image, const MembershipField& u,
                  const ClassCenters& c) {
  if (!(u.grid() == image.grid()))
    throw InvalidArgument("membership grid does not match image");
  if (u.classes() != c.classes())
    throw InvalidArgument("membership and center class counts differ");
  if (c.channels() != image.channels())
    throw InvalidArgument("center and image channel counts differ");
}

// out = rho(I, c_i), plane of one class.
void fidelity_plane(const Image& image, const ClassCenters& c, std::size_t cls,
                    Fidelity fidelity, std::span<double> out) {
  const auto& k = simd::active();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t ch = 0; ch < image.channels(); ++ch) {
    const double* I = image.channel(ch).data();
    if (fidelity == Fidelity::l1)
      k.acc_abs_dev(I, c.at(cls, ch), out.data(), out.size());
    else
      k.acc_sq_dev(I, c.at(cls, ch), out.data(), out.size());
  }
}

}  // namespace

EnergyBreakdown energy(const Image& image, const MembershipField& u,
                       const ClassCenters& c, double lambda, Fidelity fidelity,
                       BoundaryRule boundary) {
  check_shapes(image, u, c);
  const auto& k = simd::active();
  const std::size_t n = image.pixels();
  const Gradient2D gradient(image.grid(), boundary);
  std::vector<double> gx(n), gy(n), rho(n);
  EnergyBreakdown e;
  for (std::size_t i = 0; i < u.classes(); ++i) {
    gradient.apply(u.plane(i), gx, gy);
    e.tv_term += k.sum_norm2(gx.data(), gy.data(), n);
    fidelity_plane(image, c, i, fidelity, rho);
    e.fidelity_term += k.dot(rho.data(), u.plane(i).data(), n);
  }
  e.total = e.tv_term + lambda * e.fidelity_term;
  return e;
}

KktResiduals kkt_residuals(const AdmmState& s, BoundaryRule boundary) {
  const auto& k = simd::active();
  const Grid grid = s.u.grid();
  const std::size_t n = grid.size();
  const Gradient2D gradient(grid, boundary);
  std::vector<double> gx(n), gy(n), div(n);
  double sd = 0.0, sw = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < s.u.classes(); ++i) {
    gradient.apply(s.u.plane(i), gx, gy);
    sd += k.sum_sq_diff(gx.data(), s.d.x.plane(i).data(), n);
    sd += k.sum_sq_diff(gy.data(), s.d.y.plane(i).data(), n);
    sw += k.sum_sq_diff(s.u.plane(i).data(), s.w.plane(i).data(), n);
    gradient.adjoint(s.dual_d.x.plane(i), s.dual_d.y.plane(i), div);
    k.add_scaled(div.data(), s.dual_w.plane(i).data(), 1.0, div.data(), n);
    ss += k.sum_sq(div.data(), n);
  }
  const double scale = static_cast<double>(n * s.u.classes());
  return {std::sqrt(sd / scale), std::sqrt(sw / scale), std::sqrt(ss / scale)};
}

AdmmSolver::AdmmSolver(const Image& image, SolverConfig config,
                       Fidelity fidelity)
    : image_(image),
      config_(config),
      fidelity_(fidelity),
      gradient_(image.grid(), config.boundary),
      poisson_(image.grid(), config.boundary),
      warned_(config.classes, false),
      gx_(image.pixels()),
      gy_(image.pixels()),
      vx_(image.pixels()),
      vy_(image.pixels()),
      rhs_(image.pixels()),
      tmp_(image.pixels()),
      arg_(image.grid(), config.classes) {
  config_.validate();
  if (fidelity_ == Fidelity::l1) {
    // Intensities never change, so each channel is sorted once.
    for (std::size_t ch = 0; ch < image.channels(); ++ch)
      sorted_.emplace_back(image.channel(ch));
  }
}

AdmmState AdmmSolver::initial_state(MembershipField u0, ClassCenters c0) const {
  check_shapes(image_, u0, c0);
  if (u0.classes() != config_.classes)
    throw InvalidArgument("initial membership has the wrong class count");
  const Grid grid = image_.grid();
  const std::size_t N = config_.classes;
  AdmmState s;
  s.d = VectorField(grid, N);
  for (std::size_t i = 0; i < N; ++i)
    gradient_.apply(u0.plane(i), s.d.x.plane(i), s.d.y.plane(i));
  s.w = u0;
  s.u = std::move(u0);
  s.c = std::move(c0);
  s.dual_d = VectorField(grid, N);
  s.dual_w = Planes(grid, N);
  return s;
}

void AdmmSolver::update_d(AdmmState& s) {
  const auto& k = simd::active();
  const std::size_t n = image_.pixels();
  const double inv_r = 1.0 / config_.r;
  for (std::size_t i = 0; i < config_.classes; ++i) {
    gradient_.apply(s.u.plane(i), gx_, gy_);
    k.add_scaled(gx_.data(), s.dual_d.x.plane(i).data(), inv_r, vx_.data(), n);
    k.add_scaled(gy_.data(), s.dual_d.y.plane(i).data(), inv_r, vy_.data(), n);
    k.shrink(vx_.data(), vy_.data(), inv_r, s.d.x.plane(i).data(),
             s.d.y.plane(i).data(), n);
  }
}

void AdmmSolver::update_w(AdmmState& s) {
  const auto& k = simd::active();
  const std::size_t n = image_.pixels();
  const std::size_t N = config_.classes;
  const double inv_r = 1.0 / config_.r;
  const double step = -config_.lambda / config_.r;
  for (std::size_t i = 0; i < N; ++i) {
    fidelity_plane(image_, s.c, i, fidelity_, tmp_);
    auto a = arg_.plane(i);
    k.add_scaled(s.u.plane(i).data(), s.dual_w.plane(i).data(), inv_r,
                 a.data(), n);
    k.add_scaled(a.data(), tmp_.data(), step, a.data(), n);
  }
  std::vector<double> v(N), w(N);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t i = 0; i < N; ++i) v[i] = arg_.plane(i)[p];
    project_simplex(v, w);
    for (std::size_t i = 0; i < N; ++i) s.w.plane(i)[p] = w[i];
  }
}

void AdmmSolver::update_c(AdmmState& s) {
  if (config_.freeze_centers) return;
  const auto& k = simd::active();
  const std::size_t n = image_.pixels();
  for (std::size_t i = 0; i < config_.classes; ++i) {
    const auto wi = s.w.plane(i);
    const double mass = k.sum(wi.data(), n);
    if (!(mass > 0.0)) {
      if (!warned_[i]) {
        warnings_.push_back("class " + std::to_string(i) +
                            " has zero membership mass at iteration " +
                            std::to_string(s.iter + 1) + "; center frozen");
        warned_[i] = true;
      }
      continue;
    }
    for (std::size_t ch = 0; ch < image_.channels(); ++ch) {
      if (fidelity_ == Fidelity::l1) {
        s.c.at(i, ch) = sorted_[ch].median(wi).chosen;
      } else {
        s.c.at(i, ch) = k.dot(image_.channel(ch).data(), wi.data(), n) / mass;
      }
    }
  }
}

double AdmmSolver::update_u(AdmmState& s) {
  const auto& k = simd::active();
  const std::size_t n = image_.pixels();
  const double inv_r = 1.0 / config_.r;
  double change = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < config_.classes; ++i) {
    k.add_scaled(s.d.x.plane(i).data(), s.dual_d.x.plane(i).data(), -inv_r,
                 vx_.data(), n);
    k.add_scaled(s.d.y.plane(i).data(), s.dual_d.y.plane(i).data(), -inv_r,
                 vy_.data(), n);
    gradient_.adjoint(vx_, vy_, rhs_);
    k.add_scaled(s.w.plane(i).data(), s.dual_w.plane(i).data(), -inv_r,
                 tmp_.data(), n);
    k.add_scaled(rhs_.data(), tmp_.data(), 1.0, rhs_.data(), n);
    poisson_.solve(rhs_, tmp_);
    auto ui = s.u.plane(i);
    change += k.sum_sq_diff(tmp_.data(), ui.data(), n);
    norm += k.sum_sq(ui.data(), n);
    std::copy(tmp_.begin(), tmp_.end(), ui.begin());
  }
  return norm > 0.0 ? std::sqrt(change / norm) : std::sqrt(change);
}

void AdmmSolver::update_duals(AdmmState& s) {
  const auto& k = simd::active();
  const std::size_t n = image_.pixels();
  const double r = config_.r;
  for (std::size_t i = 0; i < config_.classes; ++i) {
    gradient_.apply(s.u.plane(i), gx_, gy_);
    k.acc_scaled_diff(s.dual_d.x.plane(i).data(), gx_.data(),
                      s.d.x.plane(i).data(), r, n);
    k.acc_scaled_diff(s.dual_d.y.plane(i).data(), gy_.data(),
                      s.d.y.plane(i).data(), r, n);
    k.acc_scaled_diff(s.dual_w.plane(i).data(), s.u.plane(i).data(),
                      s.w.plane(i).data(), r, n);
  }
}

double AdmmSolver::step(AdmmState& s) {
  update_d(s);
  update_w(s);
  update_c(s);
  const double change = update_u(s);
  update_duals(s);
  ++s.iter;
  return change;
}

AdmmState admm_step(AdmmState state, const Image& image,
                    const SolverConfig& config, Fidelity fidelity) {
  AdmmSolver solver(image, config, fidelity);
  solver.step(state);
  return state;
}

RunResult run_from(const Image& image, const SolverConfig& config,
                   Fidelity fidelity, MembershipField u0, ClassCenters c0) {
  const auto start = std::chrono::steady_clock::now();
  AdmmSolver solver(image, config, fidelity);
  RunResult res;
  res.init = config.init;
  res.state = solver.initial_state(std::move(u0), std::move(c0));
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    IterationRecord rec;
    rec.relative_change = solver.step(res.state);
    rec.energy = energy(image, res.state.u, res.state.c, config.lambda,
                        fidelity, config.boundary);
    if (!std::isfinite(rec.energy.total))
      throw NumericalError("energy became non-finite at iteration " +
                           std::to_string(it + 1));
    rec.kkt = kkt_residuals(res.state, config.boundary);
    res.trace.push_back(rec);
    res.iterations = it + 1;
    if (rec.relative_change < config.epsilon) {
      res.converged = true;
      break;
    }
  }
  res.u = res.state.u;
  res.c = res.state.c;
  res.warnings = solver.warnings();
  res.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

namespace {

RunResult run_with_init(const Image& image, const SolverConfig& config,
                        Fidelity fidelity) {
  config.validate();
  auto init = init_from(config.init, image, config.classes, config.seed);
  return run_from(image, config, fidelity, std::move(init.u),
                  std::move(init.c));
}

}  // namespace

RunResult run(const Image& image, const SolverConfig& config) {
  return run_with_init(image, config, Fidelity::l1);
}

RunResult run_l2fs(const Image& image, const SolverConfig& config) {
  return run_with_init(image, config, Fidelity::l2);
}

}  // namespace fuzzyseg
