#include "fuzzyseg/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

#include "fuzzyseg/simd/kernels.hpp"

namespace fuzzyseg {

void Gradient2D::apply(std::span<const double> u, std::span<double> gx,
                       std::span<double> gy) const {
  const auto& k = simd::active();
  const std::size_t H = grid_.height, W = grid_.width;
  const bool periodic = boundary_ == BoundaryRule::periodic;

  for (std::size_t i = 0; i < H; ++i) {
    const double* row = u.data() + i * W;
    double* out = gx.data() + i * W;
    k.sub(row + 1, row, out, W - 1);
    out[W - 1] = periodic ? row[0] - row[W - 1] : 0.0;
  }

  k.sub(u.data() + W, u.data(), gy.data(), (H - 1) * W);
  double* last = gy.data() + (H - 1) * W;
  if (periodic) {
    k.sub(u.data(), u.data() + (H - 1) * W, last, W);
  } else {
    std::fill(last, last + W, 0.0);
  }
}

void Gradient2D::adjoint(std::span<const double> px, std::span<const double> py,
                         std::span<double> out) const {
  const auto& k = simd::active();
  const std::size_t H = grid_.height, W = grid_.width;

  if (boundary_ == BoundaryRule::periodic) {
    for (std::size_t i = 0; i < H; ++i) {
      const double* p = px.data() + i * W;
      double* o = out.data() + i * W;
      k.sub(p, p + 1, o + 1, W - 1);
      o[0] = p[W - 1] - p[0];
    }
    k.acc_scaled_diff(out.data() + W, py.data(), py.data() + W, 1.0,
                      (H - 1) * W);
    k.acc_scaled_diff(out.data(), py.data() + (H - 1) * W, py.data(), 1.0, W);
    return;
  }

  // Symmetric rule: the last column of px and last row of py are ignored.
  for (std::size_t i = 0; i < H; ++i) {
    const double* p = px.data() + i * W;
    double* o = out.data() + i * W;
    if (W == 1) {
      o[0] = 0.0;
      continue;
    }
    o[0] = -p[0];
    k.sub(p, p + 1, o + 1, W - 2);
    o[W - 1] = p[W - 2];
  }
  if (H == 1) return;
  k.add_scaled(out.data(), py.data(), -1.0, out.data(), W);
  k.acc_scaled_diff(out.data() + W, py.data(), py.data() + W, 1.0,
                    (H - 2) * W);
  double* o_last = out.data() + (H - 1) * W;
  k.add_scaled(o_last, py.data() + (H - 2) * W, 1.0, o_last, W);
}

GradientPair grad(Grid grid, std::span<const double> u, BoundaryRule boundary) {
  if (u.size() != grid.size()) throw InvalidArgument("grad: size mismatch");
  GradientPair g{std::vector<double>(u.size()), std::vector<double>(u.size())};
  Gradient2D(grid, boundary).apply(u, g.x, g.y);
  return g;
}

std::vector<double> div_adjoint(Grid grid, std::span<const double> px,
                                std::span<const double> py,
                                BoundaryRule boundary) {
  if (px.size() != grid.size() || py.size() != grid.size())
    throw InvalidArgument("div_adjoint: size mismatch");
  std::vector<double> out(grid.size());
  Gradient2D(grid, boundary).adjoint(px, py, out);
  return out;
}

Vec2 shrink(Vec2 v, double tau) {
  Vec2 out{};
  simd::scalar_kernels().shrink(&v[0], &v[1], tau, &out[0], &out[1], 1);
  return out;
}

void project_simplex(std::span<const double> in, std::span<double> out) {
  const std::size_t n = in.size();
  if (out.size() != n) throw InvalidArgument("project_simplex: size mismatch");

  double in_sum = 0.0;
  bool nonnegative = true;
  for (double v : in) {
    in_sum += v;
    nonnegative = nonnegative && v >= 0.0;
  }
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n);
  if (nonnegative && std::abs(in_sum - 1.0) <= slack) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }

  constexpr std::size_t kInline = 16;
  std::array<double, kInline> buf_inline;
  std::vector<double> buf_heap;
  double* sorted = buf_inline.data();
  if (n > kInline) {
    buf_heap.resize(n);
    sorted = buf_heap.data();
  }
  std::copy(in.begin(), in.end(), sorted);
  std::sort(sorted, sorted + n, std::greater<>());

  // Largest support size rho with sorted[rho-1] above the running threshold.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += sorted[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }

  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::max(in[j] - theta, 0.0);
    total += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= total;
}

std::vector<double> project_simplex(std::span<const double> in) {
  std::vector<double> out(in.size());
  project_simplex(in, out);
  return out;
}

namespace {

WeightedMedian scan_median(std::span<const double> sorted,
                           std::span<const std::size_t> order,
                           std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t j : order) total += weights[j];
  if (!(total > 0.0))
    throw DegenerateWeights("weighted median: total weight is not positive");

  std::size_t low = sorted.size(), high = sorted.size();
  double cumsum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cumsum += weights[order[k]];
    const double h = total - 2.0 * cumsum;
    if (low == sorted.size() && h <= 0.0) low = k;
    if (h < 0.0) {
      high = k;
      break;
    }
  }
  // Rounding in the partial sums can only leave `high` unset at the end.
  if (high == sorted.size()) high = sorted.size() - 1;
  if (low == sorted.size()) low = high;
  return {sorted[low], sorted[high], sorted[low]};
}

std::vector<std::size_t> stable_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] < values[b];
                   });
  return order;
}

}  // namespace

WeightedMedian weighted_median(std::span<const double> values,
                               std::span<const double> weights) {
  if (values.empty()) throw InvalidArgument("weighted median of empty set");
  if (values.size() != weights.size())
    throw InvalidArgument("weighted median: values and weights differ in size");
  return SortedSamples(values).median(weights);
}

SortedSamples::SortedSamples(std::span<const double> values)
    : order_(stable_order(values)), sorted_(values.size()) {
  for (std::size_t k = 0; k < order_.size(); ++k)
    sorted_[k] = values[order_[k]];
}

WeightedMedian SortedSamples::median(std::span<const double> weights) const {
  if (order_.empty()) throw InvalidArgument("weighted median of empty set");
  if (weights.size() != order_.size())
    throw InvalidArgument("weighted median: weight count mismatch");
  return scan_median(sorted_, order_, weights);
}

// ---------------------------------------------------------------------------

namespace {

// fftw planner calls are not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double sin_sq(double x) {
  const double s = std::sin(x);
  return s * s;
}

}  // namespace

struct ScreenedPoissonSolver::Impl {
  Grid grid;
  BoundaryRule boundary;
  double* real = nullptr;
  double* spec = nullptr;  // complex interleaved (periodic) or real (DCT)
  std::vector<double> factor;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  Impl(Grid g, BoundaryRule b) : grid(g), boundary(b) {
    const int H = static_cast<int>(g.height), W = static_cast<int>(g.width);
    const double pi = std::numbers::pi;
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(g.size());
    if (b == BoundaryRule::periodic) {
      const std::size_t wc = g.width / 2 + 1;
      const std::size_t nc = g.height * wc;
      spec = fftw_alloc_real(2 * nc);
      auto* cplx = reinterpret_cast<fftw_complex*>(spec);
      forward = fftw_plan_dft_r2c_2d(H, W, real, cplx, FFTW_ESTIMATE);
      inverse = fftw_plan_dft_c2r_2d(H, W, cplx, real, FFTW_ESTIMATE);
      factor.resize(2 * nc);
      const double norm = static_cast<double>(g.size());
      for (std::size_t k = 0; k < g.height; ++k) {
        const double ey = 4.0 * sin_sq(pi * static_cast<double>(k) / H);
        for (std::size_t l = 0; l < wc; ++l) {
          const double ex = 4.0 * sin_sq(pi * static_cast<double>(l) / W);
          const double f = 1.0 / ((1.0 + ey + ex) * norm);
          factor[2 * (k * wc + l)] = f;
          factor[2 * (k * wc + l) + 1] = f;
        }
      }
    } else {
      spec = fftw_alloc_real(g.size());
      forward = fftw_plan_r2r_2d(H, W, real, spec, FFTW_REDFT10, FFTW_REDFT10,
                                 FFTW_ESTIMATE);
      inverse = fftw_plan_r2r_2d(H, W, spec, real, FFTW_REDFT01, FFTW_REDFT01,
                                 FFTW_ESTIMATE);
      factor.resize(g.size());
      const double norm = 4.0 * static_cast<double>(g.size());
      for (std::size_t k = 0; k < g.height; ++k) {
        const double ey = 4.0 * sin_sq(pi * static_cast<double>(k) / (2.0 * H));
        for (std::size_t l = 0; l < g.width; ++l) {
          const double ex =
              4.0 * sin_sq(pi * static_cast<double>(l) / (2.0 * W));
          factor[k * g.width + l] = 1.0 / ((1.0 + ey + ex) * norm);
        }
      }
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
    fftw_free(real);
    fftw_free(spec);
  }

  void solve(std::span<const double> rhs, std::span<double> out) {
    std::copy(rhs.begin(), rhs.end(), real);
    fftw_execute(forward);
    simd::active().mul(spec, factor.data(), spec, factor.size());
    fftw_execute(inverse);
    std::copy(real, real + grid.size(), out.begin());
  }
};

ScreenedPoissonSolver::ScreenedPoissonSolver(Grid grid, BoundaryRule boundary) {
  if (grid.size() == 0) throw InvalidArgument("empty grid");
  impl_ = std::make_unique<Impl>(grid, boundary);
}

ScreenedPoissonSolver::~ScreenedPoissonSolver() = default;
ScreenedPoissonSolver::ScreenedPoissonSolver(ScreenedPoissonSolver&&) noexcept =
    default;
ScreenedPoissonSolver& ScreenedPoissonSolver::operator=(
    ScreenedPoissonSolver&&) noexcept = default;

const Grid& ScreenedPoissonSolver::grid() const { return impl_->grid; }

void ScreenedPoissonSolver::solve(std::span<const double> rhs,
                                  std::span<double> out) {
  if (rhs.size() != impl_->grid.size() || out.size() != impl_->grid.size())
    throw InvalidArgument("screened Poisson solve: size mismatch");
  impl_->solve(rhs, out);
}

std::vector<double> solve_screened_poisson(Grid grid,
                                           std::span<const double> rhs,
                                           BoundaryRule boundary) {
  ScreenedPoissonSolver solver(grid, boundary);
  std::vector<double> out(grid.size());
  solver.solve(rhs, out);
  return out;
}

}  // namespace fuzzyseg
