#include <algorithm>
#include <cmath>

#include "fuzzyseg/simd/kernels.hpp"

namespace fuzzyseg::simd {
namespace {

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void add_scaled(const double* a, const double* b, double s, double* out,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s * b[i];
    out[i] = a[i] + t;
  }
}

void acc_scaled_diff(double* y, const double* a, const double* b, double s,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s * (a[i] - b[i]);
    y[i] = y[i] + t;
  }
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void acc_abs_dev(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += std::abs(a[i] - c);
}

void acc_sq_dev(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = a[i] - c;
    const double sq = t * t;
    out[i] += sq;
  }
}

void shrink(const double* vx, const double* vy, double tau, double* ox,
            double* oy, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xx = vx[i] * vx[i];
    const double yy = vy[i] * vy[i];
    const double norm = std::sqrt(xx + yy);
    const double scale =
        norm == 0.0 ? 0.0 : std::max(norm - tau, 0.0) / norm;
    ox[i] = vx[i] * scale;
    oy[i] = vy[i] * scale;
  }
}

// Four-lane accumulation shared by all reductions; see kernels.hpp.
template <typename Term>
double lane_sum(std::size_t n, Term term) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i % 4] += term(i);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum(const double* a, std::size_t n) {
  return lane_sum(n, [a](std::size_t i) { return a[i]; });
}

double dot(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [a, b](std::size_t i) { return a[i] * b[i]; });
}

double sum_sq(const double* a, std::size_t n) {
  return lane_sum(n, [a](std::size_t i) { return a[i] * a[i]; });
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [a, b](std::size_t i) {
    const double t = a[i] - b[i];
    return t * t;
  });
}

double sum_norm2(const double* x, const double* y, std::size_t n) {
  return lane_sum(n, [x, y](std::size_t i) {
    const double xx = x[i] * x[i];
    const double yy = y[i] * y[i];
    return std::sqrt(xx + yy);
  });
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      Backend::scalar, "scalar", sub,   add_scaled, acc_scaled_diff,
      mul,             acc_abs_dev,     acc_sq_dev, shrink,
      sum,             dot,             sum_sq,     sum_sq_diff,
      sum_norm2};
  return table;
}

}  // namespace fuzzyseg::simd
