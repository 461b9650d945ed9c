// Compiled with -mavx2 and without -mfma; see kernels.hpp for the
// bit-equivalence contract with the scalar table.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "fuzzyseg/simd/kernels.hpp"

namespace fuzzyseg::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

inline std::size_t blocks(std::size_t n) { return n - n % kLanes; }

void sub(const double* a, const double* b, double* out, std::size_t n) {
  const std::size_t m = blocks(n);
  for (std::size_t i = 0; i < m; i += kLanes) {
    _mm256_storeu_pd(out + i,
                     _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (std::size_t i = m; i < n; ++i) out[i] = a[i] - b[i];
}

void add_scaled(const double* a, const double* b, double s, double* out,
                std::size_t n) {
  const std::size_t m = blocks(n);
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t i = 0; i < m; i += kLanes) {
    const __m256d t = _mm256_mul_pd(vs, _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), t));
  }
  for (std::size_t i = m; i < n; ++i) {
    const double t = s * b[i];
    out[i] = a[i] + t;
  }
}

void acc_scaled_diff(double* y, const double* a, const double* b, double s,
                     std::size_t n) {
  const std::size_t m = blocks(n);
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t i = 0; i < m; i += kLanes) {
    const __m256d diff =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d t = _mm256_mul_pd(vs, diff);
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), t));
  }
  for (std::size_t i = m; i < n; ++i) {
    const double t = s * (a[i] - b[i]);
    y[i] = y[i] + t;
  }
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  const std::size_t m = blocks(n);
  for (std::size_t i = 0; i < m; i += kLanes) {
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (std::size_t i = m; i < n; ++i) out[i] = a[i] * b[i];
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void acc_abs_dev(const double* a, double c, double* out, std::size_t n) {
  const std::size_t m = blocks(n);
  const __m256d vc = _mm256_set1_pd(c);
  for (std::size_t i = 0; i < m; i += kLanes) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), vc));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), d));
  }
  for (std::size_t i = m; i < n; ++i) out[i] += std::abs(a[i] - c);
}

void acc_sq_dev(const double* a, double c, double* out, std::size_t n) {
  const std::size_t m = blocks(n);
  const __m256d vc = _mm256_set1_pd(c);
  for (std::size_t i = 0; i < m; i += kLanes) {
    const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(a + i), vc);
    const __m256d sq = _mm256_mul_pd(t, t);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), sq));
  }
  for (std::size_t i = m; i < n; ++i) {
    const double t = a[i] - c;
    const double sq = t * t;
    out[i] += sq;
  }
}

void shrink(const double* vx, const double* vy, double tau, double* ox,
            double* oy, std::size_t n) {
  const std::size_t m = blocks(n);
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < m; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(vx + i);
    const __m256d y = _mm256_loadu_pd(vy + i);
    const __m256d norm =
        _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
    const __m256d excess = _mm256_max_pd(_mm256_sub_pd(norm, vtau), zero);
    const __m256d is_zero = _mm256_cmp_pd(norm, zero, _CMP_EQ_OQ);
    const __m256d scale =
        _mm256_blendv_pd(_mm256_div_pd(excess, norm), zero, is_zero);
    _mm256_storeu_pd(ox + i, _mm256_mul_pd(x, scale));
    _mm256_storeu_pd(oy + i, _mm256_mul_pd(y, scale));
  }
  for (std::size_t i = m; i < n; ++i) {
    const double xx = vx[i] * vx[i];
    const double yy = vy[i] * vy[i];
    const double norm = std::sqrt(xx + yy);
    const double scale =
        norm == 0.0 ? 0.0 : std::max(norm - tau, 0.0) / norm;
    ox[i] = vx[i] * scale;
    oy[i] = vy[i] * scale;
  }
}

// Lane-ordered reduction matching the scalar reference.
template <typename VecTerm, typename ScalarTerm>
double lane_sum(std::size_t n, VecTerm vterm, ScalarTerm sterm) {
  const std::size_t m = blocks(n);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < m; i += kLanes) acc = _mm256_add_pd(acc, vterm(i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = m; i < n; ++i) lane[i % kLanes] += sterm(i);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum(const double* a, std::size_t n) {
  return lane_sum(
      n, [a](std::size_t i) { return _mm256_loadu_pd(a + i); },
      [a](std::size_t i) { return a[i]; });
}

double dot(const double* a, const double* b, std::size_t n) {
  return lane_sum(
      n,
      [a, b](std::size_t i) {
        return _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
      },
      [a, b](std::size_t i) { return a[i] * b[i]; });
}

double sum_sq(const double* a, std::size_t n) {
  return lane_sum(
      n,
      [a](std::size_t i) {
        const __m256d v = _mm256_loadu_pd(a + i);
        return _mm256_mul_pd(v, v);
      },
      [a](std::size_t i) { return a[i] * a[i]; });
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return lane_sum(
      n,
      [a, b](std::size_t i) {
        const __m256d t =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        return _mm256_mul_pd(t, t);
      },
      [a, b](std::size_t i) {
        const double t = a[i] - b[i];
        return t * t;
      });
}

double sum_norm2(const double* x, const double* y, std::size_t n) {
  return lane_sum(
      n,
      [x, y](std::size_t i) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        return _mm256_sqrt_pd(
            _mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy)));
      },
      [x, y](std::size_t i) {
        const double xx = x[i] * x[i];
        const double yy = y[i] * y[i];
        return std::sqrt(xx + yy);
      });
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      Backend::avx2, "avx2", sub,   add_scaled, acc_scaled_diff,
      mul,           acc_abs_dev,   acc_sq_dev, shrink,
      sum,           dot,           sum_sq,     sum_sq_diff,
      sum_norm2};
  return table;
}

}  // namespace fuzzyseg::simd::detail
