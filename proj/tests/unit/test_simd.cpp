#include <cstring>

#include "doctest.h"
#include "fuzzyseg/simd/kernels.hpp"
#include "fuzzyseg/solver.hpp"
#include "fuzzyseg/synth.hpp"
#include "support.hpp"

using namespace fuzzyseg;
using test::random_vector;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void compare_tables(const simd::KernelTable& ref, const simd::KernelTable& alt) {
  Rng rng(1234);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 127, 1000}) {
    for (std::size_t offset : {0, 1, 3}) {
      CAPTURE(n);
      CAPTURE(offset);
      auto A = random_vector(rng, n + offset, -300, 300);
      auto B = random_vector(rng, n + offset, -300, 300);
      if (n > 2) {
        A[offset] = 0.0;
        B[offset] = 0.0;
      }
      const double* a = A.data() + offset;
      const double* b = B.data() + offset;
      const double s = rng.uniform(-2, 2);
      std::vector<double> o1(n), o2(n), p1(n), p2(n);

      ref.sub(a, b, o1.data(), n);
      alt.sub(a, b, o2.data(), n);
      CHECK(same_bits(o1, o2));

      ref.add_scaled(a, b, s, o1.data(), n);
      alt.add_scaled(a, b, s, o2.data(), n);
      CHECK(same_bits(o1, o2));

      o1.assign(B.begin() + offset, B.end());
      o2 = o1;
      ref.acc_scaled_diff(o1.data(), a, b, s, n);
      alt.acc_scaled_diff(o2.data(), a, b, s, n);
      CHECK(same_bits(o1, o2));

      ref.mul(a, b, o1.data(), n);
      alt.mul(a, b, o2.data(), n);
      CHECK(same_bits(o1, o2));

      o1.assign(n, 1.5);
      o2 = o1;
      ref.acc_abs_dev(a, s * 100, o1.data(), n);
      alt.acc_abs_dev(a, s * 100, o2.data(), n);
      CHECK(same_bits(o1, o2));

      ref.acc_sq_dev(a, s * 100, o1.data(), n);
      alt.acc_sq_dev(a, s * 100, o2.data(), n);
      CHECK(same_bits(o1, o2));

      const double tau = std::abs(s) * 100;
      ref.shrink(a, b, tau, o1.data(), p1.data(), n);
      alt.shrink(a, b, tau, o2.data(), p2.data(), n);
      CHECK(same_bits(o1, o2));
      CHECK(same_bits(p1, p2));

      CHECK(same_bits(ref.sum(a, n), alt.sum(a, n)));
      CHECK(same_bits(ref.dot(a, b, n), alt.dot(a, b, n)));
      CHECK(same_bits(ref.sum_sq(a, n), alt.sum_sq(a, n)));
      CHECK(same_bits(ref.sum_sq_diff(a, b, n), alt.sum_sq_diff(a, b, n)));
      CHECK(same_bits(ref.sum_norm2(a, b, n), alt.sum_norm2(a, b, n)));
    }
  }
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar kernels compute the documented formulas") {
  const auto& k = simd::scalar_kernels();
  const std::vector<double> a = {1, -2, 3, 4, 5};
  const std::vector<double> b = {0.5, 2, -1, 0, 2};
  std::vector<double> o(5);
  k.sub(a.data(), b.data(), o.data(), 5);
  CHECK(o == std::vector<double>{0.5, -4, 4, 4, 3});
  k.add_scaled(a.data(), b.data(), 2.0, o.data(), 5);
  CHECK(o == std::vector<double>{2, 2, 1, 4, 9});
  CHECK(k.sum(a.data(), 5) == 11);
  CHECK(k.dot(a.data(), b.data(), 5) == 0.5 - 4 - 3 + 0 + 10);
  CHECK(k.sum_sq(a.data(), 5) == 1 + 4 + 9 + 16 + 25);
  std::vector<double> x = {3, 0}, y = {4, 0}, ox(2), oy(2);
  k.shrink(x.data(), y.data(), 1.0, ox.data(), oy.data(), 2);
  CHECK(ox[0] == doctest::Approx(2.4));
  CHECK(oy[0] == doctest::Approx(3.2));
  CHECK(ox[1] == 0.0);
  CHECK(oy[1] == 0.0);
  CHECK(k.sum_norm2(x.data(), y.data(), 2) == 5.0);
}

TEST_CASE("every backend is bit-identical to the scalar reference") {
  const auto backends = simd::available_backends();
  REQUIRE(!backends.empty());
  CHECK(backends.front()->backend == simd::Backend::scalar);
  for (const auto* table : backends) {
    CAPTURE(table->name);
    compare_tables(simd::scalar_kernels(), *table);
  }
  if (!simd::avx2_kernels()) MESSAGE("AVX2 backend not available on this machine");
}

TEST_CASE("solver output does not depend on the backend") {
  const Phantom ph = make_phantom(PhantomSpec::standard(PhantomKind::two_phase_gray));
  const Image noisy = add_spin(ph.image, 0.3, 3);
  SolverConfig cfg = SolverConfig::l1fs_defaults(2);
  cfg.max_iters = 25;

  REQUIRE(simd::set_active(simd::Backend::scalar));
  const RunResult ref = run(noisy, cfg);
  for (const auto* table : simd::available_backends()) {
    REQUIRE(simd::set_active(table->backend));
    CHECK(&simd::active() == table);
    const RunResult got = run(noisy, cfg);
    CHECK(got.u == ref.u);
    CHECK(got.c == ref.c);
    CHECK(got.iterations == ref.iterations);
  }
  simd::set_active(std::nullopt);
}

TEST_CASE("backend names parse") {
  CHECK(simd::parse_backend("scalar") == simd::Backend::scalar);
  CHECK(simd::parse_backend("avx2") == simd::Backend::avx2);
  CHECK_FALSE(simd::parse_backend("neon").has_value());
  CHECK(simd::to_string(simd::Backend::avx2) == "avx2");
}

}
