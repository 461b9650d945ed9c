#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fuzzyseg/baselines.hpp"
#include "fuzzyseg/metrics.hpp"
#include "fuzzyseg/synth.hpp"
#include "support.hpp"

using namespace fuzzyseg;

namespace {

Image naive_median(const Image& img, std::size_t window) {
  const long H = static_cast<long>(img.height()), W = static_cast<long>(img.width());
  const long h = static_cast<long>(window / 2);
  std::vector<double> out(img.data().size());
  for (std::size_t ch = 0; ch < img.channels(); ++ch) {
    for (long r = 0; r < H; ++r) {
      for (long c = 0; c < W; ++c) {
        std::vector<double> vals;
        for (long dr = -h; dr <= h; ++dr)
          for (long dc = -h; dc <= h; ++dc) {
            const long rr = std::clamp(r + dr, 0L, H - 1);
            const long cc = std::clamp(c + dc, 0L, W - 1);
            vals.push_back(img.at(ch, rr, cc));
          }
        std::sort(vals.begin(), vals.end());
        out[ch * H * W + r * W + c] = vals[vals.size() / 2];
      }
    }
  }
  return Image::from_data(img.height(), img.width(), img.channels(), std::move(out));
}

double sa_of(const MembershipField& u, const std::vector<int>& labels) {
  return segmentation_accuracy(defuzzify(u), LabelMap(u.grid(), u.classes(), labels),
                               u.classes())
      .sa;
}

void check_monotone(const std::vector<double>& trace) {
  REQUIRE(trace.size() >= 2);
  for (std::size_t k = 1; k < trace.size(); ++k)
    CHECK(trace[k] <= trace[k - 1] + 1e-9 * std::abs(trace[k - 1]));
}

Phantom two_phase() { return make_phantom(PhantomSpec::standard(PhantomKind::two_phase_gray)); }

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("median filter matches a naive windowed sort") {
  Rng rng(3);
  for (std::size_t channels : {1, 3}) {
    for (const Grid g : {Grid{7, 7}, Grid{2, 9}, Grid{1, 1}}) {
      std::vector<double> data(g.size() * channels);
      for (auto& v : data) v = std::floor(rng.uniform(0, 10));
      const Image img = Image::from_data(g.height, g.width, channels, data);
      for (std::size_t window : {3, 5, 7}) CHECK(median_filter(img, window) == naive_median(img, window));
    }
  }
}

TEST_CASE("median filter examples and errors") {
  const Image flat = new_image(6, 5, 1, 42.0);
  CHECK(median_filter(flat, 3) == flat);
  std::vector<double> d(25, 10.0);
  d[12] = 255.0;
  const Image impulse = Image::from_data(5, 5, 1, d);
  CHECK(median_filter(impulse, 3) == new_image(5, 5, 1, 10.0));
  CHECK_THROWS_AS(median_filter(flat, 4), InvalidArgument);
  CHECK_THROWS_AS(median_filter(flat, 1), InvalidArgument);
}

TEST_CASE("FCM recovers a two-point image exactly") {
  const Phantom ph = two_phase();
  const FcmResult r = fcm(ph.image, 2);
  const double lo = std::min(r.c.at(0, 0), r.c.at(1, 0));
  const double hi = std::max(r.c.at(0, 0), r.c.at(1, 0));
  CHECK(std::abs(lo - 20.0) <= 1e-6);
  CHECK(std::abs(hi - 128.0) <= 1e-6);
  CHECK(sa_of(r.u, ph.labels) == 1.0);
  CHECK(r.u.simplex_violation() <= 1e-12);

  const FcmResult s2 = fcm_s2(ph.image, 2);
  CHECK(defuzzify(s2.u).labels().size() == ph.labels.size());
  CHECK(sa_of(s2.u, ph.labels) == 1.0);
}

TEST_CASE("FCM objectives never increase") {
  const Phantom ph = two_phase();
  const Image gn = add_gaussian(ph.image, 30, 4);
  check_monotone(fcm(gn, 2).objective_trace);
  check_monotone(fcm_s2(gn, 2).objective_trace);

  const Phantom five = make_phantom(PhantomSpec::standard(PhantomKind::five_phase_gray));
  check_monotone(fcm(add_spin(five.image, 0.2, 1), 5).objective_trace);
  const Phantom six = make_phantom(PhantomSpec::standard(PhantomKind::six_phase_color));
  check_monotone(fcm(add_rvin(six.image, 0.3, 2), 6).objective_trace);
  check_monotone(fcm_s2(add_rvin(six.image, 0.3, 2), 6).objective_trace);
}

TEST_CASE("FCM objective trace agrees with fcm_objective") {
  const Phantom ph = two_phase();
  const Image gn = add_gaussian(ph.image, 20, 8);
  const FcmResult r = fcm(gn, 2);
  const double obj = fcm_objective(gn, r.u, r.c, 2.0);
  CHECK(obj == doctest::Approx(r.objective_trace.back()).epsilon(1e-9));
}

TEST_CASE("FCM baseline accuracy on noisy two-phase input") {
  const Phantom ph = two_phase();
  const double gn30 = sa_of(fcm(add_gaussian(ph.image, 30, 7), 2).u, ph.labels);
  CHECK(std::abs(gn30 - 0.964) <= 0.01);
  const double rvin20 = sa_of(fcm_s2(add_rvin(ph.image, 0.2, 7), 2).u, ph.labels);
  CHECK(std::abs(rvin20 - 0.997) <= 0.003);
}

TEST_CASE("init_from delegates to the baselines") {
  const Phantom ph = two_phase();
  const Image noisy = add_spin(ph.image, 0.2, 6);
  const FcmResult f = fcm(noisy, 2);
  const Initialization a = init_from(InitStrategy::fcm, noisy, 2, 11);
  CHECK(a.u == f.u);
  CHECK(a.c == f.c);

  const FcmResult s2 = fcm_s2(noisy, 2);
  const Initialization b = init_from(InitStrategy::fcm_s2, noisy, 2, 11);
  CHECK(b.u == s2.u);
  CHECK(b.c == s2.c);

  const Initialization c = init_from(InitStrategy::random_u_fcm_c, noisy, 2, 11);
  CHECK(c.u == uniform_membership(noisy.grid(), 2, 11));
  CHECK(c.c == f.c);
  const Initialization c2 = init_from(InitStrategy::random_u_fcm_c, noisy, 2, 11);
  CHECK(c2.u == c.u);
  CHECK(c2.c == c.c);
}

TEST_CASE("FCM configuration is validated") {
  FcmConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.median_window = 4;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.alpha = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  const Phantom ph = two_phase();
  CHECK_THROWS_AS(fcm(ph.image, 1), InvalidArgument);
}

}
