#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "fuzzyseg/metrics.hpp"
#include "fuzzyseg/rng.hpp"
#include "fuzzyseg/synth.hpp"

using namespace fuzzyseg;

namespace {

Phantom two_phase() { return make_phantom(PhantomSpec::standard(PhantomKind::two_phase_gray)); }

MembershipField field(std::size_t classes, std::vector<double> per_class) {
  Planes p(Grid{1, 1}, classes);
  for (std::size_t i = 0; i < classes; ++i) p.plane(i)[0] = per_class[i];
  return MembershipField::from_planes(std::move(p));
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("defuzzify takes the argmax with ties to the lowest index") {
  CHECK(defuzzify(field(2, {0.5, 0.5}))[0] == 0);
  CHECK(defuzzify(field(3, {0.2, 0.3, 0.5}))[0] == 2);
  CHECK(defuzzify(field(3, {0.4, 0.4, 0.2}))[0] == 0);
  const Phantom ph = two_phase();
  const LabelMap l = defuzzify(indicator_membership(ph.image.grid(), 2, ph.labels));
  CHECK(std::equal(l.labels().begin(), l.labels().end(), ph.labels.begin()));
}

TEST_CASE("segmentation accuracy examples") {
  const Phantom ph = two_phase();
  const Grid g = ph.image.grid();
  const LabelMap truth(g, 2, ph.labels);
  CHECK(segmentation_accuracy(truth, truth, 2).sa == 1.0);

  std::vector<int> swapped = ph.labels;
  for (int& l : swapped) l = 1 - l;
  const SaReport s = segmentation_accuracy(LabelMap(g, 2, swapped), truth, 2);
  CHECK(s.sa == 1.0);
  CHECK(s.permutation == std::vector<int>{1, 0});

  std::vector<int> wrong = ph.labels;
  for (std::size_t p = 0; p < 164; ++p) wrong[p * 97 % wrong.size()] ^= 1;
  const SaReport w = segmentation_accuracy(LabelMap(g, 2, wrong), truth, 2);
  CHECK(w.sa == doctest::Approx(0.9900).epsilon(1e-4));
  CHECK(w.sa == 1.0 - 164.0 / 16384.0);
  CHECK(w.evaluated == 16384);
  std::size_t total = 0;
  for (auto c : w.confusion) total += c;
  CHECK(total == 16384);
}

TEST_CASE("segmentation accuracy ignores masked pixels") {
  const Grid g{1, 4};
  const LabelMap truth(g, 2, {0, 0, 1, 1});
  const LabelMap pred(g, 2, {0, 1, 1, 1});
  const std::vector<std::uint8_t> mask = {0, 1, 0, 0};
  const SaReport r = segmentation_accuracy(pred, truth, 2, mask);
  CHECK(r.sa == 1.0);
  CHECK(r.evaluated == 3);
  CHECK(segmentation_accuracy(pred, truth, 2).sa == 0.75);
  const std::vector<std::uint8_t> everything(4, 1);
  CHECK(segmentation_accuracy(pred, truth, 2, everything).sa == 1.0);
}

TEST_CASE("segmentation accuracy is invariant under relabeling") {
  Rng rng(6);
  for (std::size_t N : {2, 3, 5, 8}) {
    const Grid g{20, 20};
    std::vector<int> t(g.size()), p(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      t[k] = static_cast<int>(rng.below(N));
      p[k] = rng.uniform() < 0.7 ? t[k] : static_cast<int>(rng.below(N));
    }
    const LabelMap truth(g, N, t);
    const double base = segmentation_accuracy(LabelMap(g, N, p), truth, N).sa;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> perm(N);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t k = N - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);
      std::vector<int> q(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) q[k] = perm[static_cast<std::size_t>(p[k])];
      CHECK(segmentation_accuracy(LabelMap(g, N, q), truth, N).sa == base);
    }
  }
}

TEST_CASE("segmentation accuracy rejects unsupported input") {
  const Grid g{1, 2};
  CHECK_THROWS_AS(segmentation_accuracy(LabelMap(g, 9, {0, 8}), LabelMap(g, 9, {0, 8}), 9),
                  InvalidArgument);
  CHECK_THROWS_AS(
      segmentation_accuracy(LabelMap(g, 2, {0, 1}), LabelMap(Grid{2, 1}, 2, {0, 1}), 2),
      InvalidArgument);
  CHECK_THROWS_AS(LabelMap(g, 2, {0, 2}), InvalidArgument);
  CHECK_THROWS_AS(LabelMap(g, 2, {0}), InvalidArgument);
}

TEST_CASE("reconstruct builds the piecewise-constant image") {
  const Phantom ph = two_phase();
  const LabelMap l(ph.image.grid(), 2, ph.labels);
  CHECK(reconstruct(l, ph.centers) == ph.image);
  const LabelMap again = defuzzify(indicator_membership(ph.image.grid(), 2, ph.labels));
  CHECK(reconstruct(again, ph.centers) == ph.image);

  const LabelMap one(Grid{3, 3}, 2, std::vector<int>(9, 1));
  CHECK(reconstruct(one, ClassCenters(2, 1, std::vector<double>{4, 9})) ==
        new_image(3, 3, 1, 9.0));

  const Phantom six = make_phantom(PhantomSpec::standard(PhantomKind::six_phase_color));
  CHECK(reconstruct(LabelMap(six.image.grid(), 6, six.labels), six.centers) == six.image);
}

TEST_CASE("contrast report") {
  const ClassCenters truth(2, 1, std::vector<double>{20, 128});
  const ContrastReport same = contrast_report(truth, truth);
  CHECK(same.center_error == std::vector<double>{0, 0});
  CHECK(same.range_ratio == 1.0);

  const ClassCenters est(2, 1, std::vector<double>{130, 40});
  const std::vector<int> perm = {1, 0};
  const ContrastReport r = contrast_report(est, truth, perm);
  CHECK(r.center_error == std::vector<double>{2, 20});
  CHECK(r.range_ratio == doctest::Approx(90.0 / 108.0));

  const ClassCenters rgb_t(2, 3, std::vector<double>{0, 0, 0, 100, 200, 50});
  const ClassCenters rgb_e(2, 3, std::vector<double>{10, 0, 0, 100, 190, 50});
  const ContrastReport c = contrast_report(rgb_e, rgb_t);
  CHECK(c.center_error == std::vector<double>{10, 10});
  CHECK(c.range_ratio == doctest::Approx((90.0 + 190.0 + 50.0) / 350.0));
}

}
