#include "fuzzyseg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzyseg/rng.hpp"

namespace fuzzyseg {

Planes::Planes(Grid grid, std::size_t count, double fill)
    : grid_(grid), count_(count), data_(grid.size() * count, fill) {}

bool Planes::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

namespace {

void check_image_dims(std::size_t height, std::size_t width,
                      std::size_t channels) {
  if (height == 0 || width == 0)
    throw InvalidArgument("image dimensions must be at least 1x1");
  if (channels != 1 && channels != 3)
    throw InvalidArgument("image must have 1 or 3 channels, got " +
                          std::to_string(channels));
}

}  // namespace

Image Image::filled(std::size_t height, std::size_t width,
                    std::size_t channels, double fill) {
  check_image_dims(height, width, channels);
  if (!std::isfinite(fill)) throw InvalidArgument("fill value must be finite");
  return Image(Planes(Grid{height, width}, channels, fill));
}

Image Image::from_data(std::size_t height, std::size_t width,
                       std::size_t channels, std::vector<double> data) {
  check_image_dims(height, width, channels);
  if (data.size() != height * width * channels)
    throw InvalidArgument("image data length does not match dimensions");
  Planes planes(Grid{height, width}, channels);
  std::copy(data.begin(), data.end(), planes.data().begin());
  if (!planes.all_finite())
    throw InvalidArgument("image data contains non-finite values");
  return Image(std::move(planes));
}

double Image::min_value() const {
  auto d = planes_.data();
  return *std::min_element(d.begin(), d.end());
}

double Image::max_value() const {
  auto d = planes_.data();
  return *std::max_element(d.begin(), d.end());
}

Image new_image(std::size_t height, std::size_t width, std::size_t channels,
                double fill) {
  return Image::filled(height, width, channels, fill);
}

MembershipField::MembershipField(Grid grid, std::size_t classes)
    : planes_(grid, classes) {}

MembershipField MembershipField::from_planes(Planes planes, double tol) {
  if (planes.count() < 2)
    throw InvalidArgument("membership field needs at least 2 classes");
  MembershipField field;
  field.planes_ = std::move(planes);
  if (!field.planes_.all_finite())
    throw InvalidArgument("membership field contains non-finite values");
  if (field.simplex_violation() > tol)
    throw InvalidArgument("membership field violates the simplex constraint");
  return field;
}

double MembershipField::simplex_violation() const {
  const std::size_t n = planes_.plane_size();
  double worst = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < classes(); ++i) {
      const double v = planes_.plane(i)[p];
      worst = std::max(worst, -v);
      sum += v;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

MembershipField uniform_membership(Grid grid, std::size_t classes,
                                   std::uint64_t seed) {
  if (classes < 2) throw InvalidArgument("uniform_membership needs N >= 2");
  if (grid.size() == 0) throw InvalidArgument("empty grid");
  MembershipField u(grid, classes);
  Rng rng(seed);
  std::vector<double> draw(classes);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double sum = 0.0;
    for (auto& v : draw) {
      // (0,1]: keeps the normalizer positive.
      v = 1.0 - rng.uniform();
      sum += v;
    }
    for (std::size_t i = 0; i < classes; ++i) u.plane(i)[p] = draw[i] / sum;
  }
  return u;
}

MembershipField indicator_membership(Grid grid, std::size_t classes,
                                     std::span<const int> labels) {
  if (classes < 2) throw InvalidArgument("indicator_membership needs N >= 2");
  if (labels.size() != grid.size())
    throw InvalidArgument("label map does not match grid");
  MembershipField u(grid, classes);
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const int l = labels[p];
    if (l < 0 || static_cast<std::size_t>(l) >= classes)
      throw InvalidArgument("label out of range");
    u.plane(static_cast<std::size_t>(l))[p] = 1.0;
  }
  return u;
}

ClassCenters::ClassCenters(std::size_t classes, std::size_t channels,
                           std::vector<double> values)
    : classes_(classes), channels_(channels), values_(std::move(values)) {
  if (values_.size() != classes * channels)
    throw InvalidArgument("class center count does not match N * channels");
}

std::string to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::fcm: return "fcm";
    case InitStrategy::fcm_s2: return "fcm-s2";
    case InitStrategy::random_u_fcm_c: return "random-u-fcm-c";
  }
  return "?";
}

InitStrategy parse_init_strategy(const std::string& name) {
  if (name == "fcm") return InitStrategy::fcm;
  if (name == "fcm-s2") return InitStrategy::fcm_s2;
  if (name == "random-u-fcm-c") return InitStrategy::random_u_fcm_c;
  throw InvalidArgument("unknown initialization strategy '" + name + "'");
}

std::string to_string(BoundaryRule b) {
  return b == BoundaryRule::periodic ? "periodic" : "symmetric";
}

BoundaryRule parse_boundary_rule(const std::string& name) {
  if (name == "periodic") return BoundaryRule::periodic;
  if (name == "symmetric") return BoundaryRule::symmetric;
  throw InvalidArgument("unknown boundary rule '" + name + "'");
}

void SolverConfig::validate() const {
  if (classes < 2) throw InvalidArgument("classes must be >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("lambda must be > 0");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("r must be > 0");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
}

SolverConfig SolverConfig::l1fs_defaults(std::size_t classes) {
  SolverConfig c;
  c.classes = classes;
  c.lambda = 0.01;
  c.epsilon = classes == 2 ? 1e-6 : 1e-4;
  return c;
}

SolverConfig SolverConfig::l2fs_defaults(std::size_t classes) {
  SolverConfig c = l1fs_defaults(classes);
  c.lambda = 0.0002;
  return c;
}

}  // namespace fuzzyseg
