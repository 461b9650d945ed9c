#pragma once

// Core value types: pixel grids, images, membership fields, vector fields,
// class centers and solver configuration.
//
// Storage is row-major and plane-major: plane k of an H x W field occupies
// data[k*H*W, (k+1)*H*W). Images keep one plane per channel, membership
// fields one plane per class.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzyseg {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Grid {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return height * width; }
  std::size_t index(std::size_t row, std::size_t col) const {
    return row * width + col;
  }
  friend bool operator==(const Grid&, const Grid&) = default;
};

/// A stack of equally sized scalar planes on one grid.
class Planes {
 public:
  Planes() = default;
  Planes(Grid grid, std::size_t count, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  std::size_t count() const { return count_; }
  std::size_t plane_size() const { return grid_.size(); }

  std::span<double> plane(std::size_t k) {
    return {data_.data() + k * grid_.size(), grid_.size()};
  }
  std::span<const double> plane(std::size_t k) const {
    return {data_.data() + k * grid_.size(), grid_.size()};
  }

  double& at(std::size_t k, std::size_t row, std::size_t col) {
    return data_[k * grid_.size() + grid_.index(row, col)];
  }
  double at(std::size_t k, std::size_t row, std::size_t col) const {
    return data_[k * grid_.size() + grid_.index(row, col)];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const Planes&, const Planes&) = default;

 private:
  Grid grid_{};
  std::size_t count_ = 0;
  std::vector<double> data_;
};

class Image {
 public:
  Image() = default;

  /// Throws InvalidArgument unless height, width >= 1 and channels is 1 or 3.
  static Image filled(std::size_t height, std::size_t width,
                      std::size_t channels, double fill);

  /// Validates dimensions, data length and finiteness.
  static Image from_data(std::size_t height, std::size_t width,
                         std::size_t channels, std::vector<double> data);

  const Grid& grid() const { return planes_.grid(); }
  std::size_t height() const { return planes_.grid().height; }
  std::size_t width() const { return planes_.grid().width; }
  std::size_t channels() const { return planes_.count(); }
  std::size_t pixels() const { return planes_.grid().size(); }

  std::span<const double> channel(std::size_t ch) const {
    return planes_.plane(ch);
  }
  std::span<const double> data() const { return planes_.data(); }
  double at(std::size_t ch, std::size_t row, std::size_t col) const {
    return planes_.at(ch, row, col);
  }

  double min_value() const;
  double max_value() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  explicit Image(Planes planes) : planes_(std::move(planes)) {}
  Planes planes_;
};

Image new_image(std::size_t height, std::size_t width, std::size_t channels,
                double fill);

/// Per-class fields u_i on a grid; each pixel's vector lies on the simplex.
class MembershipField {
 public:
  MembershipField() = default;
  MembershipField(Grid grid, std::size_t classes);  // all zeros, not feasible

  /// Throws InvalidArgument if classes < 2 or the simplex constraints are
  /// violated by more than `tol`.
  static MembershipField from_planes(Planes planes, double tol = 1e-9);

  const Grid& grid() const { return planes_.grid(); }
  std::size_t classes() const { return planes_.count(); }

  std::span<double> plane(std::size_t i) { return planes_.plane(i); }
  std::span<const double> plane(std::size_t i) const {
    return planes_.plane(i);
  }
  Planes& planes() { return planes_; }
  const Planes& planes() const { return planes_; }

  /// Largest violation of nonnegativity or sum-to-one over all pixels.
  double simplex_violation() const;

  friend bool operator==(const MembershipField&,
                         const MembershipField&) = default;

 private:
  Planes planes_;
};

/// Per-class fields drawn i.i.d. uniform on [0,1] and normalized per pixel.
MembershipField uniform_membership(Grid grid, std::size_t classes,
                                   std::uint64_t seed);

/// Hard indicator memberships from a label map (labels < classes).
MembershipField indicator_membership(Grid grid, std::size_t classes,
                                     std::span<const int> labels);

/// Per-class 2-vector fields: x holds horizontal, y vertical components.
struct VectorField {
  Planes x;
  Planes y;

  VectorField() = default;
  VectorField(Grid grid, std::size_t count) : x(grid, count), y(grid, count) {}
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

class ClassCenters {
 public:
  ClassCenters() = default;
  ClassCenters(std::size_t classes, std::size_t channels, double fill = 0.0)
      : classes_(classes), channels_(channels),
        values_(classes * channels, fill) {}
  ClassCenters(std::size_t classes, std::size_t channels,
               std::vector<double> values);

  std::size_t classes() const { return classes_; }
  std::size_t channels() const { return channels_; }
  double& at(std::size_t cls, std::size_t ch) {
    return values_[cls * channels_ + ch];
  }
  double at(std::size_t cls, std::size_t ch) const {
    return values_[cls * channels_ + ch];
  }
  std::span<const double> center(std::size_t cls) const {
    return {values_.data() + cls * channels_, channels_};
  }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const ClassCenters&, const ClassCenters&) = default;

 private:
  std::size_t classes_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> values_;
};

enum class BoundaryRule { periodic, symmetric };

enum class InitStrategy { fcm, fcm_s2, random_u_fcm_c };

std::string to_string(InitStrategy s);
InitStrategy parse_init_strategy(const std::string& name);
std::string to_string(BoundaryRule b);
BoundaryRule parse_boundary_rule(const std::string& name);

struct SolverConfig {
  std::size_t classes = 2;
  double lambda = 0.01;
  double r = 1.0;
  double epsilon = 1e-6;
  std::size_t max_iters = 500;
  InitStrategy init = InitStrategy::fcm;
  std::uint64_t seed = 0;
  BoundaryRule boundary = BoundaryRule::periodic;
  /// Skip the C-update (convex sub-case with fixed centers).
  bool freeze_centers = false;

  /// Throws InvalidArgument when any invariant fails.
  void validate() const;

  /// Defaults for L1FS: lambda 0.01, eps 1e-6 for two classes else 1e-4.
  static SolverConfig l1fs_defaults(std::size_t classes);
  /// Defaults for L2FS: lambda 0.0002, same eps rule.
  static SolverConfig l2fs_defaults(std::size_t classes);

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Vector-field and scalar-field state of one ADMM run.
struct AdmmState {
  MembershipField u;
  MembershipField w;
  VectorField d;
  ClassCenters c;
  VectorField dual_d;
  Planes dual_w;
  std::size_t iter = 0;
};

}  // namespace fuzzyseg
