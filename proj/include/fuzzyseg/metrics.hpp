#pragma once

// Hard segmentations, accuracy under label permutation, and center contrast.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fuzzyseg/grid.hpp"

namespace fuzzyseg {

/// Per-pixel class index in [0, classes).
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(Grid grid, std::size_t classes, std::vector<int> labels);

  const Grid& grid() const { return grid_; }
  std::size_t classes() const { return classes_; }
  std::span<const int> labels() const { return labels_; }
  int operator[](std::size_t pixel) const { return labels_[pixel]; }

 private:
  Grid grid_;
  std::size_t classes_ = 0;
  std::vector<int> labels_;
};

/// Argmax per pixel; ties go to the lowest class index.
LabelMap defuzzify(const MembershipField& u);

inline constexpr std::size_t kMaxMatchedClasses = 8;

struct SaReport {
  double sa = 0.0;
  /// permutation[pred_label] = truth_label for the best matching.
  std::vector<int> permutation;
  /// confusion[pred * N + truth], counts over evaluated pixels.
  std::vector<std::size_t> confusion;
  std::size_t evaluated = 0;
};

/// Highest accuracy over all relabelings of `pred`. When `ignore` is given,
/// pixels with a nonzero entry are left out. Throws InvalidArgument for more
/// than kMaxMatchedClasses classes or mismatched grids.
SaReport segmentation_accuracy(const LabelMap& pred, const LabelMap& truth,
                               std::size_t classes,
                               std::span<const std::uint8_t> ignore = {});

/// I_rec(x) = c_{label(x)}.
Image reconstruct(const LabelMap& labels, const ClassCenters& c);

struct ContrastReport {
  /// |c_est - c_true| per class (max over channels), after matching.
  std::vector<double> center_error;
  /// Spread of the estimated centers over the spread of the true ones; for
  /// color, per-channel spreads are summed.
  double range_ratio = 0.0;
};

/// `permutation[est_class] = true_class`; identity when empty.
ContrastReport contrast_report(const ClassCenters& estimated,
                               const ClassCenters& truth,
                               std::span<const int> permutation = {});

}  // namespace fuzzyseg
