#include "fuzzyseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fuzzyseg {

LabelMap::LabelMap(Grid grid, std::size_t classes, std::vector<int> labels)
    : grid_(grid), classes_(classes), labels_(std::move(labels)) {
  if (labels_.size() != grid_.size())
    throw InvalidArgument("label map size does not match its grid");
  for (int l : labels_) {
    if (l < 0 || static_cast<std::size_t>(l) >= classes_)
      throw InvalidArgument("label " + std::to_string(l) + " out of range");
  }
}

LabelMap defuzzify(const MembershipField& u) {
  const std::size_t n = u.grid().size();
  std::vector<int> labels(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    double best = u.plane(0)[p];
    for (std::size_t i = 1; i < u.classes(); ++i) {
      if (u.plane(i)[p] > best) {
        best = u.plane(i)[p];
        labels[p] = static_cast<int>(i);
      }
    }
  }
  return {u.grid(), u.classes(), std::move(labels)};
}

SaReport segmentation_accuracy(const LabelMap& pred, const LabelMap& truth,
                               std::size_t classes,
                               std::span<const std::uint8_t> ignore) {
  if (classes < 1) throw InvalidArgument("need at least one class");
  if (classes > kMaxMatchedClasses)
    throw InvalidArgument("permutation matching supports at most " +
                          std::to_string(kMaxMatchedClasses) + " classes");
  if (!(pred.grid() == truth.grid()))
    throw InvalidArgument("prediction and truth grids differ");
  if (!ignore.empty() && ignore.size() != pred.grid().size())
    throw InvalidArgument("mask size does not match the label maps");
  const std::size_t N = classes;
  SaReport rep;
  rep.confusion.assign(N * N, 0);
  for (std::size_t p = 0; p < pred.grid().size(); ++p) {
    if (!ignore.empty() && ignore[p]) continue;
    const auto a = static_cast<std::size_t>(pred[p]);
    const auto b = static_cast<std::size_t>(truth[p]);
    if (a >= N || b >= N) throw InvalidArgument("label exceeds class count");
    ++rep.confusion[a * N + b];
    ++rep.evaluated;
  }
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  rep.permutation = perm;
  do {
    std::size_t hit = 0;
    for (std::size_t a = 0; a < N; ++a)
      hit += rep.confusion[a * N + static_cast<std::size_t>(perm[a])];
    if (hit > best) {
      best = hit;
      rep.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  rep.sa = rep.evaluated ? static_cast<double>(best) /
                               static_cast<double>(rep.evaluated)
                         : 1.0;
  return rep;
}

Image reconstruct(const LabelMap& labels, const ClassCenters& c) {
  const std::size_t n = labels.grid().size();
  const std::size_t channels = c.channels();
  std::vector<double> data(n * channels);
  for (std::size_t p = 0; p < n; ++p) {
    const auto l = static_cast<std::size_t>(labels[p]);
    if (l >= c.classes()) throw InvalidArgument("label exceeds class count");
    for (std::size_t ch = 0; ch < channels; ++ch) data[ch * n + p] = c.at(l, ch);
  }
  return Image::from_data(labels.grid().height, labels.grid().width, channels,
                          std::move(data));
}

namespace {

double spread(const ClassCenters& c) {
  double total = 0.0;
  for (std::size_t ch = 0; ch < c.channels(); ++ch) {
    double lo = c.at(0, ch), hi = c.at(0, ch);
    for (std::size_t i = 1; i < c.classes(); ++i) {
      lo = std::min(lo, c.at(i, ch));
      hi = std::max(hi, c.at(i, ch));
    }
    total += hi - lo;
  }
  return total;
}

}  // namespace

ContrastReport contrast_report(const ClassCenters& estimated,
                               const ClassCenters& truth,
                               std::span<const int> permutation) {
  if (estimated.classes() != truth.classes() ||
      estimated.channels() != truth.channels())
    throw InvalidArgument("center sets differ in shape");
  if (!permutation.empty() && permutation.size() != estimated.classes())
    throw InvalidArgument("permutation length does not match class count");
  ContrastReport rep;
  rep.center_error.resize(estimated.classes());
  for (std::size_t i = 0; i < estimated.classes(); ++i) {
    const std::size_t j =
        permutation.empty() ? i : static_cast<std::size_t>(permutation[i]);
    double err = 0.0;
    for (std::size_t ch = 0; ch < estimated.channels(); ++ch)
      err = std::max(err, std::abs(estimated.at(i, ch) - truth.at(j, ch)));
    rep.center_error[i] = err;
  }
  const double denom = spread(truth);
  rep.range_ratio = denom > 0.0 ? spread(estimated) / denom : 1.0;
  return rep;
}

}  // namespace fuzzyseg
