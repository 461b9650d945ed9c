#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fuzzyseg/grid.hpp"
#include "fuzzyseg/rng.hpp"

namespace fuzzyseg::test {

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// Two labels split horizontally: label 1 fills the lower half.
inline std::vector<int> small_labels(Grid g) {
  std::vector<int> labels(g.size());
  for (std::size_t r = 0; r < g.height; ++r)
    for (std::size_t c = 0; c < g.width; ++c)
      labels[g.index(r, c)] = r >= g.height / 2 ? 1 : 0;
  return labels;
}

inline Image image_from_labels(Grid g, const std::vector<int>& labels,
                               const std::vector<double>& values) {
  std::vector<double> data(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) data[p] = values[labels[p]];
  return Image::from_data(g.height, g.width, 1, std::move(data));
}

}  // namespace fuzzyseg::test
