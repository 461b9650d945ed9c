#include "fuzzyseg/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

namespace fuzzyseg {

void FcmConfig::validate() const {
  if (!(p > 1.0)) throw InvalidArgument("FCM fuzzifier p must be > 1");
  if (!(alpha > 0.0)) throw InvalidArgument("FCM_S2 alpha must be > 0");
  if (median_window < 3 || median_window % 2 == 0)
    throw InvalidArgument("median window must be odd and >= 3");
  if (max_iters < 1) throw InvalidArgument("FCM max_iters must be >= 1");
}

Image median_filter(const Image& image, std::size_t window) {
  if (window < 3 || window % 2 == 0)
    throw InvalidArgument("median window must be odd and >= 3");
  const std::size_t H = image.height(), W = image.width();
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  std::vector<double> out(image.data().size());
  std::vector<double> buf(window * window);
  for (std::size_t ch = 0; ch < image.channels(); ++ch) {
    const auto src = image.channel(ch);
    for (std::size_t i = 0; i < H; ++i) {
      for (std::size_t j = 0; j < W; ++j) {
        std::size_t n = 0;
        for (std::ptrdiff_t di = -half; di <= half; ++di) {
          const auto ii = std::clamp<std::ptrdiff_t>(
              static_cast<std::ptrdiff_t>(i) + di, 0,
              static_cast<std::ptrdiff_t>(H) - 1);
          for (std::ptrdiff_t dj = -half; dj <= half; ++dj) {
            const auto jj = std::clamp<std::ptrdiff_t>(
                static_cast<std::ptrdiff_t>(j) + dj, 0,
                static_cast<std::ptrdiff_t>(W) - 1);
            buf[n++] = src[static_cast<std::size_t>(ii) * W +
                           static_cast<std::size_t>(jj)];
          }
        }
        auto mid = buf.begin() + static_cast<std::ptrdiff_t>(n / 2);
        std::nth_element(buf.begin(), mid, buf.begin() + static_cast<std::ptrdiff_t>(n));
        out[ch * H * W + i * W + j] = *mid;
      }
    }
  }
  return Image::from_data(H, W, image.channels(), std::move(out));
}

namespace {

inline double powp(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }

double squared_distance(const Image& image, std::size_t pixel,
                        const ClassCenters& c, std::size_t cls) {
  double d = 0.0;
  for (std::size_t ch = 0; ch < image.channels(); ++ch) {
    const double t = image.channel(ch)[pixel] - c.at(cls, ch);
    d += t * t;
  }
  return d;
}

// Grayscale: N quantiles at levels (i + 1/2) / N, or evenly spaced values
// over [min, max] when quantiles collide.
ClassCenters gray_quantile_centers(const Image& image, std::size_t classes) {
  std::vector<double> v(image.channel(0).begin(), image.channel(0).end());
  std::sort(v.begin(), v.end());
  ClassCenters c(classes, 1);
  for (std::size_t i = 0; i < classes; ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(classes);
    const auto idx = std::min(v.size() - 1,
                              static_cast<std::size_t>(q * static_cast<double>(v.size())));
    c.at(i, 0) = v[idx];
  }
  bool distinct = true;
  for (std::size_t i = 1; i < classes; ++i)
    distinct = distinct && c.at(i, 0) > c.at(i - 1, 0);
  if (!distinct) {
    const double lo = v.front(), hi = v.back();
    for (std::size_t i = 0; i < classes; ++i)
      c.at(i, 0) = lo + (hi - lo) * (static_cast<double>(i) + 0.5) /
                            static_cast<double>(classes);
  }
  return c;
}

// Color: the N most populated cells of an 8x8x8 histogram, skipping cells
// adjacent to an already chosen one; each center is its cell's mean color.
ClassCenters color_mode_centers(const Image& image, std::size_t classes) {
  constexpr int kBins = 8;
  struct Cell {
    std::size_t count = 0;
    std::array<double, 3> sum{};
  };
  std::map<int, Cell> cells;
  const auto bin = [](double v) {
    return std::clamp(static_cast<int>(std::floor(v / 256.0 * kBins)), 0, kBins - 1);
  };
  for (std::size_t p = 0; p < image.pixels(); ++p) {
    std::array<int, 3> b{};
    for (std::size_t ch = 0; ch < 3; ++ch) b[ch] = bin(image.channel(ch)[p]);
    Cell& cell = cells[(b[0] * kBins + b[1]) * kBins + b[2]];
    ++cell.count;
    for (std::size_t ch = 0; ch < 3; ++ch) cell.sum[ch] += image.channel(ch)[p];
  }
  std::vector<std::pair<int, const Cell*>> ranked;
  for (const auto& [key, cell] : cells) ranked.emplace_back(key, &cell);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second->count > b.second->count;
  });
  const auto coords = [](int key) {
    return std::array<int, 3>{key / (kBins * kBins), (key / kBins) % kBins, key % kBins};
  };
  std::vector<int> chosen;
  for (int pass = 0; pass < 2 && chosen.size() < classes; ++pass) {
    for (const auto& [key, cell] : ranked) {
      if (chosen.size() == classes) break;
      if (std::find(chosen.begin(), chosen.end(), key) != chosen.end()) continue;
      bool clear = true;
      if (pass == 0) {
        for (int other : chosen) {
          const auto a = coords(key), b = coords(other);
          int cheb = 0;
          for (int k = 0; k < 3; ++k) cheb = std::max(cheb, std::abs(a[k] - b[k]));
          clear = clear && cheb > 1;
        }
      }
      if (clear) chosen.push_back(key);
    }
  }
  ClassCenters c(classes, 3);
  for (std::size_t i = 0; i < classes; ++i) {
    if (i >= chosen.size()) {
      // Fewer populated cells than classes: spread along the gray diagonal.
      for (std::size_t ch = 0; ch < 3; ++ch)
        c.at(i, ch) = 255.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(classes);
      continue;
    }
    const Cell& cell = cells.at(chosen[i]);
    for (std::size_t ch = 0; ch < 3; ++ch)
      c.at(i, ch) = cell.sum[ch] / static_cast<double>(cell.count);
  }
  return c;
}

ClassCenters initial_centers(const Image& image, std::size_t classes) {
  return image.channels() == 1 ? gray_quantile_centers(image, classes)
                               : color_mode_centers(image, classes);
}

// Distances for every (class, pixel), plane-major.
void fill_distances(const Image& image, const Image* filtered, double alpha,
                    const ClassCenters& c, std::vector<double>& dist) {
  const std::size_t n = image.pixels();
  for (std::size_t i = 0; i < c.classes(); ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      double d = squared_distance(image, p, c, i);
      if (filtered) d += alpha * squared_distance(*filtered, p, c, i);
      dist[i * n + p] = d;
    }
  }
}

void update_memberships(const std::vector<double>& dist, double p,
                        MembershipField& u) {
  const std::size_t N = u.classes();
  const std::size_t n = u.grid().size();
  const double expo = p > 1.0 ? 1.0 / (p - 1.0) : 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t zero = N;
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < N; ++i) {
      if (dist[i * n + x] == 0.0 && zero == N) zero = i;
      if (dist[i * n + x] < dist[nearest * n + x]) nearest = i;
    }
    if (zero != N || p == 1.0) {
      const std::size_t hot = zero != N ? zero : nearest;
      for (std::size_t i = 0; i < N; ++i) u.plane(i)[x] = i == hot ? 1.0 : 0.0;
      continue;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double a = expo == 1.0 ? 1.0 / dist[i * n + x]
                                   : std::pow(dist[i * n + x], -expo);
      u.plane(i)[x] = a;
      total += a;
    }
    for (std::size_t i = 0; i < N; ++i) u.plane(i)[x] /= total;
  }
}

void update_centers(const Image& image, const Image* filtered, double alpha,
                    double p, const MembershipField& u, ClassCenters& c) {
  const std::size_t n = image.pixels();
  for (std::size_t i = 0; i < c.classes(); ++i) {
    const auto ui = u.plane(i);
    double mass = 0.0;
    for (std::size_t x = 0; x < n; ++x) mass += powp(ui[x], p);
    if (!(mass > 0.0)) continue;  // empty class keeps its center
    for (std::size_t ch = 0; ch < image.channels(); ++ch) {
      const auto I = image.channel(ch);
      double acc = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        double v = I[x];
        if (filtered) v += alpha * filtered->channel(ch)[x];
        acc += powp(ui[x], p) * v;
      }
      const double scale = filtered ? (1.0 + alpha) * mass : mass;
      c.at(i, ch) = acc / scale;
    }
  }
}

double relative_change(const ClassCenters& a, const ClassCenters& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    const double t = a.values()[k] - b.values()[k];
    num += t * t;
    den += b.values()[k] * b.values()[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

FcmResult run_fcm(const Image& image, std::size_t classes,
                  const FcmConfig& config, const Image* filtered) {
  config.validate();
  if (classes < 2) throw InvalidArgument("FCM needs at least 2 classes");
  const double alpha = filtered ? config.alpha : 0.0;
  FcmResult res;
  res.c = initial_centers(filtered ? *filtered : image, classes);
  res.u = MembershipField(image.grid(), classes);
  std::vector<double> dist(classes * image.pixels());

  for (std::size_t it = 0; it < config.max_iters; ++it) {
    fill_distances(image, filtered, alpha, res.c, dist);
    update_memberships(dist, config.p, res.u);
    res.objective_trace.push_back(
        fcm_objective(image, res.u, res.c, config.p, filtered, alpha));
    const ClassCenters previous = res.c;
    update_centers(image, filtered, alpha, config.p, res.u, res.c);
    res.objective_trace.push_back(
        fcm_objective(image, res.u, res.c, config.p, filtered, alpha));
    res.iterations = it + 1;
    if (relative_change(res.c, previous) < config.tol) break;
  }
  // Final memberships consistent with the returned centers.
  fill_distances(image, filtered, alpha, res.c, dist);
  update_memberships(dist, config.p, res.u);
  return res;
}

}  // namespace

double fcm_objective(const Image& image, const MembershipField& u,
                     const ClassCenters& c, double p, const Image* filtered,
                     double alpha) {
  double total = 0.0;
  for (std::size_t i = 0; i < c.classes(); ++i) {
    const auto ui = u.plane(i);
    for (std::size_t x = 0; x < image.pixels(); ++x) {
      double d = squared_distance(image, x, c, i);
      if (filtered) d += alpha * squared_distance(*filtered, x, c, i);
      total += d * powp(ui[x], p);
    }
  }
  return total;
}

FcmResult fcm(const Image& image, std::size_t classes, const FcmConfig& config,
              std::uint64_t /*seed*/) {
  return run_fcm(image, classes, config, nullptr);
}

FcmResult fcm_s2(const Image& image, std::size_t classes,
                 const FcmConfig& config, std::uint64_t /*seed*/) {
  config.validate();
  const Image filtered = median_filter(image, config.median_window);
  return run_fcm(image, classes, config, &filtered);
}

Initialization init_from(InitStrategy strategy, const Image& image,
                         std::size_t classes, std::uint64_t seed,
                         const FcmConfig& config) {
  switch (strategy) {
    case InitStrategy::fcm: {
      auto r = fcm(image, classes, config, seed);
      return {std::move(r.u), std::move(r.c)};
    }
    case InitStrategy::fcm_s2: {
      auto r = fcm_s2(image, classes, config, seed);
      return {std::move(r.u), std::move(r.c)};
    }
    case InitStrategy::random_u_fcm_c: {
      auto r = fcm(image, classes, config, seed);
      return {uniform_membership(image.grid(), classes, seed), std::move(r.c)};
    }
  }
  throw InvalidArgument("unknown initialization strategy");
}

}  // namespace fuzzyseg
