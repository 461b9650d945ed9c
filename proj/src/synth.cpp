#include "fuzzyseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fuzzyseg/rng.hpp"

namespace fuzzyseg {

std::string to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::two_phase_gray: return "two-phase-gray";
    case PhantomKind::five_phase_gray: return "five-phase-gray";
    case PhantomKind::six_phase_color: return "six-phase-color";
  }
  return "?";
}

PhantomKind parse_phantom_kind(const std::string& name) {
  if (name == "two-phase-gray") return PhantomKind::two_phase_gray;
  if (name == "five-phase-gray") return PhantomKind::five_phase_gray;
  if (name == "six-phase-color") return PhantomKind::six_phase_color;
  throw InvalidArgument("unknown phantom kind '" + name + "'");
}

PhantomSpec PhantomSpec::standard(PhantomKind kind) {
  PhantomSpec s;
  s.kind = kind;
  switch (kind) {
    case PhantomKind::two_phase_gray:
      s.height = s.width = 128;
      s.intensities = {{20}, {128}};
      break;
    case PhantomKind::five_phase_gray:
      s.height = 235;
      s.width = 237;
      s.intensities = {{0}, {63}, {127}, {192}, {255}};
      break;
    case PhantomKind::six_phase_color:
      s.height = s.width = 100;
      s.intensities = {{12, 11, 242}, {242, 12, 11}, {242, 241, 242},
                       {243, 241, 12}, {12, 12, 12},  {12, 242, 12}};
      break;
  }
  return s;
}

void PhantomSpec::validate() const {
  const std::size_t expected = kind == PhantomKind::two_phase_gray    ? 2
                               : kind == PhantomKind::five_phase_gray ? 5
                                                                      : 6;
  const std::size_t channels = kind == PhantomKind::six_phase_color ? 3 : 1;
  if (intensities.size() != expected)
    throw InvalidArgument("phantom needs " + std::to_string(expected) +
                          " class intensities");
  for (const auto& v : intensities) {
    if (v.size() != channels)
      throw InvalidArgument("phantom intensity has the wrong channel count");
  }
  std::set<std::vector<double>> unique(intensities.begin(), intensities.end());
  if (unique.size() != intensities.size())
    throw InvalidArgument("phantom class intensities must be distinct");
  if (height < 16 || width < 16)
    throw InvalidArgument("phantom must be at least 16x16");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Point {
  double row, col;
};

bool in_disk(Point p, Point c, double r) {
  const double dr = p.row - c.row, dc = p.col - c.col;
  return dr * dr + dc * dc <= r * r;
}

bool in_ellipse(Point p, Point c, double ar, double ac) {
  const double dr = (p.row - c.row) / ar, dc = (p.col - c.col) / ac;
  return dr * dr + dc * dc <= 1.0;
}

bool in_rect(Point p, double r0, double r1, double c0, double c1) {
  return p.row >= r0 && p.row < r1 && p.col >= c0 && p.col < c1;
}

// Geometry is defined on the canonical grid and scaled to the requested one.
// Two-phase: a horizontal band spanning the full width whose top edge carries
// a raised-cosine bulge.
int label_two_phase(Point p) {
  double top = 74.0;
  const double dc = p.col - 64.5;
  if (std::abs(dc) < 20.0) top -= 2.0 * (1.0 + std::cos(kPi * dc / 20.0));
  return p.row >= top && p.row < 112.0 ? 1 : 0;
}

int label_five_phase(Point p) {
  if (in_disk(p, {60, 175}, 38)) return 0;
  if (in_rect(p, 20, 100, 20, 115)) return 1;
  if (in_ellipse(p, {170, 70}, 45, 52)) return 3;
  if (in_disk(p, {172, 180}, 46) && !in_disk(p, {172, 180}, 18)) return 4;
  return 2;
}

int label_six_phase(Point p) {
  if (in_disk(p, {50, 50}, 20)) return 4;
  if (in_disk(p, {78, 22}, 16)) return 5;
  const bool top = p.row < 50, left = p.col < 50;
  if (top) return left ? 0 : 1;
  return left ? 2 : 3;
}

}  // namespace

Phantom make_phantom(const PhantomSpec& spec) {
  spec.validate();
  const PhantomSpec canon = PhantomSpec::standard(spec.kind);
  const double sr = static_cast<double>(canon.height) / static_cast<double>(spec.height);
  const double sc = static_cast<double>(canon.width) / static_cast<double>(spec.width);
  const std::size_t channels = spec.intensities.front().size();
  const std::size_t n = spec.height * spec.width;

  Phantom ph;
  ph.labels.resize(n);
  std::vector<double> data(n * channels);
  for (std::size_t i = 0; i < spec.height; ++i) {
    for (std::size_t j = 0; j < spec.width; ++j) {
      // Pixel centers in canonical coordinates.
      const Point p{(static_cast<double>(i) + 0.5) * sr - 0.5,
                    (static_cast<double>(j) + 0.5) * sc - 0.5};
      int label = 0;
      switch (spec.kind) {
        case PhantomKind::two_phase_gray: label = label_two_phase(p); break;
        case PhantomKind::five_phase_gray: label = label_five_phase(p); break;
        case PhantomKind::six_phase_color: label = label_six_phase(p); break;
      }
      const std::size_t idx = i * spec.width + j;
      ph.labels[idx] = label;
      for (std::size_t ch = 0; ch < channels; ++ch)
        data[ch * n + idx] = spec.intensities[static_cast<std::size_t>(label)][ch];
    }
  }
  ph.image = Image::from_data(spec.height, spec.width, channels, std::move(data));
  std::vector<double> centers;
  for (const auto& v : spec.intensities) centers.insert(centers.end(), v.begin(), v.end());
  ph.centers = ClassCenters(spec.intensities.size(), channels, std::move(centers));
  return ph;
}

// ---------------------------------------------------------------------------

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::gn: return "gn";
    case NoiseKind::spin: return "spin";
    case NoiseKind::rvin: return "rvin";
    case NoiseKind::missing: return "missing";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "gn") return NoiseKind::gn;
  if (name == "spin") return NoiseKind::spin;
  if (name == "rvin") return NoiseKind::rvin;
  if (name == "missing") return NoiseKind::missing;
  throw InvalidArgument("unknown noise kind '" + name + "'");
}

void NoiseSpec::validate() const {
  if (!std::isfinite(level)) throw InvalidArgument("noise level must be finite");
  switch (kind) {
    case NoiseKind::gn:
      if (!(level > 0.0)) throw InvalidArgument("gaussian sigma must be > 0");
      break;
    case NoiseKind::spin:
    case NoiseKind::rvin:
      if (!(level > 0.0 && level <= 1.0))
        throw InvalidArgument("impulse fraction must be in (0, 1]");
      break;
    case NoiseKind::missing:
      if (!(level > 0.0 && level < 1.0))
        throw InvalidArgument("missing fraction must be in (0, 1)");
      break;
  }
}

namespace {

// Partial Fisher-Yates: the first m entries are a uniform sample without
// replacement.
std::vector<std::size_t> select_sites(Rng& rng, std::size_t n, double fraction) {
  const auto m = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(n - k));
    std::swap(idx[k], idx[j]);
  }
  idx.resize(m);
  return idx;
}

std::vector<double> copy_data(const Image& image) {
  return {image.data().begin(), image.data().end()};
}

void check_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InvalidArgument("impulse fraction must be in (0, 1]");
}

}  // namespace

std::vector<std::size_t> corrupted_sites(std::size_t pixels, double fraction,
                                         std::uint64_t seed) {
  check_fraction(fraction);
  Rng rng(seed);
  return select_sites(rng, pixels, fraction);
}

Image add_gaussian(const Image& image, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian sigma must be > 0");
  Rng rng(seed);
  auto data = copy_data(image);
  for (double& v : data) v += sigma * rng.normal();
  return Image::from_data(image.height(), image.width(), image.channels(),
                          std::move(data));
}

Image add_spin(const Image& image, double fraction, std::uint64_t seed) {
  check_fraction(fraction);
  Rng rng(seed);
  const std::size_t n = image.pixels();
  const auto sites = select_sites(rng, n, fraction);
  auto data = copy_data(image);
  for (std::size_t site : sites) {
    if (image.channels() == 1) {
      data[site] = rng.coin() ? 255.0 : 0.0;
    } else {
      for (std::size_t ch = 0; ch < image.channels(); ++ch)
        data[ch * n + site] = rng.coin() ? 255.0 : 0.0;
    }
  }
  return Image::from_data(image.height(), image.width(), image.channels(),
                          std::move(data));
}

Image add_rvin(const Image& image, double fraction, std::uint64_t seed) {
  check_fraction(fraction);
  Rng rng(seed);
  const std::size_t n = image.pixels();
  const auto sites = select_sites(rng, n, fraction);
  auto data = copy_data(image);
  for (std::size_t site : sites) {
    for (std::size_t ch = 0; ch < image.channels(); ++ch)
      data[ch * n + site] = rng.uniform(0.0, 255.0);
  }
  return Image::from_data(image.height(), image.width(), image.channels(),
                          std::move(data));
}

MaskedImage mask_missing(const Image& image, double fraction,
                         std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw InvalidArgument("missing fraction must be in (0, 1)");
  MaskedImage out{add_spin(image, fraction, seed),
                  std::vector<std::uint8_t>(image.pixels(), 0)};
  for (std::size_t site : corrupted_sites(image.pixels(), fraction, seed))
    out.missing[site] = 1;
  return out;
}

Image apply_noise(const Image& image, const NoiseSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::gn: return add_gaussian(image, spec.level, spec.seed);
    case NoiseKind::spin: return add_spin(image, spec.level, spec.seed);
    case NoiseKind::rvin: return add_rvin(image, spec.level, spec.seed);
    case NoiseKind::missing: return mask_missing(image, spec.level, spec.seed).image;
  }
  throw InvalidArgument("unknown noise kind");
}

}  // namespace fuzzyseg
