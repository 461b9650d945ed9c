#pragma once

// Piecewise-constant test phantoms and seeded noise models.

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzyseg/grid.hpp"

namespace fuzzyseg {

enum class PhantomKind { two_phase_gray, five_phase_gray, six_phase_color };

std::string to_string(PhantomKind k);
PhantomKind parse_phantom_kind(const std::string& name);

struct PhantomSpec {
  PhantomKind kind = PhantomKind::two_phase_gray;
  std::size_t height = 0;
  std::size_t width = 0;
  /// intensities[label][channel]
  std::vector<std::vector<double>> intensities;

  /// The canonical spec for a kind (size and class intensities fixed).
  static PhantomSpec standard(PhantomKind kind);
  void validate() const;
};

struct Phantom {
  Image image;
  std::vector<int> labels;  // row-major, one per pixel
  ClassCenters centers;     // intensities in label order
};

/// Deterministic layouts:
///  two-phase   128x128: background label 0; label 1 is a full-width band
///              whose top edge has a smooth bulge.
///  five-phase  235x237: background label 2 (127) with a disk (0), a
///              rectangle (63), an ellipse (192) and an annulus (255).
///  six-phase   100x100: four quadrants (labels 0-3), a central disk (4)
///              touching all four, and a smaller disk (5) inside quadrant 2.
Phantom make_phantom(const PhantomSpec& spec);

enum class NoiseKind { gn, spin, rvin, missing };

std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& name);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::gn;
  double level = 0.0;  // sigma for gn, corrupted fraction otherwise
  std::uint64_t seed = 0;

  void validate() const;
};

/// I + N(0, sigma^2) per pixel and channel, unclipped.
Image add_gaussian(const Image& image, double sigma, std::uint64_t seed);

/// Exactly round(fraction * H * W) distinct sites set to 0 or 255 with a fair
/// coin (one coin per site for grayscale, one per channel for color).
Image add_spin(const Image& image, double fraction, std::uint64_t seed);

/// As add_spin, with values uniform on [0, 255] per channel.
Image add_rvin(const Image& image, double fraction, std::uint64_t seed);

struct MaskedImage {
  Image image;
  std::vector<std::uint8_t> missing;  // 1 where the pixel was dropped
};

/// Missing pixels filled with random 0/255; identical pixels to add_spin
/// with the same seed and fraction.
MaskedImage mask_missing(const Image& image, double fraction,
                         std::uint64_t seed);

/// Sites chosen by the impulse models, in selection order.
std::vector<std::size_t> corrupted_sites(std::size_t pixels, double fraction,
                                         std::uint64_t seed);

/// Dispatch on spec.kind. For `missing`, the mask is discarded.
Image apply_noise(const Image& image, const NoiseSpec& spec);

}  // namespace fuzzyseg
