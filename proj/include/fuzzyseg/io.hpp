#pragma once

// Image files (binary PGM/PPM both ways, PNG on input), the real-valued
// raster sidecar, and label-map files. All failures throw IoError.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fuzzyseg/grid.hpp"
#include "fuzzyseg/metrics.hpp"

namespace fuzzyseg::io {

/// Reads P5/P6 (maxval <= 255) or PNG (8-bit gray or RGB; alpha dropped,
/// 16-bit reduced to 8). Format is chosen by the file's magic bytes.
Image read_image(const std::filesystem::path& path);

/// Writes P5 for one channel, P6 for three. Values are rounded to nearest
/// and clipped to [0, 255].
void write_image(const std::filesystem::path& path, const Image& image);

/// Bytes of the 8-bit encoding write_image would produce.
std::vector<std::uint8_t> encode_pnm(const Image& image);

/// Sidecar layout, little-endian: "FSR1", u32 height, u32 width,
/// u32 channels, then height*width*channels float64 values, plane-major.
inline constexpr char kSidecarMagic[4] = {'F', 'S', 'R', '1'};

void write_sidecar(const std::filesystem::path& path, const Image& image);
Image read_sidecar(const std::filesystem::path& path);

/// "<image path>.f64"
std::filesystem::path sidecar_path(const std::filesystem::path& image_path);

/// Label maps are P5 files holding raw class indices. `classes` = 0 infers
/// the count as max label + 1.
void write_labels(const std::filesystem::path& path, const LabelMap& labels);
LabelMap read_labels(const std::filesystem::path& path, std::size_t classes = 0);

/// 0/1 mask stored as P5 with 0 and 255.
void write_mask(const std::filesystem::path& path, Grid grid,
                const std::vector<std::uint8_t>& mask);
std::vector<std::uint8_t> read_mask(const std::filesystem::path& path,
                                    Grid expected);

}  // namespace fuzzyseg::io
