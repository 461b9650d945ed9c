#include "fuzzyseg/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace fuzzyseg::io {
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

struct PnmRaster {
  std::size_t width = 0, height = 0, channels = 0;
  unsigned maxval = 0;
  std::vector<std::uint8_t> samples;  // interleaved
};

PnmRaster parse_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::size_t pos = 2;
  const auto fail = [&](const std::string& why) -> IoError {
    return IoError("'" + name + "': " + why);
  };
  const auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  const auto number = [&]() -> std::size_t {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
      throw fail("malformed header");
    std::size_t v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + static_cast<std::size_t>(bytes[pos] - '0');
      if (v > (1u << 24)) throw fail("header value too large");
      ++pos;
    }
    return v;
  };
  PnmRaster r;
  r.channels = bytes[1] == '5' ? 1 : 3;
  r.width = number();
  r.height = number();
  r.maxval = static_cast<unsigned>(number());
  if (r.width == 0 || r.height == 0) throw fail("zero image dimension");
  if (r.maxval == 0 || r.maxval > 255) throw fail("only 8-bit PNM is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("malformed header");
  ++pos;
  const std::size_t need = r.width * r.height * r.channels;
  if (bytes.size() - pos < need) throw fail("truncated pixel data");
  r.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return r;
}

Image from_interleaved(std::size_t h, std::size_t w, std::size_t ch,
                       const std::uint8_t* samples, double scale) {
  const std::size_t n = h * w;
  std::vector<double> data(n * ch);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t c = 0; c < ch; ++c)
      data[c * n + p] = static_cast<double>(samples[p * ch + c]) * scale;
  return Image::from_data(h, w, ch, std::move(data));
}

struct MemoryReader {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos;
};

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  MemoryReader reader{};
  std::size_t width = 0, height = 0, channels = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  char message[160] = "corrupt PNG data";
  ~PngReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

void png_read_memory(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (src->pos + len > src->bytes->size()) png_error(png, "truncated PNG");
  std::memcpy(out, src->bytes->data() + src->pos, len);
  src->pos += len;
}

void png_on_error(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
  std::snprintf(st->message, sizeof st->message, "%s", msg);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

// Returns false when libpng reported an error. Kept free of objects with
// destructors so the longjmp out of libpng is well defined.
bool png_decode_into(PngReadState* st) {
  if (setjmp(png_jmpbuf(st->png))) return false;
  png_set_read_fn(st->png, &st->reader, png_read_memory);
  png_read_info(st->png, st->info);
  png_set_strip_16(st->png);
  png_set_strip_alpha(st->png);
  png_set_packing(st->png);
  png_set_palette_to_rgb(st->png);
  png_set_expand_gray_1_2_4_to_8(st->png);
  png_read_update_info(st->png, st->info);
  st->width = png_get_image_width(st->png, st->info);
  st->height = png_get_image_height(st->png, st->info);
  st->channels = png_get_channels(st->png, st->info);
  if (st->channels != 1 && st->channels != 3) return true;
  const std::size_t rowbytes = png_get_rowbytes(st->png, st->info);
  st->pixels.resize(rowbytes * st->height);
  st->rows.resize(st->height);
  for (std::size_t i = 0; i < st->height; ++i)
    st->rows[i] = st->pixels.data() + i * rowbytes;
  png_read_image(st->png, st->rows.data());
  return true;
}

Image decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  PngReadState st;
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st, png_on_error,
                                  png_on_warning);
  if (!st.png) throw IoError("libpng initialization failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw IoError("libpng initialization failed");
  st.reader = MemoryReader{&bytes, 0};
  if (!png_decode_into(&st)) throw IoError("'" + name + "': " + st.message);
  if (st.channels != 1 && st.channels != 3)
    throw IoError("'" + name + "': unsupported PNG layout");
  std::vector<std::uint8_t> packed(st.width * st.height * st.channels);
  for (std::size_t i = 0; i < st.height; ++i)
    std::memcpy(packed.data() + i * st.width * st.channels, st.rows[i],
                st.width * st.channels);
  try {
    return from_interleaved(st.height, st.width, st.channels, packed.data(), 1.0);
  } catch (const InvalidArgument& e) {
    throw IoError("'" + name + "': " + e.what());
  }
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

Image read_image(const fs::path& path) {
  const auto bytes = read_bytes(path);
  const std::string name = path.string();
  static constexpr std::array<std::uint8_t, 8> kPng = {0x89, 'P', 'N', 'G',
                                                       '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPng.begin(), kPng.end(), bytes.begin()))
    return decode_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    const PnmRaster r = parse_pnm(bytes, name);
    return from_interleaved(r.height, r.width, r.channels, r.samples.data(),
                            255.0 / static_cast<double>(r.maxval));
  }
  throw IoError("'" + name + "': unrecognized image format");
}

std::vector<std::uint8_t> encode_pnm(const Image& image) {
  if (image.channels() != 1 && image.channels() != 3)
    throw InvalidArgument("PNM output needs 1 or 3 channels");
  const std::string header = std::string(image.channels() == 1 ? "P5" : "P6") +
                             "\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t n = image.pixels();
  out.reserve(out.size() + n * image.channels());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t c = 0; c < image.channels(); ++c)
      out.push_back(to_byte(image.channel(c)[p]));
  return out;
}

void write_image(const fs::path& path, const Image& image) {
  write_bytes(path, encode_pnm(image));
}

fs::path sidecar_path(const fs::path& image_path) {
  fs::path p = image_path;
  p += ".f64";
  return p;
}

void write_sidecar(const fs::path& path, const Image& image) {
  std::vector<std::uint8_t> out(std::begin(kSidecarMagic), std::end(kSidecarMagic));
  put_u32(out, static_cast<std::uint32_t>(image.height()));
  put_u32(out, static_cast<std::uint32_t>(image.width()));
  put_u32(out, static_cast<std::uint32_t>(image.channels()));
  out.reserve(out.size() + image.data().size() * 8);
  for (double v : image.data()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  write_bytes(path, out);
}

Image read_sidecar(const fs::path& path) {
  const auto bytes = read_bytes(path);
  const std::string name = path.string();
  if (bytes.size() < 16 || !std::equal(std::begin(kSidecarMagic),
                                       std::end(kSidecarMagic), bytes.begin()))
    throw IoError("'" + name + "': not a raster sidecar");
  const std::size_t h = get_u32(bytes.data() + 4);
  const std::size_t w = get_u32(bytes.data() + 8);
  const std::size_t ch = get_u32(bytes.data() + 12);
  const std::size_t count = h * w * ch;
  if (bytes.size() != 16 + count * 8) throw IoError("'" + name + "': size mismatch");
  std::vector<double> data(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(bytes[16 + k * 8 + static_cast<std::size_t>(b)]) << (8 * b);
    data[k] = std::bit_cast<double>(bits);
  }
  try {
    return Image::from_data(h, w, ch, std::move(data));
  } catch (const InvalidArgument& e) {
    throw IoError("'" + name + "': " + e.what());
  }
}

void write_labels(const fs::path& path, const LabelMap& labels) {
  if (labels.classes() > 256) throw InvalidArgument("too many classes for a label file");
  const Grid g = labels.grid();
  std::vector<double> data(labels.labels().begin(), labels.labels().end());
  write_image(path, Image::from_data(g.height, g.width, 1, std::move(data)));
}

LabelMap read_labels(const fs::path& path, std::size_t classes) {
  const auto bytes = read_bytes(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw IoError("'" + path.string() + "': label maps must be P5 files");
  const PnmRaster r = parse_pnm(bytes, path.string());
  std::vector<int> labels(r.samples.begin(), r.samples.end());
  const int top = *std::max_element(labels.begin(), labels.end());
  const std::size_t n = classes ? classes : static_cast<std::size_t>(top) + 1;
  if (static_cast<std::size_t>(top) >= n)
    throw IoError("'" + path.string() + "': label exceeds class count");
  return {Grid{r.height, r.width}, n, std::move(labels)};
}

void write_mask(const fs::path& path, Grid grid, const std::vector<std::uint8_t>& mask) {
  if (mask.size() != grid.size()) throw InvalidArgument("mask size does not match grid");
  std::vector<double> data(mask.size());
  for (std::size_t p = 0; p < mask.size(); ++p) data[p] = mask[p] ? 255.0 : 0.0;
  write_image(path, Image::from_data(grid.height, grid.width, 1, std::move(data)));
}

std::vector<std::uint8_t> read_mask(const fs::path& path, Grid expected) {
  const Image img = read_image(path);
  if (!(img.grid() == expected) || img.channels() != 1)
    throw IoError("'" + path.string() + "': mask shape does not match the image");
  std::vector<std::uint8_t> mask(img.pixels());
  for (std::size_t p = 0; p < mask.size(); ++p) mask[p] = img.channel(0)[p] > 127.5 ? 1 : 0;
  return mask;
}

}  // namespace fuzzyseg::io
