#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fuzzyseg/io.hpp"
#include "fuzzyseg/synth.hpp"
#include "support.hpp"

using namespace fuzzyseg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fuzzyseg_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Writes an 8-bit PNG with libpng's simplified API.
void write_png(const fs::path& p, std::size_t h, std::size_t w, std::uint32_t format,
               const std::vector<std::uint8_t>& pixels) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  REQUIRE(png_image_write_to_file(&img, p.string().c_str(), 0, pixels.data(), 0, nullptr));
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("8-bit images round-trip through PNM exactly") {
  for (auto k : {PhantomKind::two_phase_gray, PhantomKind::five_phase_gray,
                 PhantomKind::six_phase_color}) {
    const Phantom ph = make_phantom(PhantomSpec::standard(k));
    const fs::path p = scratch(to_string(k) + (ph.image.channels() == 1 ? ".pgm" : ".ppm"));
    io::write_image(p, ph.image);
    CHECK(io::read_image(p) == ph.image);
  }
}

TEST_CASE("PNM output rounds and clips; headers are parsed") {
  const Image img = Image::from_data(1, 4, 1, {-3.0, 12.4, 12.6, 300.0});
  const auto bytes = io::encode_pnm(img);
  const std::string header = "P5\n4 1\n255\n";
  REQUIRE(bytes.size() == header.size() + 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + header.size()) == header);
  CHECK(bytes[header.size() + 0] == 0);
  CHECK(bytes[header.size() + 1] == 12);
  CHECK(bytes[header.size() + 2] == 13);
  CHECK(bytes[header.size() + 3] == 255);

  const fs::path p = scratch("comment.pgm");
  write_bytes(p, std::string("P5\n# made by hand\n2 1\n15\n") + char(0) + char(15));
  const Image back = io::read_image(p);
  CHECK(back.at(0, 0, 0) == 0.0);
  CHECK(back.at(0, 0, 1) == 255.0);
}

TEST_CASE("malformed or missing images raise IoError") {
  CHECK_THROWS_AS(io::read_image(scratch("nope.pgm")), IoError);
  const fs::path trunc = scratch("trunc.pgm");
  write_bytes(trunc, "P5\n4 4\n255\nab");
  CHECK_THROWS_AS(io::read_image(trunc), IoError);
  const fs::path wide = scratch("wide.pgm");
  write_bytes(wide, "P5\n1 1\n65535\nab");
  CHECK_THROWS_AS(io::read_image(wide), IoError);
  const fs::path junk = scratch("junk.bin");
  write_bytes(junk, "hello world");
  CHECK_THROWS_AS(io::read_image(junk), IoError);
  const fs::path badpng = scratch("bad.png");
  write_bytes(badpng, std::string("\x89PNG\r\n\x1a\n", 8) + "garbage");
  CHECK_THROWS_AS(io::read_image(badpng), IoError);
}

TEST_CASE("PNG input: gray, RGB and RGBA") {
  const fs::path g = scratch("gray.png");
  write_png(g, 2, 3, PNG_FORMAT_GRAY, {0, 10, 20, 30, 40, 255});
  const Image gi = io::read_image(g);
  CHECK(gi.channels() == 1);
  CHECK(gi.height() == 2);
  CHECK(gi.at(0, 1, 2) == 255.0);
  CHECK(gi.at(0, 0, 1) == 10.0);

  const fs::path c = scratch("rgb.png");
  write_png(c, 1, 2, PNG_FORMAT_RGB, {1, 2, 3, 4, 5, 6});
  const Image ci = io::read_image(c);
  CHECK(ci.channels() == 3);
  CHECK(ci.at(0, 0, 1) == 4.0);
  CHECK(ci.at(2, 0, 0) == 3.0);

  const fs::path a = scratch("rgba.png");
  write_png(a, 1, 1, PNG_FORMAT_RGBA, {9, 8, 7, 128});
  const Image ai = io::read_image(a);
  CHECK(ai.channels() == 3);
  CHECK(ai.at(1, 0, 0) == 8.0);
}

TEST_CASE("sidecar keeps real values bit-exactly") {
  const Phantom ph = make_phantom(PhantomSpec::standard(PhantomKind::six_phase_color));
  const Image noisy = add_gaussian(ph.image, 25, 2);
  const fs::path img = scratch("noisy.ppm");
  const fs::path side = io::sidecar_path(img);
  CHECK(side.filename() == "noisy.ppm.f64");
  io::write_sidecar(side, noisy);
  CHECK(io::read_sidecar(side) == noisy);
  const std::string bytes = read_bytes(side);
  CHECK(bytes.substr(0, 4) == "FSR1");
  CHECK(bytes.size() == 16 + 8 * noisy.data().size());

  write_bytes(scratch("short.f64"), bytes.substr(0, 40));
  CHECK_THROWS_AS(io::read_sidecar(scratch("short.f64")), IoError);
  write_bytes(scratch("magic.f64"), "XXXX" + bytes.substr(4));
  CHECK_THROWS_AS(io::read_sidecar(scratch("magic.f64")), IoError);
}

TEST_CASE("label maps and masks round-trip") {
  const Phantom ph = make_phantom(PhantomSpec::standard(PhantomKind::five_phase_gray));
  const LabelMap l(ph.image.grid(), 5, ph.labels);
  const fs::path p = scratch("labels.pgm");
  io::write_labels(p, l);
  const LabelMap back = io::read_labels(p);
  CHECK(back.classes() == 5);
  CHECK(std::equal(back.labels().begin(), back.labels().end(), ph.labels.begin()));
  CHECK(io::read_labels(p, 7).classes() == 7);
  CHECK_THROWS_AS(io::read_labels(p, 3), IoError);

  const Grid g{3, 2};
  const std::vector<std::uint8_t> mask = {1, 0, 0, 1, 1, 0};
  const fs::path m = scratch("mask.pgm");
  io::write_mask(m, g, mask);
  CHECK(io::read_mask(m, g) == mask);
  CHECK_THROWS_AS(io::read_mask(m, Grid{2, 3}), IoError);
}

}
