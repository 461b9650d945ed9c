// fuzzyseg command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fuzzyseg/bench.hpp"
#include "fuzzyseg/io.hpp"
#include "fuzzyseg/metrics.hpp"
#include "fuzzyseg/pipeline.hpp"
#include "fuzzyseg/simd/kernels.hpp"
#include "fuzzyseg/synth.hpp"

namespace fs = std::filesystem;
using namespace fuzzyseg;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

struct SegmentArgs {
  std::string input;
  std::size_t classes = 2;
  std::optional<double> lambda;
  double r = 1.0;
  std::optional<double> eps;
  std::size_t max_iters = 500;
  std::string init = "fcm";
  std::uint64_t seed = 0;
  std::string truth;
  std::string mask;
  std::string output_dir = ".";
  std::string algo = "l1fs";
  std::string boundary = "periodic";
  bool use_sidecar = false;
};

int cmd_segment(const SegmentArgs& a) {
  SegmentOptions opt;
  opt.algorithm = parse_algorithm(a.algo);
  opt.config = opt.algorithm == Algorithm::l2fs ? SolverConfig::l2fs_defaults(a.classes)
                                                : SolverConfig::l1fs_defaults(a.classes);
  if (a.lambda) opt.config.lambda = *a.lambda;
  if (a.eps) opt.config.epsilon = *a.eps;
  opt.config.r = a.r;
  opt.config.max_iters = a.max_iters;
  opt.config.seed = a.seed;
  opt.config.boundary = parse_boundary_rule(a.boundary);
  if (a.init == "all-best") {
    opt.init_candidates = {InitStrategy::fcm, InitStrategy::fcm_s2,
                           InitStrategy::random_u_fcm_c};
  } else {
    opt.config.init = parse_init_strategy(a.init);
  }
  opt.config.validate();
  opt.input_name = a.input;

  const Image image = a.use_sidecar ? io::read_sidecar(io::sidecar_path(a.input))
                                    : io::read_image(a.input);
  std::optional<LabelMap> truth;
  if (!a.truth.empty()) {
    truth = io::read_labels(a.truth, a.classes);
    if (!(truth->grid() == image.grid()))
      throw InvalidArgument("--truth size does not match the input image");
    opt.truth = &*truth;
  }
  std::vector<std::uint8_t> mask;
  if (!a.mask.empty()) {
    if (!truth) throw InvalidArgument("--mask requires --truth");
    mask = io::read_mask(a.mask, image.grid());
    opt.ignore = mask;
  }

  const SegmentOutcome out = segment(image, opt);
  const fs::path dir = a.output_dir;
  ensure_dir(dir);
  io::write_labels(dir / "labels.pgm", out.labels);
  io::write_image(dir / (image.channels() == 1 ? "reconstruction.pgm" : "reconstruction.ppm"),
                  reconstruct(out.labels, out.c));
  write_text(dir / "report.json", to_json(out.report));
  for (const auto& w : out.report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "iterations " << out.report.iterations;
  if (out.report.sa) std::printf(" sa %.6f", *out.report.sa);
  std::cout << "\ncenters";
  for (double v : out.c.values()) std::printf(" %.4f", v);
  std::cout << "\n";
  return kOk;
}

int cmd_synth(const std::string& kind, const std::string& output_dir) {
  const PhantomKind k = parse_phantom_kind(kind);
  const Phantom ph = make_phantom(PhantomSpec::standard(k));
  const fs::path dir = output_dir;
  ensure_dir(dir);
  const std::string ext = ph.image.channels() == 1 ? ".pgm" : ".ppm";
  io::write_image(dir / (kind + ext), ph.image);
  io::write_labels(dir / (kind + "_labels.pgm"),
                   LabelMap(ph.image.grid(), ph.centers.classes(), ph.labels));
  return kOk;
}

int cmd_noise(const std::string& input, const std::string& kind, double level,
              std::uint64_t seed, const std::string& output) {
  NoiseSpec spec{parse_noise_kind(kind), level, seed};
  spec.validate();
  const Image clean = io::read_image(input);
  const fs::path out = output;
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  Image noisy;
  if (spec.kind == NoiseKind::missing) {
    auto m = mask_missing(clean, spec.level, spec.seed);
    fs::path mask_path = out;
    mask_path += ".mask.pgm";
    io::write_mask(mask_path, clean.grid(), m.missing);
    noisy = std::move(m.image);
  } else {
    noisy = apply_noise(clean, spec);
  }
  io::write_image(out, noisy);
  io::write_sidecar(io::sidecar_path(out), noisy);
  return kOk;
}

int cmd_bench(const std::string& spec_path, const std::string& output_dir,
              std::size_t jobs) {
  const BenchSpec spec = parse_bench_spec(read_text(spec_path));
  const BenchResult res = run_bench(spec, jobs);
  const fs::path dir = output_dir;
  ensure_dir(dir);
  write_text(dir / "results.csv", render_csv(spec, res.best));
  write_text(dir / "results_all.csv", render_csv(spec, res.per_lambda));
  const std::string table = render_table(spec, res.best);
  write_text(dir / "results.txt", table);
  std::cout << table;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy multiphase segmentation with TV regularization"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel backend: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  SegmentArgs seg;
  auto* s = app.add_subcommand("segment", "Segment an image");
  s->add_option("input", seg.input, "Input image (PGM, PPM or PNG)")->required();
  s->add_option("--classes", seg.classes, "Number of classes")->check(CLI::Range(2, 256));
  s->add_option("--lambda", seg.lambda, "Fidelity weight");
  s->add_option("--r", seg.r, "Penalty parameter");
  s->add_option("--eps", seg.eps, "Relative-change stopping threshold");
  s->add_option("--max-iters", seg.max_iters, "Iteration cap");
  s->add_option("--init", seg.init, "fcm, fcm-s2, random-u-fcm-c or all-best")
      ->check(CLI::IsMember({"fcm", "fcm-s2", "random-u-fcm-c", "all-best"}));
  s->add_option("--seed", seg.seed, "Seed for the random initializer");
  s->add_option("--truth", seg.truth, "Ground-truth label map (P5)");
  s->add_option("--mask", seg.mask, "Missing-pixel mask excluded from SA");
  s->add_option("--output-dir", seg.output_dir, "Directory for outputs");
  s->add_option("--algo", seg.algo, "l1fs, l2fs, fcm or fcm-s2")
      ->check(CLI::IsMember({"l1fs", "l2fs", "fcm", "fcm-s2"}));
  s->add_option("--boundary", seg.boundary, "periodic or symmetric")
      ->check(CLI::IsMember({"periodic", "symmetric"}));
  s->add_flag("--use-sidecar", seg.use_sidecar, "Read <input>.f64 real-valued data");

  std::string synth_kind, synth_dir = ".";
  auto* y = app.add_subcommand("synth", "Write a synthetic phantom and its labels");
  y->add_option("--kind", synth_kind, "two-phase-gray, five-phase-gray or six-phase-color")
      ->required()
      ->check(CLI::IsMember({"two-phase-gray", "five-phase-gray", "six-phase-color"}));
  y->add_option("--output-dir", synth_dir, "Directory for outputs");

  std::string noise_in, noise_kind, noise_out;
  double noise_level = 0.0;
  std::uint64_t noise_seed = 0;
  auto* n = app.add_subcommand("noise", "Corrupt an image with seeded noise");
  n->add_option("input", noise_in, "Clean input image")->required();
  n->add_option("--kind", noise_kind, "gn, spin, rvin or missing")
      ->required()
      ->check(CLI::IsMember({"gn", "spin", "rvin", "missing"}));
  n->add_option("--level", noise_level, "Sigma for gn, corrupted fraction otherwise")->required();
  n->add_option("--seed", noise_seed, "Noise seed");
  n->add_option("--output", noise_out, "Output image path")->required();

  std::string bench_spec, bench_dir = ".";
  std::size_t bench_jobs = 1;
  auto* b = app.add_subcommand("bench", "Run a benchmark spec");
  b->add_option("spec", bench_spec, "JSON benchmark spec")->required();
  b->add_option("--output-dir", bench_dir, "Directory for result tables");
  b->add_option("--jobs", bench_jobs, "Worker threads")->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simd != "auto" && !simd::set_active(simd::parse_backend(simd))) {
      std::cerr << "error: backend '" << simd << "' is not available on this CPU\n";
      return kUsage;
    }
    if (*s) return cmd_segment(seg);
    if (*y) return cmd_synth(synth_kind, synth_dir);
    if (*n) return cmd_noise(noise_in, noise_kind, noise_level, noise_seed, noise_out);
    if (*b) return cmd_bench(bench_spec, bench_dir, bench_jobs);
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
