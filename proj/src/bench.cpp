#include "fuzzyseg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "fuzzyseg/pipeline.hpp"
#include "json.hpp"

namespace fuzzyseg {

using nlohmann::json;

LambdaRange lambda_range(Algorithm a) {
  switch (a) {
    case Algorithm::l1fs: return {0.001, 0.05};
    case Algorithm::l2fs: return {0.00005, 0.0005};
    default: return {0.0, 0.0};
  }
}

namespace {

bool is_tv(Algorithm a) { return a == Algorithm::l1fs || a == Algorithm::l2fs; }

const std::vector<double> kNoLambdas;

}  // namespace

const std::vector<double>& BenchSpec::lambdas_for(Algorithm a) const {
  for (const auto& [alg, values] : lambdas)
    if (alg == a) return values;
  return kNoLambdas;
}

void BenchSpec::validate() const {
  if (noise.empty()) throw InvalidArgument("bench spec: empty noise list");
  if (algorithms.empty()) throw InvalidArgument("bench spec: empty algorithm list");
  if (inits.empty()) throw InvalidArgument("bench spec: empty initializer list");
  if (repetitions < 1) throw InvalidArgument("bench spec: repetitions must be >= 1");
  if (max_iters < 1) throw InvalidArgument("bench spec: max_iters must be >= 1");
  if (epsilon && !(*epsilon > 0.0)) throw InvalidArgument("bench spec: epsilon must be > 0");
  for (const auto& n : noise) n.validate();
  for (Algorithm a : algorithms) {
    if (std::count(algorithms.begin(), algorithms.end(), a) > 1)
      throw InvalidArgument("bench spec: algorithm '" + to_string(a) + "' listed twice");
    const auto& ls = lambdas_for(a);
    if (!is_tv(a)) {
      if (!ls.empty())
        throw InvalidArgument("bench spec: '" + to_string(a) + "' takes no lambda values");
      continue;
    }
    if (ls.empty())
      throw InvalidArgument("bench spec: no lambda values for '" + to_string(a) + "'");
    const LambdaRange range = lambda_range(a);
    for (double l : ls) {
      if (!(l >= range.lo && l <= range.hi)) {
        std::ostringstream msg;
        msg << "bench spec: lambda " << l << " for '" << to_string(a)
            << "' outside [" << range.lo << ", " << range.hi << "]";
        throw InvalidArgument(msg.str());
      }
    }
  }
  for (const auto& [alg, values] : lambdas) {
    if (std::find(algorithms.begin(), algorithms.end(), alg) == algorithms.end())
      throw InvalidArgument("bench spec: lambdas given for unlisted algorithm '" +
                            to_string(alg) + "'");
  }
}

BenchSpec parse_bench_spec(const std::string& text) {
  BenchSpec spec;
  try {
    const json j = json::parse(text);
    static const std::vector<std::string> known = {
        "phantom", "noise", "algorithms", "lambdas", "inits",
        "repetitions", "max_iters", "epsilon"};
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw InvalidArgument("bench spec: unknown key '" + key + "'");
    }
    spec.phantom = parse_phantom_kind(j.at("phantom").get<std::string>());
    for (const auto& n : j.at("noise")) {
      NoiseSpec ns;
      ns.kind = parse_noise_kind(n.at("kind").get<std::string>());
      ns.level = n.at("level").get<double>();
      ns.seed = n.value("seed", std::uint64_t{0});
      spec.noise.push_back(ns);
    }
    for (const auto& a : j.at("algorithms"))
      spec.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    if (j.contains("lambdas")) {
      for (const auto& [key, values] : j.at("lambdas").items())
        spec.lambdas.emplace_back(parse_algorithm(key), values.get<std::vector<double>>());
    }
    if (j.contains("inits")) {
      spec.inits.clear();
      for (const auto& s : j.at("inits"))
        spec.inits.push_back(parse_init_strategy(s.get<std::string>()));
    }
    spec.repetitions = j.value("repetitions", std::size_t{1});
    spec.max_iters = j.value("max_iters", std::size_t{500});
    if (j.contains("epsilon")) spec.epsilon = j.at("epsilon").get<double>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bench spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace {

struct Job {
  std::size_t noise_index;
  std::size_t repetition;
  Algorithm algorithm;
  std::optional<double> lambda;
};

BenchRow run_job(const BenchSpec& spec, const Phantom& phantom, const Job& job) {
  BenchRow row;
  row.noise = spec.noise[job.noise_index];
  row.noise.seed += job.repetition;
  row.repetition = job.repetition;
  row.algorithm = job.algorithm;
  row.lambda = job.lambda;
  try {
    Image noisy;
    std::vector<std::uint8_t> missing;
    if (row.noise.kind == NoiseKind::missing) {
      auto m = mask_missing(phantom.image, row.noise.level, row.noise.seed);
      noisy = std::move(m.image);
      missing = std::move(m.missing);
    } else {
      noisy = apply_noise(phantom.image, row.noise);
    }
    const std::size_t N = phantom.centers.classes();
    const LabelMap truth(phantom.image.grid(), N, phantom.labels);
    SegmentOptions opt;
    opt.algorithm = job.algorithm;
    opt.config = job.algorithm == Algorithm::l2fs ? SolverConfig::l2fs_defaults(N)
                                                  : SolverConfig::l1fs_defaults(N);
    if (job.lambda) opt.config.lambda = *job.lambda;
    opt.config.max_iters = spec.max_iters;
    if (spec.epsilon) opt.config.epsilon = *spec.epsilon;
    opt.config.seed = row.noise.seed;
    opt.init_candidates = spec.inits;
    opt.truth = &truth;
    opt.ignore = missing;
    const SegmentOutcome out = segment(noisy, opt);
    row.sa = out.report.sa.value_or(0.0);
    row.init = is_tv(job.algorithm) ? out.report.init_used : "";
    row.iterations = out.report.iterations;
    row.centers = out.report.centers;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string format_number(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string centers_text(const std::vector<double>& c) {
  std::string s;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) s += ' ';
    s += format_number(c[k], "%.3f");
  }
  return s;
}

std::string clean_error(std::string e) {
  std::replace(e.begin(), e.end(), ',', ';');
  std::replace(e.begin(), e.end(), '\n', ' ');
  return e;
}

}  // namespace

BenchResult run_bench(const BenchSpec& spec, std::size_t jobs) {
  spec.validate();
  const Phantom phantom = make_phantom(PhantomSpec::standard(spec.phantom));
  std::vector<Job> work;
  for (std::size_t n = 0; n < spec.noise.size(); ++n)
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep)
      for (Algorithm a : spec.algorithms) {
        if (is_tv(a)) {
          for (double l : spec.lambdas_for(a)) work.push_back({n, rep, a, l});
        } else {
          work.push_back({n, rep, a, std::nullopt});
        }
      }

  std::vector<BenchRow> rows(work.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < work.size(); k = next++)
      rows[k] = run_job(spec, phantom, work[k]);
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(work.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchResult result;
  result.per_lambda = rows;
  for (std::size_t k = 0; k < rows.size();) {
    std::size_t end = k + 1;
    while (end < rows.size() && work[end].noise_index == work[k].noise_index &&
           work[end].repetition == work[k].repetition &&
           work[end].algorithm == work[k].algorithm)
      ++end;
    std::size_t best = k;
    for (std::size_t m = k; m < end; ++m) {
      const bool ok = rows[m].error.empty();
      const bool best_ok = rows[best].error.empty();
      if ((ok && !best_ok) || (ok && rows[m].sa > rows[best].sa)) best = m;
    }
    result.best.push_back(rows[best]);
    k = end;
  }
  return result;
}

std::string render_csv(const BenchSpec& spec, const std::vector<BenchRow>& rows) {
  std::string out = "phantom,noise,level,seed,algorithm,lambda,init,sa,iterations,centers,error\n";
  for (const auto& r : rows) {
    out += to_string(spec.phantom) + ',' + to_string(r.noise.kind) + ',' +
           format_number(r.noise.level, "%.6g") + ',' + std::to_string(r.noise.seed) +
           ',' + to_string(r.algorithm) + ',' +
           (r.lambda ? format_number(*r.lambda, "%.6g") : std::string()) + ',' + r.init +
           ',' + (r.error.empty() ? format_number(r.sa, "%.6f") : std::string()) + ',' +
           std::to_string(r.iterations) + ',' + centers_text(r.centers) + ',' +
           clean_error(r.error) + '\n';
  }
  return out;
}

std::string render_table(const BenchSpec& spec, const std::vector<BenchRow>& rows) {
  std::vector<std::vector<std::string>> cells = {
      {"noise", "level", "seed", "algorithm", "lambda", "init", "SA"}};
  for (const auto& r : rows) {
    cells.push_back({to_string(r.noise.kind), format_number(r.noise.level, "%.6g"),
                     std::to_string(r.noise.seed), to_string(r.algorithm),
                     r.lambda ? format_number(*r.lambda, "%.6g") : "-",
                     r.init.empty() ? "-" : r.init,
                     r.error.empty() ? format_number(r.sa, "%.4f") : "error: " + r.error});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out = "phantom: " + to_string(spec.phantom) + "\n";
  for (std::size_t k = 0; k < cells.size(); ++k) {
    std::string line;
    for (std::size_t c = 0; c < cells[k].size(); ++c) {
      std::string cell = cells[k][c];
      if (c + 1 < cells[k].size()) cell.resize(width[c] + 2, ' ');
      line += cell;
    }
    out += line + '\n';
    if (k == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c + 1 < width.size() ? 2 : 0);
      out += std::string(total, '-') + '\n';
    }
  }
  return out;
}

}  // namespace fuzzyseg
