#include "fuzzyseg/pipeline.hpp"

#include <chrono>

#include "fuzzyseg/baselines.hpp"
#include "fuzzyseg/solver.hpp"

namespace fuzzyseg {
namespace {

SegmentOutcome finish(const SegmentOptions& opt, MembershipField u,
                      ClassCenters c, RunReport rep) {
  SegmentOutcome out;
  out.labels = defuzzify(u);
  if (opt.truth) {
    const auto sa = segmentation_accuracy(out.labels, *opt.truth,
                                          opt.config.classes, opt.ignore);
    rep.sa = sa.sa;
    rep.permutation = sa.permutation;
  }
  rep.channels = c.channels();
  rep.centers = c.values();
  out.u = std::move(u);
  out.c = std::move(c);
  out.report = std::move(rep);
  return out;
}

SegmentOutcome run_clustering(const Image& image, const SegmentOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const FcmConfig fc;
  const std::size_t N = opt.config.classes;
  FcmResult res = opt.algorithm == Algorithm::fcm
                      ? fcm(image, N, fc, opt.config.seed)
                      : fcm_s2(image, N, fc, opt.config.seed);
  RunReport rep;
  rep.algorithm = opt.algorithm;
  rep.config = opt.config;
  rep.input = opt.input_name;
  rep.iterations = res.iterations;
  rep.converged = res.iterations < fc.max_iters;
  rep.energy.total = res.objective_trace.empty() ? 0.0 : res.objective_trace.back();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish(opt, std::move(res.u), std::move(res.c), std::move(rep));
}

SegmentOutcome run_tv(const Image& image, const SegmentOptions& opt,
                      InitStrategy init) {
  SolverConfig cfg = opt.config;
  cfg.init = init;
  const Fidelity fid = opt.algorithm == Algorithm::l1fs ? Fidelity::l1 : Fidelity::l2;
  RunResult res = fid == Fidelity::l1 ? run(image, cfg) : run_l2fs(image, cfg);
  RunReport rep;
  rep.algorithm = opt.algorithm;
  rep.config = cfg;
  rep.input = opt.input_name;
  rep.init_used = to_string(init);
  rep.iterations = res.iterations;
  rep.converged = res.converged;
  if (!res.trace.empty()) {
    rep.energy = res.trace.back().energy;
    rep.kkt = res.trace.back().kkt;
  }
  rep.warnings = res.warnings;
  rep.seconds = res.seconds;
  return finish(opt, std::move(res.u), std::move(res.c), std::move(rep));
}

bool better(const SegmentOutcome& cand, const SegmentOutcome& best, bool by_sa) {
  if (by_sa) return *cand.report.sa > *best.report.sa;
  return cand.report.energy.total < best.report.energy.total;
}

}  // namespace

SegmentOutcome segment(const Image& image, const SegmentOptions& opt) {
  opt.config.validate();
  if (opt.truth && !(opt.truth->grid() == image.grid()))
    throw InvalidArgument("ground truth size does not match the image");
  if (opt.algorithm == Algorithm::fcm || opt.algorithm == Algorithm::fcm_s2)
    return run_clustering(image, opt);
  const auto& order = opt.init_candidates;
  if (order.empty()) return run_tv(image, opt, opt.config.init);

  SegmentOutcome best = run_tv(image, opt, order[0]);
  double total_seconds = best.report.seconds;
  for (std::size_t k = 1; k < order.size(); ++k) {
    SegmentOutcome cand = run_tv(image, opt, order[k]);
    total_seconds += cand.report.seconds;
    if (better(cand, best, opt.truth != nullptr)) best = std::move(cand);
  }
  best.report.seconds = total_seconds;
  return best;
}

}  // namespace fuzzyseg
