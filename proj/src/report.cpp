#include "fuzzyseg/report.hpp"

#include "json.hpp"

namespace fuzzyseg {

using nlohmann::json;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::l1fs: return "l1fs";
    case Algorithm::l2fs: return "l2fs";
    case Algorithm::fcm: return "fcm";
    case Algorithm::fcm_s2: return "fcm-s2";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "l1fs") return Algorithm::l1fs;
  if (name == "l2fs") return Algorithm::l2fs;
  if (name == "fcm") return Algorithm::fcm;
  if (name == "fcm-s2") return Algorithm::fcm_s2;
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

std::string to_json(const RunReport& r) {
  json j;
  j["algorithm"] = to_string(r.algorithm);
  j["input"] = r.input;
  j["config"] = {
      {"classes", r.config.classes},
      {"lambda", r.config.lambda},
      {"r", r.config.r},
      {"epsilon", r.config.epsilon},
      {"max_iters", r.config.max_iters},
      {"init", to_string(r.config.init)},
      {"seed", r.config.seed},
      {"boundary", to_string(r.config.boundary)},
      {"freeze_centers", r.config.freeze_centers},
  };
  j["init_used"] = r.init_used;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["energy"] = {{"tv", r.energy.tv_term},
                 {"fidelity", r.energy.fidelity_term},
                 {"total", r.energy.total}};
  j["kkt"] = {{"primal_d", r.kkt.primal_d},
              {"primal_w", r.kkt.primal_w},
              {"dual_stationarity", r.kkt.dual_stationarity}};
  j["sa"] = r.sa ? json(*r.sa) : json(nullptr);
  j["permutation"] = r.permutation;
  j["channels"] = r.channels;
  j["centers"] = r.centers;
  j["warnings"] = r.warnings;
  j["seconds"] = r.seconds;
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.input = j.at("input").get<std::string>();
    const json& c = j.at("config");
    r.config.classes = c.at("classes").get<std::size_t>();
    r.config.lambda = c.at("lambda").get<double>();
    r.config.r = c.at("r").get<double>();
    r.config.epsilon = c.at("epsilon").get<double>();
    r.config.max_iters = c.at("max_iters").get<std::size_t>();
    r.config.init = parse_init_strategy(c.at("init").get<std::string>());
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.boundary = parse_boundary_rule(c.at("boundary").get<std::string>());
    r.config.freeze_centers = c.at("freeze_centers").get<bool>();
    r.init_used = j.at("init_used").get<std::string>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    const json& e = j.at("energy");
    r.energy = {e.at("tv").get<double>(), e.at("fidelity").get<double>(),
                e.at("total").get<double>()};
    const json& k = j.at("kkt");
    r.kkt = {k.at("primal_d").get<double>(), k.at("primal_w").get<double>(),
             k.at("dual_stationarity").get<double>()};
    if (!j.at("sa").is_null()) r.sa = j.at("sa").get<double>();
    r.permutation = j.at("permutation").get<std::vector<int>>();
    r.channels = j.at("channels").get<std::size_t>();
    r.centers = j.at("centers").get<std::vector<double>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.seconds = j.at("seconds").get<double>();
    return r;
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed report: ") + ex.what());
  }
}

}  // namespace fuzzyseg
