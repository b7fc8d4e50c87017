#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ftsample/experiments.hpp"

namespace ftsample {

namespace {

using json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

class Reader {
 public:
  std::vector<std::string> issues;

  template <class T>
  bool scalar(const YAML::Node& node, const std::string& path, T& out) {
    if (!node.IsScalar()) {
      issues.push_back(path + ": expected a scalar");
      return false;
    }
    try {
      out = node.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      issues.push_back(path + ": cannot read '" + node.Scalar() + "'");
      return false;
    }
  }

  // A scalar, a list, or a {from, to, step} range.
  template <class T>
  bool list(const YAML::Node& node, const std::string& path, std::vector<T>& out) {
    out.clear();
    if (node.IsScalar()) {
      T v{};
      if (!scalar(node, path, v)) return false;
      out.push_back(v);
      return true;
    }
    if (node.IsSequence()) {
      bool ok = true;
      for (std::size_t i = 0; i < node.size(); ++i) {
        T v{};
        if (scalar(node[i], path + "[" + std::to_string(i) + "]", v)) {
          out.push_back(v);
        } else {
          ok = false;
        }
      }
      if (ok && out.empty()) issues.push_back(path + ": must be a nonempty list");
      return ok && !out.empty();
    }
    if (node.IsMap() && node["from"] && node["to"]) {
      T from{}, to{}, step{1};
      if (!scalar(node["from"], path + ".from", from) || !scalar(node["to"], path + ".to", to)) return false;
      if (node["step"] && !scalar(node["step"], path + ".step", step)) return false;
      if (!(step > T{0})) {
        issues.push_back(path + ".step: must be positive");
        return false;
      }
      if (to < from) {
        issues.push_back(path + ": range is empty (to < from)");
        return false;
      }
      for (T v = from; v <= to; v += step) out.push_back(v);
      return true;
    }
    issues.push_back(path + ": expected a value, a list or {from, to}");
    return false;
  }

  void unknown_keys(const YAML::Node& node, const std::string& prefix,
                    std::initializer_list<const char*> known) {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
        issues.push_back(prefix + key + ": unknown field");
      }
    }
  }
};

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      json j = json::object();
      for (const auto& kv : node) j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      json j = json::array();
      for (const auto& v : node) j.push_back(yaml_to_json(v));
      return j;
    }
    case YAML::NodeType::Scalar: {
      const auto& s = node.Scalar();
      std::int64_t i;
      double d;
      bool b;
      if (YAML::convert<std::int64_t>::decode(node, i)) return i;
      if (YAML::convert<double>::decode(node, d)) return d;
      if (YAML::convert<bool>::decode(node, b)) return b;
      return s;
    }
    default:
      return nullptr;
  }
}

bool needs(const std::string& kind, std::initializer_list<const char*> kinds) {
  return std::any_of(kinds.begin(), kinds.end(), [&](const char* k) { return kind == k; });
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "claim1-sweep", "observation-sweep", "l1-convergence", "lemma1", "lemma2",
      "theorem1",     "multidim",          "shor",           "boneh-lipton"};
  return kinds;
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(Errc::config, "invalid config: " + join(issues, "; ")), issues_(std::move(issues)) {}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = kind;
  j["seed"] = seed;
  j["trials"] = trials;
  j["jobs"] = jobs;
  j["output"] = {{"path", out_dir}, {"format", format == OutputFormat::csv ? "csv" : "json"}};
  j["grid"] = {{"p", grid.p},           {"q_multiplier", grid.q_multiplier},
               {"q_offset", grid.q_offset}, {"q_mode", grid.q_mode},
               {"q_max", grid.q_max},   {"r", grid.r},
               {"s_n", grid.s_n},       {"delta", grid.delta},
               {"k", grid.k},           {"m", grid.m}};
  json inst = json::array();
  for (const auto& s : instances) inst.push_back(json::parse(s));
  j["instances"] = inst;
  j["random_instances"] = random_instances;
  j["max_r"] = max_r;
  return j;
}

ExperimentConfig validate_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("config: not valid YAML: ") + e.what()});
  }
  if (!root.IsMap()) throw ConfigError({"config: top level must be a mapping"});

  Reader rd;
  ExperimentConfig c;
  rd.unknown_keys(root, "", {"experiment", "seed", "trials", "jobs", "output", "grid",
                             "instances", "random_instances", "max_r"});

  const auto& kinds = experiment_kinds();
  if (!root["experiment"]) {
    rd.issues.push_back("experiment: required (one of " + join(kinds, ", ") + ")");
  } else if (rd.scalar(root["experiment"], "experiment", c.kind) &&
             std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) {
    rd.issues.push_back("experiment: unknown kind '" + c.kind + "' (valid kinds: " +
                        join(kinds, ", ") + ")");
  }
  if (root["seed"]) rd.scalar(root["seed"], "seed", c.seed);
  if (root["trials"]) {
    std::int64_t t = 0;
    if (rd.scalar(root["trials"], "trials", t)) {
      if (t < 1) rd.issues.push_back("trials: must be at least 1");
      else c.trials = std::size_t(t);
    }
  }
  if (root["jobs"]) {
    std::int64_t jobs = 0;
    if (rd.scalar(root["jobs"], "jobs", jobs)) {
      if (jobs < 0) rd.issues.push_back("jobs: must be >= 0");
      else c.jobs = std::size_t(jobs);
    }
  }
  if (const auto out = root["output"]) {
    if (!out.IsMap()) {
      rd.issues.push_back("output: expected a mapping with path and format");
    } else {
      rd.unknown_keys(out, "output.", {"path", "format"});
      if (out["path"]) rd.scalar(out["path"], "output.path", c.out_dir);
      if (out["format"]) {
        std::string f;
        if (rd.scalar(out["format"], "output.format", f)) {
          if (f == "csv") c.format = OutputFormat::csv;
          else if (f == "json") c.format = OutputFormat::json;
          else rd.issues.push_back("output.format: must be csv or json (got '" + f + "')");
        }
      }
    }
  }

  bool has_offset = false, has_q_mode = false, has_m = false;
  if (const auto g = root["grid"]) {
    if (!g.IsMap()) {
      rd.issues.push_back("grid: expected a mapping");
    } else {
      rd.unknown_keys(g, "grid.", {"p", "q_multiplier", "q_offset", "q_mode", "q_max", "r",
                                   "s_n", "delta", "k", "m"});
      if (g["p"]) rd.list(g["p"], "grid.p", c.grid.p);
      if (g["q_multiplier"]) rd.list(g["q_multiplier"], "grid.q_multiplier", c.grid.q_multiplier);
      if (g["q_offset"]) has_offset = rd.scalar(g["q_offset"], "grid.q_offset", c.grid.q_offset);
      has_q_mode = bool(g["q_mode"]);
      has_m = bool(g["m"]);
      if (g["q_mode"]) rd.scalar(g["q_mode"], "grid.q_mode", c.grid.q_mode);
      if (g["q_max"]) rd.scalar(g["q_max"], "grid.q_max", c.grid.q_max);
      if (g["r"]) rd.list(g["r"], "grid.r", c.grid.r);
      if (g["s_n"]) rd.list(g["s_n"], "grid.s_n", c.grid.s_n);
      if (g["delta"]) rd.list(g["delta"], "grid.delta", c.grid.delta);
      if (g["k"]) rd.scalar(g["k"], "grid.k", c.grid.k);
      if (g["m"]) rd.scalar(g["m"], "grid.m", c.grid.m);
    }
  }
  if (const auto inst = root["instances"]) {
    if (!inst.IsSequence()) {
      rd.issues.push_back("instances: expected a list of instance specs");
    } else {
      for (std::size_t i = 0; i < inst.size(); ++i) {
        if (!inst[i].IsMap() || !inst[i]["type"]) {
          rd.issues.push_back("instances[" + std::to_string(i) + "]: expected a mapping with a type");
          continue;
        }
        c.instances.push_back(yaml_to_json(inst[i]).dump());
      }
    }
  }
  if (root["random_instances"]) rd.scalar(root["random_instances"], "random_instances", c.random_instances);
  if (root["max_r"]) rd.scalar(root["max_r"], "max_r", c.max_r);

  if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));

  // Kind-specific defaults.
  auto& g = c.grid;
  if (!has_offset) g.q_offset = needs(c.kind, {"l1-convergence", "theorem1"}) ? 1 : 0;
  if (needs(c.kind, {"lemma1", "lemma2"}) && !has_q_mode) g.q_mode = "threshold";
  if (c.kind == "lemma1" && g.delta.empty()) g.delta = {0.5};
  if (c.kind == "multidim" && g.q_multiplier.empty()) g.q_multiplier = {2, 3, 5};
  if (c.kind == "boneh-lipton") {
    if (g.r.empty()) g.r = {60};
    if (!has_m) g.m = 5;
    if (g.q_multiplier.empty()) g.q_multiplier = {3, 4};
    if (c.instances.empty()) {
      c.instances = {R"({"type":"affine_mod","r":6,"m":2,"alpha":5,"q_bl":6,"seed":1})",
                     R"({"type":"affine_mod","r":6,"m":1,"alpha":2,"q_bl":12,"seed":2})"};
    }
  }
  if (c.kind == "shor") {
    if (g.s_n.empty()) g.s_n = {2.0};
    if (g.q_multiplier.empty()) g.q_multiplier = {2.0};
  }

  check_config(c);
  return c;
}

void check_config(const ExperimentConfig& c) {
  std::vector<std::string> issues;
  const auto& g = c.grid;
  const auto& kind = c.kind;
  const auto require = [&](bool present, const char* field) {
    if (!present) issues.push_back(std::string(field) + ": required nonempty list for " + kind);
    return present;
  };

  if (c.trials < 1) issues.push_back("trials: must be at least 1");
  if (g.q_mode != "multiple" && g.q_mode != "range" && g.q_mode != "threshold") {
    issues.push_back("grid.q_mode: must be multiple, range or threshold");
  }
  for (auto m : g.q_multiplier) {
    if (!(m > 0.0)) issues.push_back("grid.q_multiplier: entries must be positive");
  }

  const auto q_of = [&](std::uint64_t p, double m) {
    return std::uint64_t(std::llround(m * double(p))) + g.q_offset;
  };
  const auto p_at_least = [&](std::uint64_t lo) {
    for (auto p : g.p) {
      if (p < lo) {
        issues.push_back("grid.p: " + kind + " needs p >= " + std::to_string(lo) + " (got " +
                         std::to_string(p) + ")");
        return;
      }
    }
  };

  if (needs(kind, {"claim1-sweep", "observation-sweep", "l1-convergence", "lemma1", "lemma2",
                   "theorem1", "multidim"})) {
    require(!g.p.empty(), "grid.p");
  }
  if (kind == "claim1-sweep" && require(!g.q_multiplier.empty(), "grid.q_multiplier")) {
    p_at_least(1);
    if (g.q_mode == "threshold") issues.push_back("grid.q_mode: claim1-sweep supports multiple or range");
    for (auto p : g.p) {
      for (auto m : g.q_multiplier) {
        if (g.q_mode == "multiple" && q_of(p, m) <= 2 * p) {
          issues.push_back("grid.q_multiplier: q = " + std::to_string(q_of(p, m)) +
                           " is not above 2p for p = " + std::to_string(p));
          break;
        }
      }
    }
  }
  if (kind == "observation-sweep") p_at_least(1);
  if (kind == "l1-convergence" && require(!g.q_multiplier.empty(), "grid.q_multiplier")) {
    p_at_least(1);
    for (auto p : g.p) {
      for (auto m : g.q_multiplier) {
        if (q_of(p, m) <= p) issues.push_back("grid.q_multiplier: q must exceed p");
      }
    }
  }
  if (needs(kind, {"lemma1", "lemma2"})) {
    p_at_least(2);
    if (require(!g.r.empty(), "grid.r")) {
      for (auto r : g.r) {
        if (!(r >= 1.0)) issues.push_back("grid.r: entries must be >= 1");
      }
    }
    if (g.q_mode == "range") issues.push_back("grid.q_mode: " + kind + " supports threshold or multiple");
    if (g.q_mode == "multiple") require(!g.q_multiplier.empty(), "grid.q_multiplier");
    for (auto d : g.delta) {
      if (!(d > 0.0 && d <= 1.0)) issues.push_back("grid.delta: entries must lie in (0, 1]");
    }
  }
  if (kind == "theorem1") {
    p_at_least(2);
    if (require(!g.s_n.empty(), "grid.s_n")) {
      for (auto s : g.s_n) {
        if (!(s >= 0.5)) issues.push_back("grid.s_n: entries must be >= 0.5 so that c <= 1");
      }
    }
  }
  if (kind == "multidim") {
    p_at_least(1);
    if (g.k < 1 || g.k > 3) issues.push_back("grid.k: must be 1, 2 or 3");
    for (auto p : g.p) {
      if (g.q_max <= 2 * p) {
        issues.push_back("grid.q_max: must exceed 2p for every p (p = " + std::to_string(p) + ")");
        break;
      }
    }
  }
  if (kind == "shor") {
    if (c.instances.empty() && c.random_instances == 0) {
      issues.push_back("instances: shor needs instances or random_instances > 0");
    }
    if (c.max_r < 2) issues.push_back("max_r: must be at least 2");
    for (auto m : g.q_multiplier) {
      if (m < 1.0 || m != std::floor(m)) issues.push_back("grid.q_multiplier: shor needs integers >= 1");
    }
    for (const auto& s : c.instances) {
      if (json::parse(s).value("type", "") != "modular_exponentiation" &&
          json::parse(s).value("type", "") != "residue") {
        issues.push_back("instances: shor instance type must be modular_exponentiation or residue");
      }
    }
  }
  if (kind == "boneh-lipton") {
    for (auto r : g.r) {
      if (!(r >= 1.0)) issues.push_back("grid.r: entries must be >= 1");
    }
    if (g.m < 1) issues.push_back("grid.m: must be at least 1");
    for (auto m : g.q_multiplier) {
      if (m < 3.0 || m != std::floor(m)) {
        issues.push_back("grid.q_multiplier: boneh-lipton needs integers >= 3 (q_sim > 2r)");
      }
    }
    for (const auto& s : c.instances) {
      if (json::parse(s).value("type", "") != "affine_mod") {
        issues.push_back("instances: boneh-lipton instance type must be affine_mod");
      }
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return validate_config(text.str());
}

}  // namespace ftsample
