#include "wsheet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wsheet/errors.hpp"
#include "wsheet/expr.hpp"
#include "wsheet/fixtures.hpp"

namespace wsheet {

using nlohmann::json;

namespace {

constexpr int kDefaultCount = 33;

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ConfigError(pointer + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& at) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(at + "/" + key, "required field is missing");
  return *it;
}

void reject_unknown(const json& obj, const std::string& at, std::initializer_list<const char*> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(at + "/" + key, "unknown field");
  }
}

int as_int(const json& v, const std::string& at) {
  if (!v.is_number_integer()) fail(at, "expected an integer");
  return v.get<int>();
}

/// Numbers, or strings holding a constant expression such as "2*pi".
double as_real(const json& v, const std::string& at) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      const double x = eval_value(parse_expr(v.get<std::string>(), {}), {});
      if (std::isfinite(x)) return x;
    } catch (const std::exception& e) {
      fail(at, std::string("bad constant expression: ") + e.what());
    }
  }
  fail(at, "expected a number or a constant expression");
}

Interval as_interval(const json& v, const std::string& at) {
  if (!v.is_array() || v.size() != 2) fail(at, "expected [lo, hi]");
  Interval iv{as_real(v[0], at + "/0"), as_real(v[1], at + "/1")};
  if (!(iv.hi > iv.lo)) fail(at, "interval must satisfy lo < hi");
  return iv;
}

WorldSheetSpec parse_worldsheet(const json& w) {
  const std::string at = "/worldsheet";
  if (!w.is_object()) fail(at, "expected an object");
  reject_unknown(w, at, {"ambient_dim", "s", "k", "X", "u_domain", "u_periodic", "t_domain"});
  const int dim = as_int(require(w, "ambient_dim", at), at + "/ambient_dim");
  const int s = as_int(require(w, "s", at), at + "/s");
  const int k = as_int(require(w, "k", at), at + "/k");
  if (dim < 3) fail(at + "/ambient_dim", "must be at least 3");
  if (s < 1) fail(at + "/s", "must be at least 1");
  if (k < 2) fail(at + "/k", "must be at least 2");
  if (s + k != dim)
    throw ConfigError(at + "/s, " + at + "/k, " + at + "/ambient_dim: dimension mismatch, s + k = " +
                      std::to_string(s + k) + " but ambient_dim = " + std::to_string(dim));

  const json& X = require(w, "X", at);
  if (!X.is_array() || static_cast<int>(X.size()) != dim)
    fail(at + "/X", "expected an array of " + std::to_string(dim) + " expression strings");
  std::vector<std::string> text;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!X[i].is_string()) fail(at + "/X/" + std::to_string(i), "expected a string");
    text.push_back(X[i].get<std::string>());
  }

  const json& ud = require(w, "u_domain", at);
  if (!ud.is_array() || static_cast<int>(ud.size()) != s)
    fail(at + "/u_domain", "expected " + std::to_string(s) + " intervals");
  std::vector<Interval> u_domain;
  for (int i = 0; i < s; ++i) u_domain.push_back(as_interval(ud[i], at + "/u_domain/" + std::to_string(i)));

  std::vector<bool> periodic(s, false);
  if (auto it = w.find("u_periodic"); it != w.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != s)
      fail(at + "/u_periodic", "expected " + std::to_string(s) + " booleans");
    for (int i = 0; i < s; ++i) {
      if (!(*it)[i].is_boolean()) fail(at + "/u_periodic/" + std::to_string(i), "expected a boolean");
      periodic[i] = (*it)[i].get<bool>();
    }
  }
  const Interval t_domain = as_interval(require(w, "t_domain", at), at + "/t_domain");

  WorldSheetSpec spec;
  spec.ambient_dim = dim;
  spec.s = s;
  spec.k = k;
  const std::vector<std::string> chart = [&] {
    WorldSheetSpec probe;
    probe.s = s;
    return probe.chart();
  }();
  for (int i = 0; i < dim; ++i) {
    try {
      parse_expr(text[i], chart);
    } catch (const ParseError& e) {
      fail(at + "/X/" + std::to_string(i), e.what());
    }
  }
  return WorldSheetSpec::from_strings(dim, s, k, std::move(text), std::move(u_domain), t_domain, std::move(periodic));
}

std::pair<std::string, std::string> split_assignment(const std::string& a, const char* what) {
  const auto eq = a.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == a.size())
    throw ConfigError(std::string(what) + " override '" + a + "' must look like KEY=VALUE");
  return {a.substr(0, eq), a.substr(eq + 1)};
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "validate") return Command::Validate;
  if (name == "curvature") return Command::Curvature;
  if (name == "front") return Command::Front;
  if (name == "singular") return Command::Singular;
  if (name == "verify") return Command::Verify;
  throw ConfigError("unknown command '" + name + "' (expected validate, curvature, front, singular or verify)");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Validate: return "validate";
    case Command::Curvature: return "curvature";
    case Command::Front: return "front";
    case Command::Singular: return "singular";
    case Command::Verify: return "verify";
  }
  return "?";
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"signature", 1e-9},      {"rank", 1e-9},           {"frame_pivot", 1e-8},
      {"classify", 1e-8},       {"constancy_angle", 1e-7}, {"plane_residual", 1e-9},
      {"flat_K", 1e-10},        {"weingarten", 1e-5},     {"weingarten_step", 1e-4},
      {"height_gradient", 1e-9}, {"height_hessian", 1e-9}, {"extended_height", 1e-9},
      {"morse_rank", 1e-8},     {"tangency", 1e-9},       {"pedal_degenerate", 1e-9},
      {"front_rank", 1e-6},     {"maxwell_match", 1e-6},  {"maxwell_sep", 10},
      {"spectrum", 0.0},
  };
  return defaults;
}

double RunConfig::tol(const std::string& key) const {
  if (auto it = tolerances.find(key); it != tolerances.end()) return it->second;
  return default_tolerances().at(key);
}

int RunConfig::grid_count(const std::string& axis) const {
  if (auto it = grid.find(axis); it != grid.end()) return it->second;
  return kDefaultCount;
}

std::vector<std::string> RunConfig::axis_names() const {
  std::vector<std::string> names;
  for (int i = 1; i <= spec.s; ++i) names.push_back("u" + std::to_string(i));
  for (int i = 1; i <= spec.k - 2; ++i) names.push_back("a" + std::to_string(i));
  names.push_back("t");
  return names;
}

RunConfig config_from_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) fail("", "expected a JSON object");
  reject_unknown(doc, "", {"command", "worldsheet", "grid", "tolerances", "front", "verify", "outputs"});

  RunConfig cfg;
  cfg.source = source;
  cfg.spec = parse_worldsheet(require(doc, "worldsheet", ""));

  if (auto it = doc.find("command"); it != doc.end()) {
    if (!it->is_string()) fail("/command", "expected a string");
    try {
      cfg.command = parse_command(it->get<std::string>());
    } catch (const ConfigError& e) {
      fail("/command", e.what());
    }
  }

  if (auto it = doc.find("grid"); it != doc.end()) {
    if (!it->is_object()) fail("/grid", "expected an object");
    const auto names = cfg.axis_names();
    for (const auto& [key, val] : it->items()) {
      if (std::find(names.begin(), names.end(), key) == names.end()) fail("/grid/" + key, "unknown axis");
      cfg.grid[key] = as_int(val, "/grid/" + key);
    }
  }

  if (auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object()) fail("/tolerances", "expected an object");
    for (const auto& [key, val] : it->items()) {
      if (!default_tolerances().count(key)) fail("/tolerances/" + key, "unknown tolerance");
      if (!val.is_number() || val.get<double>() < 0) fail("/tolerances/" + key, "expected a nonnegative number");
      cfg.tolerances[key] = val.get<double>();
    }
  }

  if (auto it = doc.find("front"); it != doc.end()) {
    if (!it->is_object()) fail("/front", "expected an object");
    reject_unknown(*it, "/front", {"branches"});
    if (auto b = it->find("branches"); b != it->end()) {
      if (!b->is_array() || b->empty()) fail("/front/branches", "expected a nonempty array of +1/-1");
      cfg.branches.clear();
      for (std::size_t i = 0; i < b->size(); ++i) {
        const int v = as_int((*b)[i], "/front/branches/" + std::to_string(i));
        if (v != 1 && v != -1) fail("/front/branches/" + std::to_string(i), "expected +1 or -1");
        cfg.branches.push_back(v);
      }
    }
  }

  if (auto it = doc.find("verify"); it != doc.end()) {
    if (!it->is_object()) fail("/verify", "expected an object");
    reject_unknown(*it, "/verify", {"samples", "seed"});
    if (auto v = it->find("samples"); v != it->end()) {
      cfg.verify_samples = as_int(*v, "/verify/samples");
      if (cfg.verify_samples < 1) fail("/verify/samples", "must be positive");
    }
    if (auto v = it->find("seed"); v != it->end()) {
      if (!v->is_number_unsigned()) fail("/verify/seed", "expected a nonnegative integer");
      cfg.seed = v->get<unsigned long long>();
    }
  }

  if (auto it = doc.find("outputs"); it != doc.end()) {
    if (!it->is_object()) fail("/outputs", "expected an object");
    reject_unknown(*it, "/outputs", {"dir"});
    if (auto d = it->find("dir"); d != it->end()) {
      if (!d->is_string()) fail("/outputs/dir", "expected a string");
      cfg.out_dir = d->get<std::string>();
    }
  }

  finalize_grid(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json(ss.str(), "config:" + path);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RunConfig fixture_config(const std::string& name) {
  RunConfig cfg;
  cfg.source = "fixture:" + name;
  cfg.spec = fixtures::by_name(name);
  finalize_grid(cfg);
  return cfg;
}

void apply_tolerance_override(RunConfig& cfg, const std::string& assignment) {
  const auto [key, text] = split_assignment(assignment, "tolerance");
  if (!default_tolerances().count(key)) throw ConfigError("unknown tolerance '" + key + "'");
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !(v >= 0))
    throw ConfigError("tolerance '" + key + "' needs a nonnegative number, got '" + text + "'");
  cfg.tolerances[key] = v;
}

void apply_grid_override(RunConfig& cfg, const std::string& assignment) {
  const auto [axis, text] = split_assignment(assignment, "grid");
  const auto names = cfg.axis_names();
  if (std::find(names.begin(), names.end(), axis) == names.end())
    throw ConfigError("unknown grid axis '" + axis + "'");
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError("grid axis '" + axis + "' needs an integer, got '" + text + "'");
  cfg.grid[axis] = v;
  finalize_grid(cfg);
}

void finalize_grid(RunConfig& cfg, int min_count) {
  for (const auto& name : cfg.axis_names()) {
    auto [it, inserted] = cfg.grid.try_emplace(name, kDefaultCount);
    if (it->second < min_count)
      fail("/grid/" + name, "needs at least " + std::to_string(min_count) + " points, got " +
                                std::to_string(it->second));
  }
}

}  // namespace wsheet
