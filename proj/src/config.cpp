#include "polysum/config.hpp"

#include <algorithm>
#include <json.hpp>

namespace polysum {

using json = nlohmann::ordered_json;

namespace {

std::complex<double> parse_complex(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(key, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double require_number(const json& j, const std::string& obj_key, const char* field) {
  const std::string key = obj_key + "." + field;
  if (!j.contains(field) || !j[field].is_number()) {
    throw ConfigError(key, "expected a number");
  }
  return j[field].get<double>();
}

Measure parse_measure(const json& j, const std::string& key);

Measure parse_measure(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError(key + ".kind", "missing measure kind");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "uniform-disk") {
      return Measure::uniform_disk(parse_complex(j.at("center"), key + ".center"),
                                   require_number(j, key, "radius"));
    }
    if (kind == "uniform-circle") {
      return Measure::uniform_circle(parse_complex(j.at("center"), key + ".center"),
                                     require_number(j, key, "radius"));
    }
    if (kind == "complex-gaussian") {
      return Measure::complex_gaussian(parse_complex(j.at("mean"), key + ".mean"),
                                       require_number(j, key, "scale"));
    }
    if (kind == "point-mass") {
      return Measure::point_mass(parse_complex(j.at("atom"), key + ".atom"));
    }
    if (kind == "log-pareto-radial") {
      std::complex<double> c{0.0, 0.0};
      if (j.contains("center")) c = parse_complex(j["center"], key + ".center");
      return Measure::log_pareto_radial(c);
    }
    if (kind == "singular-radial") {
      std::complex<double> c{0.0, 0.0};
      if (j.contains("center")) c = parse_complex(j["center"], key + ".center");
      return Measure::singular_radial(c);
    }
    if (kind == "mixture") {
      if (!j.contains("components") || !j["components"].is_array()) {
        throw ConfigError(key + ".components", "expected an array");
      }
      std::vector<std::pair<double, Measure>> parts;
      std::size_t i = 0;
      for (const auto& part : j["components"]) {
        const std::string pk = key + ".components[" + std::to_string(i) + "]";
        parts.emplace_back(require_number(part, pk, "weight"),
                           parse_measure(part.at("measure"), pk + ".measure"));
        ++i;
      }
      return Measure::mixture(std::move(parts));
    }
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("malformed measure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
  throw ConfigError(key + ".kind", "unknown measure kind '" + kind + "'");
}

DegreeSequence parse_degree(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains("form") || !j["form"].is_string()) {
    throw ConfigError(key + ".form", "missing degree form");
  }
  const std::string form = j["form"].get<std::string>();
  try {
    if (form == "full") return DegreeSequence::full();
    if (form == "ratio") return DegreeSequence::ratio(require_number(j, key, "alpha"));
    if (form == "sqrt") return DegreeSequence::sqrt_of_n();
    if (form == "constant") {
      return DegreeSequence::constant(
          static_cast<long>(require_number(j, key, "d")));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
  throw ConfigError(key + ".form", "unknown degree form '" + form + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "light-tail") return Mode::light_tail;
  if (s == "heavy-tail") return Mode::heavy_tail;
  if (s == "limit-only") return Mode::limit_only;
  if (s == "validate") return Mode::validate;
  throw ConfigError("mode", "unknown mode '" + s + "'");
}

json measure_to_json(const Measure& m);

json measure_to_json(const Measure& m) {
  json j;
  j["kind"] = m.kind_name();
  std::visit(
      [&](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, UniformDisk> ||
                      std::is_same_v<T, UniformCircle>) {
          j["center"] = {mm.center.real(), mm.center.imag()};
          j["radius"] = mm.radius;
        } else if constexpr (std::is_same_v<T, ComplexGaussian>) {
          j["mean"] = {mm.mean.real(), mm.mean.imag()};
          j["scale"] = mm.scale;
        } else if constexpr (std::is_same_v<T, PointMass>) {
          j["atom"] = {mm.atom.real(), mm.atom.imag()};
        } else if constexpr (std::is_same_v<T, LogParetoRadial> ||
                             std::is_same_v<T, SingularRadial>) {
          j["center"] = {mm.center.real(), mm.center.imag()};
        } else if constexpr (std::is_same_v<T, Mixture>) {
          json parts = json::array();
          for (const auto& [w, part] : mm.parts) {
            parts.push_back({{"weight", w}, {"measure", measure_to_json(part)}});
          }
          j["components"] = parts;
        }
      },
      m.v());
  return j;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::light_tail:
      return "light-tail";
    case Mode::heavy_tail:
      return "heavy-tail";
    case Mode::limit_only:
      return "limit-only";
    case Mode::validate:
      return "validate";
  }
  return "light-tail";
}

std::string ExperimentConfig::echo_json() const {
  json j;
  j["name"] = name;
  j["mode"] = mode_name(mode);
  json jterms = json::array();
  for (const auto& t : terms) {
    json jt;
    jt["measure"] = measure_to_json(t.measure);
    json jd;
    jd["form"] = t.degree.form_name();
    if (t.degree.form == DegreeSequence::Form::ratio) jd["alpha"] = t.degree.alpha;
    if (t.degree.form == DegreeSequence::Form::constant) jd["d"] = t.degree.fixed;
    jt["degree"] = jd;
    jterms.push_back(jt);
  }
  j["terms"] = jterms;
  j["n_values"] = n_values;
  j["seeds"] = seeds;
  j["grid"] = {{"center", {grid.center.real(), grid.center.imag()}},
               {"half_width", grid.half_width},
               {"points_per_side", grid.points_per_side}};
  j["metrics"] = metrics;
  j["tolerances"] = tolerances;
  j["out_dir"] = out_dir.string();
  j["probes"] = {{"count", probes.count},
                 {"radius", probes.radius},
                 {"exclusion", probes.exclusion}};
  if (!balls.empty()) {
    json jb = json::array();
    for (const auto& b : balls) {
      jb.push_back({{"center", {b.center.real(), b.center.imag()}},
                    {"radius", b.radius}});
    }
    j["balls"] = jb;
  }
  if (bump) {
    j["bump"] = {{"center", {bump->center.real(), bump->center.imag()}},
                 {"radius", bump->radius}};
  }
  j["solver"] = {{"max_iterations", solve.max_iterations},
                 {"stop_tolerance", solve.stop_tolerance},
                 {"restart_attempts", solve.restart_attempts}};
  j["mc_samples"] = mc_samples;
  j["ball_count"] = ball_count;
  return j.dump();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");

  ExperimentConfig cfg;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw ConfigError("name", "required string");
  }
  cfg.name = j["name"].get<std::string>();
  if (!j.contains("mode") || !j["mode"].is_string()) {
    throw ConfigError("mode", "required string");
  }
  cfg.mode = parse_mode(j["mode"].get<std::string>());

  if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty()) {
    throw ConfigError("terms", "required non-empty array");
  }
  std::size_t ti = 0;
  for (const auto& jt : j["terms"]) {
    const std::string key = "terms[" + std::to_string(ti) + "]";
    if (!jt.is_object() || !jt.contains("measure") || !jt.contains("degree")) {
      throw ConfigError(key, "term needs 'measure' and 'degree'");
    }
    cfg.terms.push_back(TermConfig{parse_measure(jt["measure"], key + ".measure"),
                                   parse_degree(jt["degree"], key + ".degree")});
    ++ti;
  }

  if (cfg.mode != Mode::limit_only) {
    if (!j.contains("n_values") || !j["n_values"].is_array() || j["n_values"].empty()) {
      throw ConfigError("n_values", "required non-empty array");
    }
    for (const auto& v : j["n_values"]) {
      if (!v.is_number_integer() || v.get<long>() < 1) {
        throw ConfigError("n_values", "entries must be positive integers");
      }
      cfg.n_values.push_back(v.get<std::size_t>());
    }
    if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty()) {
      throw ConfigError("seeds", "required non-empty array");
    }
    for (const auto& v : j["seeds"]) {
      if (!v.is_number_integer()) throw ConfigError("seeds", "entries must be integers");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }

  if (j.contains("grid")) {
    const auto& jg = j["grid"];
    if (jg.contains("center")) cfg.grid.center = parse_complex(jg["center"], "grid.center");
    if (jg.contains("half_width")) cfg.grid.half_width = require_number(jg, "grid", "half_width");
    if (jg.contains("points_per_side")) {
      cfg.grid.points_per_side = static_cast<int>(require_number(jg, "grid", "points_per_side"));
    }
    try {
      cfg.grid.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("grid", e.what());
    }
  }

  if (j.contains("metrics")) {
    for (const auto& m : j["metrics"]) {
      if (!m.is_string()) throw ConfigError("metrics", "entries must be strings");
      cfg.metrics.push_back(m.get<std::string>());
    }
  }
  if (j.contains("tolerances")) {
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ConfigError("tolerances." + k, "tolerance must be a positive number");
      }
      cfg.tolerances[k] = v.get<double>();
    }
  }
  if (!j.contains("out_dir") || !j["out_dir"].is_string()) {
    throw ConfigError("out_dir", "required string");
  }
  cfg.out_dir = j["out_dir"].get<std::string>();

  if (j.contains("probes")) {
    const auto& jp = j["probes"];
    if (jp.contains("count")) cfg.probes.count = jp["count"].get<std::size_t>();
    if (jp.contains("radius")) cfg.probes.radius = require_number(jp, "probes", "radius");
    if (jp.contains("exclusion")) {
      cfg.probes.exclusion = require_number(jp, "probes", "exclusion");
    }
    if (!(cfg.probes.exclusion > 0.0)) {
      throw ConfigError("probes.exclusion", "must be positive");
    }
  }
  if (j.contains("balls")) {
    std::size_t bi = 0;
    for (const auto& jb : j["balls"]) {
      const std::string key = "balls[" + std::to_string(bi++) + "]";
      cfg.balls.push_back(Ball{parse_complex(jb.at("center"), key + ".center"),
                               require_number(jb, key, "radius")});
    }
  }
  if (j.contains("bump")) {
    cfg.bump = BumpFunction{parse_complex(j["bump"].at("center"), "bump.center"),
                            require_number(j["bump"], "bump", "radius")};
  }
  if (j.contains("solver")) {
    const auto& js = j["solver"];
    if (js.contains("max_iterations")) {
      cfg.solve.max_iterations = js["max_iterations"].get<int>();
    }
    if (js.contains("stop_tolerance")) {
      cfg.solve.stop_tolerance = js["stop_tolerance"].get<double>();
    }
    if (js.contains("restart_attempts")) {
      cfg.solve.restart_attempts = js["restart_attempts"].get<int>();
    }
    try {
      cfg.solve.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("solver", e.what());
    }
  }
  if (j.contains("mc_samples")) cfg.mc_samples = j["mc_samples"].get<std::size_t>();
  if (j.contains("ball_count")) cfg.ball_count = j["ball_count"].get<std::size_t>();

  // structural invariants
  const long full_terms = std::count_if(
      cfg.terms.begin(), cfg.terms.end(),
      [](const TermConfig& t) { return t.degree.form == DegreeSequence::Form::full; });
  if (cfg.mode == Mode::heavy_tail) {
    if (cfg.terms.size() != 2 || full_terms != 2) {
      throw ConfigError("terms",
                        "heavy-tail mode requires exactly two terms of full degree");
    }
  } else {
    if (full_terms != 1) {
      throw ConfigError("terms", "exactly one term must have degree form 'full'");
    }
  }
  if (!cfg.n_values.empty()) {
    const std::size_t n_min = *std::min_element(cfg.n_values.begin(), cfg.n_values.end());
    for (std::size_t k = 0; k < cfg.terms.size(); ++k) {
      if (cfg.terms[k].degree.degree_at(n_min) > n_min) {
        throw ConfigError("terms[" + std::to_string(k) + "].degree",
                          "degree sequence exceeds the smallest n_value " +
                              std::to_string(n_min));
      }
    }
  }
  return cfg;
}

}  // namespace polysum
