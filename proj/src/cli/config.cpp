#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>

#include "clr2d/cli.hpp"

namespace clr2d::cli {

namespace {

using nlohmann::json;

std::string join_lines(const std::vector<std::string>& problems) {
  std::string out = "invalid config:";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& where, const std::string& what) { problems.push_back(where + ": " + what); }

  bool object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      fail(where, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items()) {
      if (allowed.count(key) == 0) fail(where, "unknown field '" + key + "'");
    }
    return true;
  }

  std::optional<double> number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    const json& v = j.at(key);
    if (!v.is_number()) {
      fail(where + "." + key, "expected a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      fail(where + "." + key, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> required_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) {
      fail(where, "missing field '" + key + "'");
      return std::nullopt;
    }
    return number(j, key, where);
  }

  std::optional<std::int64_t> integer(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
      fail(where + "." + key, "expected an integer");
      return std::nullopt;
    }
    return v.get<std::int64_t>();
  }

  std::optional<std::string> string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    const json& v = j.at(key);
    if (!v.is_string()) {
      fail(where + "." + key, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  /// A number or a nonempty array of numbers.
  std::vector<double> numbers(const json& j, const std::string& key, const std::string& where) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    const json& v = j.at(key);
    const std::string at = where + "." + key;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array() && !v.empty()) {
      for (const auto& x : v) {
        if (!x.is_number()) {
          fail(at, "expected numbers");
          return {};
        }
        out.push_back(x.get<double>());
      }
    } else {
      fail(at, "expected a number or a nonempty array of numbers");
    }
    return out;
  }

  template <class F>
  void guard(const std::string& where, F&& f) {
    try {
      f();
    } catch (const DomainError& e) {
      fail(where, e.what());
    }
  }
};

void read_operator(Reader& r, const json& j, ExperimentConfig& cfg) {
  if (!r.object(j, "operator", {"type", "flux"})) return;
  const auto type = r.string(j, "type", "operator");
  if (!type) {
    r.fail("operator", "missing field 'type' (ab or anti)");
    return;
  }
  if (*type == "anti") {
    if (j.contains("flux")) r.fail("operator", "the antisymmetric operator takes no flux");
    cfg.op = Antisymmetric{};
  } else if (*type == "ab") {
    if (const auto phi = r.required_number(j, "flux", "operator")) {
      r.guard("operator.flux", [&] { cfg.op = AharonovBohm{reduce_flux(*phi)}; });
    }
  } else {
    r.fail("operator.type", "must be 'ab' or 'anti', got '" + *type + "'");
  }
}

void read_potential(Reader& r, const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) {
    r.fail("potential", "expected an object");
    return;
  }
  const auto family = r.string(j, "family", "potential");
  if (!family) {
    r.fail("potential", "missing field 'family' (wp, inv_square_well or sampled)");
    return;
  }
  if (*family == "wp") {
    r.object(j, "potential", {"family", "p", "lambda"});
    const auto p = r.required_number(j, "p", "potential");
    const double lambda = r.number(j, "lambda", "potential").value_or(1.0);
    if (p) r.guard("potential", [&] { cfg.potential = RadialPotential::wp(*p, lambda); });
  } else if (*family == "inv_square_well") {
    r.object(j, "potential", {"family", "v", "R"});
    const auto v = r.required_number(j, "v", "potential");
    const auto R = r.required_number(j, "R", "potential");
    if (v && R) r.guard("potential", [&] { cfg.potential = RadialPotential::inv_square_well(*v, *R); });
  } else if (*family == "sampled") {
    r.object(j, "potential", {"family", "t", "values"});
    const auto t = r.numbers(j, "t", "potential");
    const auto v = r.numbers(j, "values", "potential");
    if (t.empty() || v.empty()) {
      r.fail("potential", "sampled potentials need arrays 't' and 'values'");
      return;
    }
    r.guard("potential", [&] {
      cfg.potential = RadialPotential::sampled(Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())),
                                               Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    });
  } else {
    r.fail("potential.family", "must be wp, inv_square_well or sampled, got '" + *family + "'");
  }
}

void read_params(Reader& r, const json& j, ExperimentConfig& cfg) {
  if (!r.object(j, "params", {"alpha", "p"})) return;
  if (j.contains("alpha") == j.contains("p")) {
    r.fail("params", "give exactly one of 'alpha' or 'p'");
    return;
  }
  if (j.contains("alpha")) {
    for (double a : r.numbers(j, "alpha", "params")) {
      r.guard("params.alpha", [&] { cfg.alphas.push_back(BoundParams::from_alpha(a).alpha); });
    }
  } else {
    for (double p : r.numbers(j, "p", "params")) {
      r.guard("params.p", [&] { cfg.alphas.push_back(BoundParams::from_p(p).alpha); });
    }
  }
}

void read_schedule(Reader& r, const json& j, ExperimentConfig& cfg) {
  if (!r.object(j, "lambda_schedule", {"start", "factor", "count"})) return;
  const auto start = r.required_number(j, "start", "lambda_schedule");
  const auto factor = r.required_number(j, "factor", "lambda_schedule");
  if (!j.contains("count")) r.fail("lambda_schedule", "missing field 'count'");
  const auto count = r.integer(j, "count", "lambda_schedule");
  bool ok = start && factor && count;
  if (start && !(*start > 0.0)) {
    r.fail("lambda_schedule.start", "must be > 0");
    ok = false;
  }
  if (factor && !(*factor > 1.0)) {
    r.fail("lambda_schedule.factor", "must be > 1 (schedule strictly increasing)");
    ok = false;
  }
  if (count && (*count < 1 || *count > 1000)) {
    r.fail("lambda_schedule.count", "must lie in [1, 1000]");
    ok = false;
  }
  if (ok) cfg.lambda_schedule = Schedule{*start, *factor, static_cast<int>(*count)};
}

void read_count_settings(Reader& r, const json& j, ExperimentConfig& cfg) {
  if (!r.object(j, "count_settings", {"rtol", "resonance_eps", "t_max"})) return;
  if (const auto x = r.number(j, "rtol", "count_settings")) {
    if (*x > 1e-12 && *x < 1e-4) {
      cfg.count_settings.rtol = *x;
    } else {
      r.fail("count_settings.rtol", "must lie in (1e-12, 1e-4)");
    }
  }
  if (const auto x = r.number(j, "resonance_eps", "count_settings")) {
    if (*x >= 0.0) {
      cfg.count_settings.resonance_eps = *x;
    } else {
      r.fail("count_settings.resonance_eps", "must be >= 0");
    }
  }
  if (const auto x = r.number(j, "t_max", "count_settings")) cfg.count_settings.t_max = *x;
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::runtime_error(join_lines(problems)), problems_(problems) {}

const char* to_string(Command c) {
  switch (c) {
    case Command::Constants:
      return "constants";
    case Command::Count:
      return "count";
    case Command::Verify:
      return "verify";
    case Command::Sweep:
      return "sweep";
    case Command::Bracket:
      return "bracket";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::Constants, Command::Count, Command::Verify, Command::Sweep, Command::Bracket}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::optional<Format> parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

std::vector<double> Schedule::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(start * std::pow(factor, i));
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }

  Reader r;
  ExperimentConfig cfg;
  if (!r.object(j, "config", {"command", "operator", "potential", "params", "fluxes", "lambda", "lambda_schedule",
                              "output", "seed", "battery", "bracket", "engine", "count_settings"})) {
    throw ConfigError(r.problems);
  }

  if (const auto c = r.string(j, "command", "config")) {
    cfg.command = parse_command(*c);
    if (!cfg.command) r.fail("command", "must be constants, count, verify, sweep or bracket, got '" + *c + "'");
  }
  if (j.contains("operator")) {
    read_operator(r, j.at("operator"), cfg);
  } else {
    r.fail("config", "missing field 'operator'");
  }
  if (j.contains("potential")) read_potential(r, j.at("potential"), cfg);
  if (j.contains("params")) read_params(r, j.at("params"), cfg);
  for (double phi : r.numbers(j, "fluxes", "config")) {
    r.guard("fluxes", [&] { reduce_flux(phi); });
    cfg.fluxes.push_back(phi);
  }
  if (const auto lambda = r.number(j, "lambda", "config")) {
    if (*lambda >= 0.0) {
      cfg.lambda = *lambda;
    } else {
      r.fail("lambda", "must be >= 0");
    }
  }
  if (j.contains("lambda_schedule")) read_schedule(r, j.at("lambda_schedule"), cfg);
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (r.object(o, "output", {"path", "format"})) {
      cfg.out_path = r.string(o, "path", "output").value_or("");
      if (const auto f = r.string(o, "format", "output")) {
        if (const auto fmt = parse_format(*f)) {
          cfg.format = *fmt;
        } else {
          r.fail("output.format", "must be csv or json, got '" + *f + "'");
        }
      }
    }
  }
  if (const auto seed = r.integer(j, "seed", "config")) {
    if (*seed >= 0) {
      cfg.seed = static_cast<std::uint64_t>(*seed);
    } else {
      r.fail("seed", "must be >= 0");
    }
  }
  if (j.contains("battery")) {
    const json& b = j.at("battery");
    if (r.object(b, "battery", {"inv_square_well", "sampled"})) {
      const auto isw = r.integer(b, "inv_square_well", "battery").value_or(0);
      const auto smp = r.integer(b, "sampled", "battery").value_or(0);
      if (isw < 0 || smp < 0 || isw > 100000 || smp > 100000) {
        r.fail("battery", "sizes must lie in [0, 100000]");
      } else {
        cfg.battery = Battery{static_cast<int>(isw), static_cast<int>(smp)};
      }
    }
  }
  if (j.contains("bracket")) {
    const json& b = j.at("bracket");
    if (r.object(b, "bracket", {"L", "with_count"})) {
      if (const auto L = r.number(b, "L", "bracket")) {
        if (*L > 0.0) {
          cfg.bracket_L = *L;
        } else {
          r.fail("bracket.L", "must be > 0");
        }
      }
      if (b.contains("with_count")) {
        if (b.at("with_count").is_boolean()) {
          cfg.bracket_with_count = b.at("with_count").get<bool>();
        } else {
          r.fail("bracket.with_count", "expected a boolean");
        }
      }
    }
  }
  if (const auto e = r.string(j, "engine", "config")) {
    if (*e == "auto") {
      cfg.engine = Engine::Auto;
    } else if (*e == "ode") {
      cfg.engine = Engine::Ode;
    } else if (*e == "lattice") {
      cfg.engine = Engine::Lattice;
    } else {
      r.fail("engine", "must be auto, ode or lattice, got '" + *e + "'");
    }
  }
  if (j.contains("count_settings")) read_count_settings(r, j.at("count_settings"), cfg);

  if (!r.problems.empty()) throw ConfigError(r.problems);
  return cfg;
}

}  // namespace clr2d::cli
