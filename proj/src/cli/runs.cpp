#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "clr2d/cli.hpp"

namespace clr2d::cli {

namespace {

constexpr double kOdeLimit = 100.0;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string describe(const Operator& op) {
  if (const auto* ab = std::get_if<AharonovBohm>(&op)) return "ab(flux=" + fmt(ab->flux.raw) + ")";
  return "anti";
}

std::string describe(const RadialPotential& V) {
  return std::visit(Overloaded{
                        [](const LongRangeWp& w) { return "wp(p=" + fmt(w.p) + ",lambda=" + fmt(w.lambda) + ")"; },
                        [](const InvSquareWell& w) { return "inv_square_well(v=" + fmt(w.v) + ",R=" + fmt(w.R) + ")"; },
                        [](const SampledLog& s) {
                          std::string out = "sampled(";
                          for (Eigen::Index i = 0; i < s.t.size(); ++i) {
                            if (i > 0) out += ";";
                            out += fmt(s.t[i]) + ":" + fmt(s.values[i]);
                          }
                          return out + ")";
                        },
                    },
                    V.family());
}

std::string flag_text(const ModeFlags& f) {
  if (f.resonance_ambiguous && f.horizon_truncated) return "resonance;horizon";
  if (f.resonance_ambiguous) return "resonance";
  if (f.horizon_truncated) return "horizon";
  return "";
}

Report base_report(const ExperimentConfig& cfg, Command cmd) {
  Report r;
  r.kind = to_string(cmd);
  r.metadata = {
      {"tool", "clr2d"},
      {"version", kVersion},
      {"command", to_string(cmd)},
      {"operator", describe(cfg.op)},
      {"potential", cfg.potential ? describe(*cfg.potential) : ""},
      {"seed", std::to_string(cfg.seed)},
      {"rtol", fmt(cfg.count_settings.rtol)},
      {"resonance_eps", fmt(cfg.count_settings.resonance_eps)},
      {"t_max", cfg.count_settings.t_max ? fmt(*cfg.count_settings.t_max) : "auto"},
  };
  return r;
}

const RadialPotential& require_potential(const ExperimentConfig& cfg, const char* cmd) {
  if (!cfg.potential) throw ConfigError({std::string(cmd) + ": a 'potential' is required"});
  return *cfg.potential;
}

const LongRangeWp& require_wp(const ExperimentConfig& cfg, const char* cmd) {
  const auto* w = std::get_if<LongRangeWp>(&require_potential(cfg, cmd).family());
  if (w == nullptr) throw ConfigError({std::string(cmd) + ": the potential must be of family 'wp'"});
  if (!(w->lambda > 0.0)) throw ConfigError({std::string(cmd) + ": potential.lambda must be > 0"});
  return *w;
}

std::vector<double> couplings(const ExperimentConfig& cfg) {
  return cfg.lambda_schedule ? cfg.lambda_schedule->values() : std::vector<double>{cfg.lambda};
}

CountResult count(const ExperimentConfig& cfg, const RadialPotential& V, double lambda, unsigned workers) {
  CountOptions opts{cfg.count_settings, workers};
  if (const auto* ab = std::get_if<AharonovBohm>(&cfg.op)) return count_ab(V, ab->flux, lambda, opts);
  return count_anti(V, lambda, opts);
}

AsymptoticLaw law_for(const Operator& op, double p) {
  if (const auto* ab = std::get_if<AharonovBohm>(&op)) return asymp_limit_ab(ab->flux, p);
  return asymp_limit_anti(p);
}

Bracket bracket_for(const Operator& op, const LatticeBracketParams& params) {
  if (std::holds_alternative<AharonovBohm>(op)) return bracket_wp(params);
  return bracket_wp_anti(params);
}

LatticeBracketParams lattice_params(const Operator& op, double p, double lambda, double L) {
  // The antisymmetric sums ignore the flux; any admissible value will do.
  const Flux flux = std::holds_alternative<AharonovBohm>(op) ? std::get<AharonovBohm>(op).flux : reduce_flux(0.5);
  return {p, flux, lambda, L};
}

// Uniform in [a, b) from the top 53 bits, identical on every standard library.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()(double a, double b) { return a + (b - a) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53); }
  int index(int n) { return static_cast<int>((*this)(0.0, static_cast<double>(n))); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

std::vector<RadialPotential> random_battery(const Battery& battery, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<RadialPotential> out;
  out.reserve(static_cast<std::size_t>(battery.inv_square_well + battery.sampled));
  for (int i = 0; i < battery.inv_square_well; ++i) {
    const double v = u(0.5, 30.0);
    const double R = std::exp(u(0.2, 4.0));
    out.push_back(RadialPotential::inv_square_well(v, R));
  }
  for (int i = 0; i < battery.sampled; ++i) {
    const int knots = 4 + u.index(7);
    Eigen::VectorXd t(knots), values(knots);
    t[0] = u(-2.0, 2.0);
    values[0] = 0.0;
    for (int k = 1; k < knots; ++k) {
      t[k] = t[k - 1] + u(0.2, 1.5);
      values[k] = k + 1 < knots ? u(0.0, 15.0) : 0.0;
    }
    out.push_back(RadialPotential::sampled(t, values));
  }
  return out;
}

Report run_constants(const ExperimentConfig& cfg) {
  Report r = base_report(cfg, Command::Constants);
  const std::vector<double> alphas = cfg.alphas.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0} : cfg.alphas;
  if (std::holds_alternative<Antisymmetric>(cfg.op)) {
    r.columns = {"alpha", "p", "c_strong", "c_weak_lower", "c_weak_upper", "beta", "theta", "s", "grid_fallback"};
    for (double alpha : alphas) {
      const BoundParams bp = BoundParams::from_alpha(alpha);
      const WeakConstant w = c_weak_upper_anti(bp);
      r.rows.push_back({alpha, bp.p, c_strong_anti(bp), c_weak_lower_anti(bp), w.value, w.witness.beta, w.witness.theta,
                        w.witness.s, w.witness.grid_fallback});
    }
    return r;
  }
  const std::vector<double> fluxes =
      cfg.fluxes.empty() ? std::vector<double>{0.5, 0.25, 0.1, 0.05, 0.01} : cfg.fluxes;
  r.columns = {"flux",          "dist",        "alpha",          "p",
               "c_strong",      "c_weak_lower", "c_weak_upper",  "beta",
               "theta",         "s",           "grid_fallback",  "c_strong_scaled",
               "c_weak_upper_scaled", "hardy_sobolev_lower", "hardy_trial_upper"};
  for (double phi : fluxes) {
    const Flux f = reduce_flux(phi);
    for (double alpha : alphas) {
      const BoundParams bp = BoundParams::from_alpha(alpha);
      const WeakConstant w = c_weak_upper_ab(f, bp);
      const double cs = c_strong_ab(f, bp);
      const double scale = std::pow(f.dist, 1.0 + alpha);
      r.rows.push_back({phi, f.dist, alpha, bp.p, cs, c_weak_lower_ab(f, bp), w.value, w.witness.beta,
                        w.witness.theta, w.witness.s, w.witness.grid_fallback, cs * scale, w.value * scale,
                        hardy_sobolev_lower(f, bp.q), hardy_trial_quotient(f, bp.q, cosine_bump_trial(f, bp.q))});
    }
  }
  return r;
}

Report run_count(const ExperimentConfig& cfg, unsigned workers) {
  Report r = base_report(cfg, Command::Count);
  const RadialPotential& V = require_potential(cfg, "count");
  r.columns = {"lambda", "total", "channels", "max_index", "certificate", "flags", "per_mode"};
  for (double lambda : couplings(cfg)) {
    const CountResult c = count(cfg, V, lambda, workers);
    std::string modes;
    for (const auto& [n, k] : c.per_mode) {
      if (k == 0) continue;
      if (!modes.empty()) modes += ";";
      modes += std::to_string(n) + ":" + std::to_string(k);
    }
    r.rows.push_back({lambda, c.total, static_cast<std::int64_t>(c.per_mode.size()), static_cast<std::int64_t>(c.max_index),
                      std::string(to_string(c.certificate)), flag_text(c.flags), modes});
    if (c.flags.any()) r.exit_code = kFlagged;
  }
  return r;
}

Report run_verify(const ExperimentConfig& cfg, unsigned workers) {
  Report r = base_report(cfg, Command::Verify);
  if (cfg.alphas.empty()) throw ConfigError({"verify: 'params' with at least one alpha or p is required"});
  std::vector<RadialPotential> battery;
  if (cfg.potential) battery.push_back(*cfg.potential);
  for (auto& V : random_battery(cfg.battery, cfg.seed)) battery.push_back(std::move(V));
  if (battery.empty()) throw ConfigError({"verify: give a 'potential' or a nonempty 'battery'"});

  r.columns = {"instance", "potential", "lambda",   "alpha",    "count",   "c_strong", "strong_norm",
               "rhs_strong", "c_weak_upper", "weak_norm", "rhs_weak", "strong_ok", "weak_ok", "status", "flags"};

  std::vector<double> c_strong_v, c_weak_v;
  for (double alpha : cfg.alphas) {
    const BoundParams bp = BoundParams::from_alpha(alpha);
    c_strong_v.push_back(c_strong(cfg.op, bp));
    c_weak_v.push_back(c_weak_upper(cfg.op, bp).value);
  }

  bool violation = false;
  bool flagged = false;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const RadialPotential& V = battery[i];
    const CountResult c = count(cfg, V, cfg.lambda, workers);
    const RadialPotential scaled = scale(V, cfg.lambda);
    const bool skipped = c.flags.resonance_ambiguous;
    flagged |= c.flags.horizon_truncated;
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
      const BoundParams bp = BoundParams::from_alpha(cfg.alphas[a]);
      const ExtReal sn = strong_norm(scaled, bp);
      const ExtReal wn = weak_norm(scaled, bp);
      const ExtReal rs = sn.scaled(c_strong_v[a]);
      const ExtReal rw = wn.scaled(c_weak_v[a]);
      const bool strong_ok = rs.bounds(static_cast<double>(c.total));
      const bool weak_ok = rw.bounds(static_cast<double>(c.total));
      std::string status = "pass";
      if (skipped) {
        status = "skipped";
      } else if (!strong_ok || !weak_ok) {
        status = "fail";
        violation = true;
      }
      r.rows.push_back({static_cast<std::int64_t>(i), describe(V), cfg.lambda, cfg.alphas[a], c.total, c_strong_v[a], sn,
                        rs, c_weak_v[a], wn, rw, strong_ok, weak_ok, status, flag_text(c.flags)});
    }
  }
  r.exit_code = violation ? kViolation : (flagged ? kFlagged : kOk);
  return r;
}

Report run_sweep(const ExperimentConfig& cfg, unsigned workers) {
  Report r = base_report(cfg, Command::Sweep);
  const RadialPotential& V = require_potential(cfg, "sweep");
  if (!cfg.lambda_schedule) throw ConfigError({"sweep: a 'lambda_schedule' is required"});
  const auto* wp = std::get_if<LongRangeWp>(&V.family());
  if (wp == nullptr && cfg.engine == Engine::Lattice) {
    throw ConfigError({"sweep: the lattice engine needs a potential of family 'wp'"});
  }
  if (wp == nullptr && cfg.engine == Engine::Auto) {
    throw ConfigError({"sweep: asymptotic laws are defined for the 'wp' family; use engine 'ode' for other potentials"});
  }
  std::optional<AsymptoticLaw> law;
  double target = 0.0;
  if (wp != nullptr) {
    try {
      law = law_for(cfg.op, wp->p);
      target = law->target(RadialPotential::wp(wp->p));
    } catch (const DomainError&) {
      law.reset();
    }
  }
  r.metadata.emplace_back("regime", law ? to_string(law->regime) : "none");

  r.columns = {"lambda", "engine", "L", "count", "lower", "upper", "regime", "normalized", "normalized_lower",
               "normalized_upper", "target", "rel_gap", "flags"};
  const double base = wp != nullptr ? wp->lambda : 1.0;
  for (double s : cfg.lambda_schedule->values()) {
    const double lambda = s * base;  // total coupling in front of the unit profile
    const bool lattice = cfg.engine == Engine::Lattice ||
                         (cfg.engine == Engine::Auto && lambda > kOdeLimit && wp->p >= 1.0);
    std::vector<Cell> row;
    if (lattice) {
      const double L = cfg.bracket_L.value_or(bracket_length(lambda, wp->p));
      const Bracket b = bracket_for(cfg.op, lattice_params(cfg.op, wp->p, lambda, L));
      if (law) {
        const double nl = law->normalize(static_cast<double>(b.lower), lambda);
        const double nu = law->normalize(static_cast<double>(b.upper), lambda);
        const double mid = 0.5 * (nl + nu);
        row = {lambda, std::string("lattice"), L, std::monostate{}, b.lower, b.upper, std::string(to_string(law->regime)),
               mid, nl, nu, target, std::abs(mid - target) / target, std::string()};
      } else {
        row = {lambda, std::string("lattice"), L, std::monostate{}, b.lower, b.upper, std::string("none"),
               std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}, std::string()};
      }
    } else {
      const CountResult c = count(cfg, scale(V, s), 1.0, workers);
      if (c.flags.any()) r.exit_code = kFlagged;
      if (law) {
        const double n = law->normalize(static_cast<double>(c.total), lambda);
        row = {lambda, std::string("ode"), std::monostate{}, c.total, std::monostate{}, std::monostate{},
               std::string(to_string(law->regime)), n, std::monostate{}, std::monostate{}, target,
               std::abs(n - target) / target, flag_text(c.flags)};
      } else {
        row = {lambda, std::string("ode"), std::monostate{}, c.total, std::monostate{}, std::monostate{},
               std::string("none"), std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
               std::monostate{}, flag_text(c.flags)};
      }
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report run_bracket(const ExperimentConfig& cfg, unsigned workers) {
  Report r = base_report(cfg, Command::Bracket);
  const LongRangeWp& wp = require_wp(cfg, "bracket");
  std::optional<AsymptoticLaw> law;
  try {
    law = law_for(cfg.op, wp.p);
  } catch (const DomainError&) {
    law.reset();  // no normalization for the antisymmetric p < 1 case
  }
  r.columns = {"lambda", "L", "lower", "upper", "normalized_lower", "normalized_upper", "count", "contained", "flags"};
  for (double s : couplings(cfg)) {
    const double lambda = s * wp.lambda;
    const double L = cfg.bracket_L.value_or(bracket_length(lambda, wp.p));
    const Bracket b = bracket_for(cfg.op, lattice_params(cfg.op, wp.p, lambda, L));
    std::vector<Cell> row = {lambda, L, b.lower, b.upper};
    const bool normalizable = law && !(law->regime == AsymptoticLaw::Regime::LogLinear && lambda <= 1.0);
    if (normalizable) {
      row.emplace_back(law->normalize(static_cast<double>(b.lower), lambda));
      row.emplace_back(law->normalize(static_cast<double>(b.upper), lambda));
    } else {
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
    }
    if (cfg.bracket_with_count && lambda <= kOdeLimit) {
      const CountResult c = count(cfg, RadialPotential::wp(wp.p), lambda, workers);
      const bool inside = b.lower <= c.total && c.total <= b.upper;
      if (!inside) r.exit_code = kViolation;
      if (c.flags.any() && r.exit_code == kOk) r.exit_code = kFlagged;
      row.emplace_back(c.total);
      row.emplace_back(inside);
      row.emplace_back(flag_text(c.flags));
    } else {
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
      row.emplace_back(std::string());
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

Report run(const ExperimentConfig& cfg, unsigned workers) {
  if (!cfg.command) throw ConfigError({"no command given"});
  switch (*cfg.command) {
    case Command::Constants:
      return run_constants(cfg);
    case Command::Count:
      return run_count(cfg, workers);
    case Command::Verify:
      return run_verify(cfg, workers);
    case Command::Sweep:
      return run_sweep(cfg, workers);
    case Command::Bracket:
      return run_bracket(cfg, workers);
  }
  throw ConfigError({"unknown command"});
}

}  // namespace clr2d::cli
