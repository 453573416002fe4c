// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clr2d/cli.hpp"
#include "clr2d/counter.hpp"
#include "clr2d/modes.hpp"
#include "clr2d/specfun.hpp"

using namespace clr2d;
using numerics::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool rel_close(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::abs(ref); }

// 1. Constant closed forms.
Outcome constants_closed_forms() {
  double worst = 0.0;
  for (double s : {1.5, 2.0, 3.0, 5.0}) {
    const double ref = 2.0 * (std::pow(2.0, s) - 1.0) * std::riemann_zeta(s);
    worst = std::max(worst, std::abs(flux_sum(0.5, s) / ref - 1.0));
  }
  const double z3 = std::riemann_zeta(3.0);
  const double e_ab = std::abs(c_strong_ab(reduce_flux(0.5), BoundParams::from_alpha(2.0)) / (7 * z3 / (4 * pi)) - 1.0);
  const double e_anti = std::abs(c_strong_anti(BoundParams::from_alpha(2.0)) / (z3 / (4 * pi)) - 1.0);
  worst = std::max({worst, e_ab, e_anti});
  return {worst <= 1e-11, fmt("max relative error %.2e (tol 1e-11)", worst)};
}

// 2. Oracle equivalence on seeded square-well channels.
Outcome oracle_equivalence() {
  std::mt19937_64 gen(20240611);
  auto u = [&](double a, double b) { return a + (b - a) * (static_cast<double>(gen() >> 11) * 0x1.0p-53); };
  int agree = 0, flagged = 0, disagree = 0;
  std::string first_bad;
  for (int i = 0; i < 200; ++i) {
    const double mu = u(0.1, 3.0), v = u(0.2, 40.0), ell = u(0.2, 6.0);
    const ModeProblem prob{mu, LogPotential::box(v, 0.0, ell)};
    const ModeCount c = count_mode(prob);
    if (c.flags.resonance_ambiguous) {
      ++flagged;
      continue;
    }
    std::int64_t fd = -1;
    try {
      fd = count_mode_fd(prob);
    } catch (const NumericalError&) {
      fd = -1;
    }
    const std::int64_t sq = count_square_well(mu, v, ell);
    if (c.count == fd && fd == sq) {
      ++agree;
    } else {
      ++disagree;
      if (first_bad.empty()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "; first mismatch mu=%.6g v=%.6g l=%.6g ode=%lld fd=%lld exact=%lld", mu, v, ell,
                      static_cast<long long>(c.count), static_cast<long long>(fd), static_cast<long long>(sq));
        first_bad = buf;
      }
    }
  }
  const bool pass = disagree == 0 && flagged <= 4;
  return {pass, std::to_string(agree) + "/200 agree, " + std::to_string(flagged) + " resonance-flagged, " +
                    std::to_string(disagree) + " mismatches" + first_bad};
}

// Shared battery for 3 and 4: 100 InvSquareWell + 50 Sampled, all alphas and fluxes.
struct BatteryTally {
  int rows = 0;
  int strong_fail = 0;
  int weak_fail = 0;
  int skipped = 0;
};

BatteryTally run_battery() {
  BatteryTally t;
  std::vector<Operator> ops;
  for (double phi : {0.05, 0.3, 0.5}) ops.emplace_back(AharonovBohm{reduce_flux(phi)});
  ops.emplace_back(Antisymmetric{});
  for (const Operator& op : ops) {
    cli::ExperimentConfig cfg;
    cfg.op = op;
    cfg.alphas = {0.5, 1.0, 2.0, 4.0};
    cfg.battery = {100, 50};
    cfg.seed = 20240611;
    const cli::Report r = cli::run_verify(cfg);
    for (const auto& row : r.rows) {
      ++t.rows;
      if (std::get<std::string>(row[13]) == "skipped") {
        ++t.skipped;
        continue;
      }
      t.strong_fail += std::get<bool>(row[11]) ? 0 : 1;
      t.weak_fail += std::get<bool>(row[12]) ? 0 : 1;
    }
  }
  return t;
}

// 5. Bracket containment.
Outcome bracket_containment() {
  int checked = 0, outside = 0;
  std::string first_bad;
  for (double p : {1.0, 2.0}) {
    for (double phi : {0.3, 0.5}) {
      const Flux f = reduce_flux(phi);
      for (double lambda : {2.0, 10.0, 50.0, 100.0}) {
        const CountResult c = count_ab(RadialPotential::wp(p), f, lambda);
        for (double L : {1.0, 2.0, 5.0}) {
          const Bracket b = bracket_wp({p, f, lambda, L});
          ++checked;
          if (c.flags.any() || c.total < b.lower || c.total > b.upper) {
            ++outside;
            if (first_bad.empty()) {
              first_bad = "; first failure p=" + fmt("%g", p) + " phi=" + fmt("%g", phi) + " lambda=" + fmt("%g", lambda) +
                          " L=" + fmt("%g", L);
            }
          }
        }
      }
    }
  }
  return {outside == 0, std::to_string(checked - outside) + "/" + std::to_string(checked) + " contained" + first_bad};
}

// 6. Strong coupling, p = 2.
Outcome strong_coupling_power() {
  const Flux f = reduce_flux(0.5);
  const AsymptoticLaw law = asymp_limit_ab(f, 2.0);
  const double target = law.coefficient;
  std::vector<double> gaps;
  double lo = 0, hi = 0;
  for (double lambda : {1e3, 1e4, 1e5}) {
    const Bracket b = bracket_wp({2.0, f, lambda, bracket_length(lambda, 2.0)});
    lo = law.normalize(static_cast<double>(b.lower), lambda);
    hi = law.normalize(static_cast<double>(b.upper), lambda);
    gaps.push_back(std::abs(0.5 * (lo + hi) - target));
  }
  const bool contains = hi >= 0.9 * target && lo <= 1.1 * target;
  const bool decreasing = gaps[1] < gaps[0] && gaps[2] < gaps[1];
  char buf[200];
  std::snprintf(buf, sizeof buf, "lambda=1e5 bracket [%.5f, %.5f] vs %.6f; midpoint gaps %.2e %.2e %.2e", lo, hi, target,
                gaps[0], gaps[1], gaps[2]);
  return {contains && decreasing, buf};
}

// 7. Strong coupling, p = 1.
Outcome strong_coupling_log() {
  const double lambda = 1e6;
  const AsymptoticLaw law = asymp_limit_ab(reduce_flux(0.5), 1.0);
  const Bracket b = bracket_wp({1.0, reduce_flux(0.5), lambda, bracket_length(lambda, 1.0)});
  const double lo = law.normalize(static_cast<double>(b.lower), lambda);
  const double hi = law.normalize(static_cast<double>(b.upper), lambda);
  const bool pass = hi >= 0.85 * 0.5 && lo <= 1.15 * 0.5;
  char buf[160];
  std::snprintf(buf, sizeof buf, "normalized bracket [%.5f, %.5f] meets [0.425, 0.575]: %s", lo, hi, pass ? "yes" : "no");
  return {pass, buf};
}

// 8. Weyl regime, p = 1/2.
Outcome weyl_regime() {
  const Flux f = reduce_flux(0.5);
  const AsymptoticLaw law = asymp_limit_ab(f, 0.5);
  const double target = law.target(RadialPotential::wp(0.5));
  std::vector<double> xs, gaps;
  std::string values;
  bool flagged = false;
  for (double lambda : {10.0, 100.0, 1000.0}) {
    const CountResult c = count_ab(RadialPotential::wp(0.5), f, lambda);
    flagged |= c.flags.any();
    const double n = law.normalize(static_cast<double>(c.total), lambda);
    xs.push_back(std::log10(lambda));
    gaps.push_back(std::abs(n - target));
    values += fmt(" %.4f", n);
  }
  // least-squares slope of the gap against log10(lambda)
  const double xm = (xs[0] + xs[1] + xs[2]) / 3, gm = (gaps[0] + gaps[1] + gaps[2]) / 3;
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += (xs[i] - xm) * (gaps[i] - gm);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  const double slope = num / den;
  const bool within = gaps[2] <= 0.25 * target;
  const bool trend = slope < 0.0 && gaps[2] < gaps[0];
  return {within && trend && !flagged, "lambda^-1 N at 10,1e2,1e3:" + values + fmt(" (target %.4f)", target) +
                                           fmt(", gap slope %.3f per decade", slope)};
}

// 9. Scaling of constants.
Outcome constant_scaling() {
  double worst_ratio = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const BoundParams bp = BoundParams::from_alpha(alpha);
    double lo = INFINITY, hi = 0.0;
    for (double phi : {0.5, 0.25, 0.1, 0.05, 0.01}) {
      const Flux f = reduce_flux(phi);
      const double v = c_strong_ab(f, bp) * std::pow(f.dist, 1.0 + alpha);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst_ratio = std::max(worst_ratio, hi / lo);
  }
  double worst_dev = 0.0;
  for (double q : {3.0, 4.0, 6.0}) {
    const Flux half = reduce_flux(0.5);
    const double ref = hardy_trial_quotient(half, q, cosine_bump_trial(half, q)) / std::pow(half.dist, 1 + 2 / q);
    for (double phi : {0.5, 0.25, 0.1, 0.05, 0.01}) {
      const Flux f = reduce_flux(phi);
      const double v = hardy_trial_quotient(f, q, cosine_bump_trial(f, q)) / std::pow(f.dist, 1 + 2 / q);
      worst_dev = std::max(worst_dev, std::abs(v / ref - 1.0));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max sup/inf %.3f (<= 10); trial-quotient deviation %.2e (<= 1e-12)", worst_ratio, worst_dev);
  return {worst_ratio <= 10.0 && worst_dev <= 1e-12, buf};
}

// 10. Saturation gap.
Outcome saturation_gap() {
  bool pass = true;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const BoundParams bp = BoundParams::from_alpha(alpha);
    const RadialPotential V = RadialPotential::wp(bp.p);
    const ExtReal s = strong_norm(V, bp);
    const ExtReal w = weak_norm(V, bp);
    pass &= s.is_infinite() && w.is_finite();
    if (w.is_finite()) worst = std::max(worst, std::abs(w.value() - 2 * pi));
  }
  pass &= worst <= 1e-10;
  return {pass, fmt("strong norm = inf for p = 1+alpha/2; max |weak - 2 pi| = %.2e", worst)};
}

// 11. Determinism of the CLI.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "clr2d_acceptance";
  fs::create_directories(dir);
  int runs = 0, differ = 0;
  std::string failure;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& entry : fs::directory_iterator(CLR2D_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto cfg = cli::parse_config(ss.str());
    if (!cfg.command) continue;
    for (const char* format : {"csv", "json"}) {
      std::string outputs[2];
      int codes[2];
      for (int k = 0; k < 2; ++k) {
        const fs::path out = dir / (entry.path().stem().string() + "_" + std::to_string(k) + "." + format);
        const std::string cmd = std::string(CLR2D_BIN) + " " + cli::to_string(*cfg.command) + " --config " +
                                entry.path().string() + " --out " + out.string() + " --format " + format +
                                " --workers " + (k == 0 ? "1" : "2") + " 2>/dev/null";
        codes[k] = std::system(cmd.c_str());
        outputs[k] = slurp(out);
      }
      ++runs;
      if (outputs[0] != outputs[1] || outputs[0].empty() || codes[0] != codes[1] || codes[0] != 0) {
        ++differ;
        if (failure.empty()) failure = "; first failure " + entry.path().filename().string() + " (" + format + ")";
      }
    }
  }
  fs::remove_all(dir);
  return {differ == 0 && runs > 0,
          std::to_string(runs - differ) + "/" + std::to_string(runs) + " config x format reruns byte-identical" + failure};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d  %-34s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "constant closed forms", constants_closed_forms);
  report(2, "oracle equivalence", oracle_equivalence);

  BatteryTally battery;
  report(3, "strong CLR property suite", [&] {
    battery = run_battery();
    return Outcome{battery.strong_fail == 0, std::to_string(battery.rows) + " rows, " + std::to_string(battery.strong_fail) +
                                                  " strong violations, " + std::to_string(battery.skipped) + " skipped"};
  });
  report(4, "weak CLR property suite", [&] {
    int order_fail = 0, grid = 0;
    for (double phi : {0.5, 0.3, 0.25, 0.1, 0.05, 0.01}) {
      for (double alpha : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const Flux f = reduce_flux(phi);
        const BoundParams bp = BoundParams::from_alpha(alpha);
        ++grid;
        order_fail += c_weak_lower_ab(f, bp) <= c_weak_upper_ab(f, bp).value ? 0 : 1;
      }
    }
    for (double alpha : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      const BoundParams bp = BoundParams::from_alpha(alpha);
      ++grid;
      order_fail += c_weak_lower_anti(bp) <= c_weak_upper_anti(bp).value ? 0 : 1;
    }
    return Outcome{battery.weak_fail == 0 && order_fail == 0 && battery.rows > 0,
                   std::to_string(battery.rows) + " rows, " + std::to_string(battery.weak_fail) + " weak violations; lower<=upper on " +
                       std::to_string(grid - order_fail) + "/" + std::to_string(grid) + " grid points"};
  });
  report(5, "bracket containment", bracket_containment);
  report(6, "strong coupling p>1", strong_coupling_power);
  report(7, "strong coupling p=1", strong_coupling_log);
  report(8, "Weyl regime p<1", weyl_regime);
  report(9, "scaling of constants", constant_scaling);
  report(10, "saturation gap", saturation_gap);
  report(11, "determinism", determinism);

  std::printf("%d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
