#include "clr2d/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clr2d/specfun.hpp"

namespace clr2d {

namespace {

constexpr double kTwoPi = 2.0 * numerics::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_knots(const Eigen::VectorXd& t, const Eigen::VectorXd& values) {
  if (t.size() != values.size()) throw DomainError("sampled potential: knot and value vectors differ in length");
  if (t.size() < 2) throw DomainError("sampled potential: at least two knots required");
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(values[i])) throw DomainError("sampled potential: non-finite sample");
    if (values[i] < 0.0) throw DomainError("sampled potential: samples must be nonnegative");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("sampled potential: knots must be strictly increasing");
  }
  if (values[0] != 0.0 || values[values.size() - 1] != 0.0) {
    throw DomainError("sampled potential: first and last samples must be zero (compact support)");
  }
}

double interpolate(const Eigen::VectorXd& t, const Eigen::VectorXd& v, double x) {
  const Eigen::Index n = t.size();
  if (x <= t[0] || x >= t[n - 1]) return 0.0;
  const auto* begin = t.data();
  const auto* it = std::upper_bound(begin, begin + n, x);
  const Eigen::Index i = (it - begin) - 1;
  const double w = (x - t[i]) / (t[i + 1] - t[i]);
  return (1.0 - w) * v[i] + w * v[i + 1];
}

// Integral over [0, 1] of (y0 + (y1 - y0) s)^P ds.
double segment_power_mean(double y0, double y1, double P) {
  const double dy = y1 - y0;
  const double scale = std::max(y0, y1);
  if (scale == 0.0) return 0.0;
  if (std::abs(dy) <= 1e-9 * scale) return std::pow(0.5 * (y0 + y1), P);
  return (std::pow(y1, P + 1.0) - std::pow(y0, P + 1.0)) / ((P + 1.0) * dy);
}

// Measure of {s in [0, h] : linear y0 -> y1 exceeds tau}; `inclusive` selects >=.
double segment_level(double y0, double y1, double h, double tau, bool inclusive) {
  auto above = [&](double y) { return inclusive ? y >= tau : y > tau; };
  const bool a0 = above(y0);
  const bool a1 = above(y1);
  if (a0 && a1) return h;
  if (!a0 && !a1) return 0.0;
  const double s = (tau - y0) / (y1 - y0);  // crossing in (0, 1)
  return a1 ? h * (1.0 - s) : h * s;
}

}  // namespace

// ---------------------------------------------------------------------------

Flux reduce_flux(double phi) {
  if (!std::isfinite(phi)) throw DomainError("flux must be finite");
  const double dist = std::abs(phi - std::round(phi));
  if (dist < kMinFluxDistance) {
    throw DomainError("flux " + std::to_string(phi) +
                      " is (within 1e-9 of) an integer: trivial gauge, the operator is unitarily equivalent to the "
                      "flux-free Laplacian");
  }
  return Flux{phi, dist, dist};
}

BoundParams BoundParams::from_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 0, got " + std::to_string(alpha));
  return BoundParams{alpha, 1.0 + alpha / 2.0, 2.0 + 4.0 / alpha};
}

BoundParams BoundParams::from_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must be > 1, got " + std::to_string(p));
  return from_alpha(2.0 * (p - 1.0));
}

BoundParams BoundParams::from_q(double q) {
  if (!(q > 2.0) || !std::isfinite(q)) throw DomainError("q must be > 2, got " + std::to_string(q));
  return from_alpha(4.0 / (q - 2.0));
}

// ---------------------------------------------------------------------------

RadialPotential::RadialPotential(RadialFamily family) : family_(std::move(family)) {
  std::visit(Overloaded{
                 [](const LongRangeWp& w) {
                   if (!(w.p > 0.0) || !std::isfinite(w.p)) throw DomainError("W_p: p must be > 0");
                   if (!(w.lambda >= 0.0) || !std::isfinite(w.lambda)) throw DomainError("W_p: lambda must be >= 0");
                 },
                 [](const InvSquareWell& w) {
                   if (!(w.v >= 0.0) || !std::isfinite(w.v)) throw DomainError("inverse-square well: v must be >= 0");
                   if (!(w.R > 1.0) || !std::isfinite(w.R)) throw DomainError("inverse-square well: R must be > 1");
                 },
                 [](const SampledLog& s) { validate_knots(s.t, s.values); },
             },
             family_);
}

double RadialPotential::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("radial potential evaluated at r <= 0");
  return std::visit(Overloaded{
                        [r](const LongRangeWp& w) {
                          return r > std::exp(1.0) ? w.lambda / (r * r) * std::pow(std::log(r), -1.0 / w.p) : 0.0;
                        },
                        [r](const InvSquareWell& w) { return (r >= 1.0 && r <= w.R) ? w.v / (r * r) : 0.0; },
                        [r](const SampledLog& s) {
                          const double t = std::log(r);
                          return interpolate(s.t, s.values, t) * std::exp(-2.0 * t);
                        },
                    },
                    family_);
}

bool RadialPotential::is_zero() const { return log_transform(*this).is_zero(); }

// ---------------------------------------------------------------------------

LogPotential::LogPotential(Shape shape, LogConvention convention)
    : shape_(std::move(shape)), convention_(convention) {
  std::visit(Overloaded{
                 [](const LogBox& b) {
                   if (!(b.c >= 0.0) || !std::isfinite(b.c)) throw DomainError("box potential: height must be >= 0");
                   if (!(b.t1 > b.t0)) throw DomainError("box potential: empty support");
                 },
                 [](const LogTail& w) {
                   if (!(w.p > 0.0) || !(w.lambda >= 0.0)) throw DomainError("tail potential: bad parameters");
                 },
                 [](const LogLinear& s) { validate_knots(s.t, s.values); },
             },
             shape_);
}

double LogPotential::value(double t) const {
  return std::visit(Overloaded{
                        [t](const LogBox& b) { return (t >= b.t0 && t <= b.t1) ? b.c : 0.0; },
                        [t](const LogTail& w) { return t > 0.0 ? w.lambda * std::pow(t + 1.0, -1.0 / w.p) : 0.0; },
                        [t](const LogLinear& s) { return interpolate(s.t, s.values, t); },
                    },
                    shape_);
}

double LogPotential::value_left(double t) const {
  return std::visit(Overloaded{
                        [t](const LogBox& b) { return (t > b.t0 && t <= b.t1) ? b.c : 0.0; },
                        [t](const LogTail& w) { return t > 0.0 ? w.lambda * std::pow(t + 1.0, -1.0 / w.p) : 0.0; },
                        [t](const LogLinear& s) { return interpolate(s.t, s.values, t); },
                    },
                    shape_);
}

double LogPotential::value_right(double t) const {
  return std::visit(Overloaded{
                        [t](const LogBox& b) { return (t >= b.t0 && t < b.t1) ? b.c : 0.0; },
                        [t](const LogTail& w) { return t >= 0.0 ? w.lambda * std::pow(t + 1.0, -1.0 / w.p) : 0.0; },
                        [t](const LogLinear& s) { return interpolate(s.t, s.values, t); },
                    },
                    shape_);
}

double LogPotential::support_begin() const {
  return std::visit(Overloaded{
                        [](const LogBox& b) { return b.t0; },
                        [](const LogTail&) { return 0.0; },
                        [](const LogLinear& s) { return s.t[0]; },
                    },
                    shape_);
}

double LogPotential::support_end() const {
  return std::visit(Overloaded{
                        [](const LogBox& b) { return b.t1; },
                        [](const LogTail&) { return kInf; },
                        [](const LogLinear& s) { return s.t[s.t.size() - 1]; },
                    },
                    shape_);
}

bool LogPotential::compact() const { return std::isfinite(support_end()); }

std::vector<double> LogPotential::breakpoints() const {
  return std::visit(Overloaded{
                        [](const LogBox& b) { return std::vector<double>{b.t0, b.t1}; },
                        [](const LogTail&) { return std::vector<double>{0.0}; },
                        [](const LogLinear& s) { return std::vector<double>(s.t.data(), s.t.data() + s.t.size()); },
                    },
                    shape_);
}

double LogPotential::sup() const {
  return std::visit(Overloaded{
                        [](const LogBox& b) { return b.c; },
                        [](const LogTail& w) { return w.lambda; },
                        [](const LogLinear& s) { return s.values.maxCoeff(); },
                    },
                    shape_);
}

ExtReal LogPotential::integral_pow(double P) const {
  if (!(P > 0.0)) throw DomainError("integral_pow: exponent must be > 0");
  return std::visit(Overloaded{
                        [P](const LogBox& b) { return ExtReal(std::pow(b.c, P) * (b.t1 - b.t0)); },
                        [P](const LogTail& w) {
                          if (w.lambda == 0.0) return ExtReal(0.0);
                          // Integral_0^inf (t+1)^{-P/p} dt converges iff P/p > 1.
                          const double e = P / w.p;
                          if (e <= 1.0) return ExtReal::infinity();
                          return ExtReal(std::pow(w.lambda, P) / (e - 1.0));
                        },
                        [P](const LogLinear& s) {
                          double acc = 0.0;
                          for (Eigen::Index i = 0; i + 1 < s.t.size(); ++i) {
                            acc += (s.t[i + 1] - s.t[i]) * segment_power_mean(s.values[i], s.values[i + 1], P);
                          }
                          return ExtReal(acc);
                        },
                    },
                    shape_);
}

double LogPotential::level_measure(double tau) const {
  if (!(tau > 0.0)) throw DomainError("level_measure: level must be > 0");
  return std::visit(Overloaded{
                        [tau](const LogBox& b) { return b.c > tau ? b.t1 - b.t0 : 0.0; },
                        [tau](const LogTail& w) { return tau < w.lambda ? std::pow(w.lambda / tau, w.p) - 1.0 : 0.0; },
                        [tau](const LogLinear& s) {
                          double acc = 0.0;
                          for (Eigen::Index i = 0; i + 1 < s.t.size(); ++i) {
                            acc += segment_level(s.values[i], s.values[i + 1], s.t[i + 1] - s.t[i], tau, false);
                          }
                          return acc;
                        },
                    },
                    shape_);
}

double LogPotential::level_measure_geq(double tau) const {
  if (!(tau > 0.0)) throw DomainError("level_measure_geq: level must be > 0");
  return std::visit(Overloaded{
                        [tau](const LogBox& b) { return b.c >= tau ? b.t1 - b.t0 : 0.0; },
                        [tau](const LogTail& w) { return tau <= w.lambda ? std::pow(w.lambda / tau, w.p) - 1.0 : 0.0; },
                        [tau](const LogLinear& s) {
                          double acc = 0.0;
                          for (Eigen::Index i = 0; i + 1 < s.t.size(); ++i) {
                            acc += segment_level(s.values[i], s.values[i + 1], s.t[i + 1] - s.t[i], tau, true);
                          }
                          return acc;
                        },
                    },
                    shape_);
}

double LogPotential::tail_start(double level) const {
  return std::visit(Overloaded{
                        [level](const LogBox& b) { return b.c <= level ? b.t0 : b.t1; },
                        [level](const LogTail& w) {
                          if (w.lambda <= level) return 0.0;
                          if (level <= 0.0) return kInf;
                          return std::max(0.0, std::pow(w.lambda / level, w.p) - 1.0);
                        },
                        [level](const LogLinear& s) {
                          Eigen::Index i = s.t.size() - 1;
                          while (i > 0 && s.values[i - 1] >= s.values[i] && s.values[i - 1] <= level) --i;
                          return s.t[i];
                        },
                    },
                    shape_);
}

double LogPotential::horizon(double mu) const {
  return std::visit(Overloaded{
                        [](const LogBox& b) { return b.t1; },
                        [mu](const LogTail& w) {
                          if (w.lambda <= mu * mu) return 10.0;
                          return std::pow(w.lambda / (mu * mu), w.p) + 10.0;
                        },
                        [](const LogLinear& s) { return s.t[s.t.size() - 1]; },
                    },
                    shape_);
}

LogPotential LogPotential::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("scaled: factor must be >= 0");
  Shape out = std::visit(Overloaded{
                             [c](const LogBox& b) -> Shape { return LogBox{b.c * c, b.t0, b.t1}; },
                             [c](const LogTail& w) -> Shape { return LogTail{w.lambda * c, w.p}; },
                             [c](const LogLinear& s) -> Shape { return LogLinear{s.t, s.values * c}; },
                         },
                         shape_);
  return {std::move(out), convention_};
}

// ---------------------------------------------------------------------------

LogPotential log_transform(const RadialPotential& V) {
  return std::visit(Overloaded{
                        [](const LongRangeWp& w) {
                          return LogPotential(LogTail{w.lambda, w.p}, LogConvention::ShiftedByE);
                        },
                        [](const InvSquareWell& w) {
                          return LogPotential(LogBox{w.v, 0.0, std::log(w.R)}, LogConvention::Natural);
                        },
                        [](const SampledLog& s) {
                          return LogPotential(LogLinear{s.t, s.values}, LogConvention::Natural);
                        },
                    },
                    V.family());
}

ExtReal strong_norm(const RadialPotential& V, const BoundParams& params) {
  return log_transform(V).integral_pow(params.p).scaled(kTwoPi);
}

namespace {

// sup_{tau>0} tau^P |{V~ > tau}| for a general log potential, by a logarithmic
// tau-grid refined with golden section, plus the left limits at every knot.
double weak_sup_numeric(const LogPotential& pot, double P) {
  const double top = pot.sup();
  if (top == 0.0) return 0.0;
  auto f = [&](double tau) { return std::pow(tau, P) * pot.level_measure(tau); };

  constexpr int kGrid = 512;
  const double lo = std::log(1e-6 * top);
  const double hi = std::log(top);
  std::vector<double> taus(kGrid);
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    taus[i] = std::exp(lo + (hi - lo) * i / (kGrid - 1));
    const double fi = f(taus[i]);
    if (fi > best) {
      best = fi;
      best_i = i;
    }
  }
  const double a = taus[std::max(0, best_i - 1)];
  const double b = taus[std::min(kGrid - 1, best_i + 1)];
  best = std::max(best, numerics::golden_section_maximize(f, a, b, 1e-13).fx);

  for (double knot_value : pot.breakpoints()) {
    const double y = pot.value(knot_value);
    if (y > 0.0) best = std::max(best, std::pow(y, P) * pot.level_measure_geq(y));
  }
  return best;
}

}  // namespace

ExtReal weak_norm(const RadialPotential& V, const BoundParams& params) {
  const double P = params.p;
  const LogPotential pot = log_transform(V);
  return std::visit(Overloaded{
                        [&](const LogBox& b) { return ExtReal(kTwoPi * std::pow(b.c, P) * (b.t1 - b.t0)); },
                        [&](const LogTail& w) {
                          if (w.lambda == 0.0) return ExtReal(0.0);
                          // tau^P ((lambda/tau)^p - 1) on (0, lambda).
                          if (P < w.p * (1.0 - 1e-12)) return ExtReal::infinity();
                          if (P <= w.p * (1.0 + 1e-12)) return ExtReal(kTwoPi * std::pow(w.lambda, P));
                          const double ratio = (P - w.p) / P;
                          return ExtReal(kTwoPi * std::pow(w.lambda, P) * std::pow(ratio, P / w.p) * w.p / (P - w.p));
                        },
                        [&](const LogLinear&) { return ExtReal(kTwoPi * weak_sup_numeric(pot, P)); },
                    },
                    pot.shape());
}

ExtReal integral_V(const RadialPotential& V) { return log_transform(V).integral().scaled(kTwoPi); }

RadialPotential scale(const RadialPotential& V, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("scale: coupling must be >= 0");
  return std::visit(Overloaded{
                        [lambda](const LongRangeWp& w) { return RadialPotential(LongRangeWp{w.p, w.lambda * lambda}); },
                        [lambda](const InvSquareWell& w) { return RadialPotential(InvSquareWell{w.v * lambda, w.R}); },
                        [lambda](const SampledLog& s) { return RadialPotential(SampledLog{s.t, s.values * lambda}); },
                    },
                    V.family());
}

}  // namespace clr2d
