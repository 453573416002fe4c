#include "clr2d/bounds.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "clr2d/specfun.hpp"

namespace clr2d {

namespace {

using numerics::pi;

const double kPi32 = std::pow(pi, 1.5);

// Relative clipping of the beta interval away from its poles.
constexpr double kBetaClip = 1e-4;
constexpr int kCoarseGrid = 64;
constexpr int kFallbackGrid = 2001;

// log of max_{0<theta<1} (1-theta)^a theta^b, attained at theta = b/(a+b).
double log_theta_max(double a, double b) {
  const double sum = a + b;
  return a * std::log(a / sum) + b * std::log(b / sum);
}

// log of the beta-objective shared by both operators; `log_c_strong_beta` and
// `log_d` carry the operator-specific pieces.
double log_weak_objective(double alpha, double beta, double log_c_strong_beta, double log_d) {
  const double a = 1.0 + beta / 2.0;
  const double b = (alpha - beta) / 2.0;
  return (beta - alpha) * log_d + log_c_strong_beta + std::lgamma(2.0 + beta / 2.0) + std::lgamma(b) -
         std::lgamma(1.0 + alpha / 2.0) - log_theta_max(a, b);
}

WeakConstant minimize_over_beta(double alpha, double d, const std::function<double(double)>& log_objective) {
  const double lo = std::max(kBetaClip * alpha, 4e-6);
  const double hi = (1.0 - kBetaClip) * alpha;
  if (!(hi > lo)) throw DomainError("weak constant: alpha too small for the beta search");

  const auto golden = numerics::golden_section_minimize(log_objective, lo, hi, 1e-12);

  // Unimodality check against a coarse scan; a lower coarse value means the
  // golden-section bracket was wrong.
  double coarse_best = golden.fx;
  for (int i = 0; i < kCoarseGrid; ++i) {
    const double beta = lo + (hi - lo) * i / (kCoarseGrid - 1);
    coarse_best = std::min(coarse_best, log_objective(beta));
  }

  double beta = golden.x;
  double best = golden.fx;
  bool fallback = false;
  if (coarse_best < golden.fx - 1e-9) {
    fallback = true;
    for (int i = 0; i < kFallbackGrid; ++i) {
      const double b = lo + (hi - lo) * i / (kFallbackGrid - 1);
      const double f = log_objective(b);
      if (f < best) {
        best = f;
        beta = b;
      }
    }
  }
  const double theta = (alpha - beta) / (alpha + 2.0);
  return WeakConstant{std::exp(best), InterpolationParams{beta, theta, theta * d * d, fallback}};
}

}  // namespace

double green_diag(const Flux& flux, double p) {
  if (!(p > 1.0 + 1e-6)) {
    throw DomainError("green_diag: p must exceed 1 (mode sum diverges), got " + std::to_string(p));
  }
  return gamma(p - 0.5) / (4.0 * kPi32 * gamma(p)) * flux_sum(flux.reduced, 2.0 * p - 1.0);
}

double c_strong_ab(const Flux& flux, const BoundParams& params) { return green_diag(flux, params.p); }

double c_strong_anti(const BoundParams& params) {
  const double p = params.p;
  if (!(p > 1.0 + 1e-6)) throw DomainError("c_strong_anti: alpha too small");
  return gamma(p - 0.5) / (2.0 * kPi32 * gamma(p)) * riemann_zeta(2.0 * p - 1.0);
}

double weak_objective_ab(const Flux& flux, const BoundParams& params, double beta) {
  if (!(beta > 0.0 && beta < params.alpha)) throw DomainError("weak objective: beta must lie in (0, alpha)");
  const double log_c = std::log(c_strong_ab(flux, BoundParams::from_alpha(beta)));
  return std::exp(log_weak_objective(params.alpha, beta, log_c, std::log(flux.dist)));
}

double weak_objective_anti(const BoundParams& params, double beta) {
  if (!(beta > 0.0 && beta < params.alpha)) throw DomainError("weak objective: beta must lie in (0, alpha)");
  const double log_c = std::log(c_strong_anti(BoundParams::from_alpha(beta)));
  return std::exp(log_weak_objective(params.alpha, beta, log_c, 0.0));
}

WeakConstant c_weak_upper_ab(const Flux& flux, const BoundParams& params) {
  const double log_d = std::log(flux.dist);
  auto objective = [&](double beta) {
    const double log_c = std::log(c_strong_ab(flux, BoundParams::from_alpha(beta)));
    return log_weak_objective(params.alpha, beta, log_c, log_d);
  };
  return minimize_over_beta(params.alpha, flux.dist, objective);
}

double c_weak_lower_ab(const Flux& flux, const BoundParams& params) { return c_strong_ab(flux, params); }

WeakConstant c_weak_upper_anti(const BoundParams& params) {
  auto objective = [&](double beta) {
    const double log_c = std::log(c_strong_anti(BoundParams::from_alpha(beta)));
    return log_weak_objective(params.alpha, beta, log_c, 0.0);
  };
  return minimize_over_beta(params.alpha, 1.0, objective);
}

double c_weak_lower_anti(const BoundParams& params) { return c_strong_anti(params); }

// ---------------------------------------------------------------------------

double AsymptoticLaw::normalize(double count, double lambda) const {
  switch (regime) {
    case Regime::Power:
      return count / std::pow(lambda, p);
    case Regime::LogLinear:
      if (!(lambda > 1.0)) throw DomainError("log-linear normalization needs lambda > 1");
      return count / (lambda * std::log(lambda));
    case Regime::Weyl:
      return count / lambda;
  }
  return 0.0;
}

double AsymptoticLaw::target(const RadialPotential& V) const {
  if (regime != Regime::Weyl) return coefficient;
  const ExtReal total = integral_V(V);
  if (total.is_infinite()) throw DomainError("Weyl target: potential is not integrable");
  return coefficient * total.value();
}

const char* to_string(AsymptoticLaw::Regime r) {
  switch (r) {
    case AsymptoticLaw::Regime::Power:
      return "power";
    case AsymptoticLaw::Regime::LogLinear:
      return "loglinear";
    case AsymptoticLaw::Regime::Weyl:
      return "weyl";
  }
  return "?";
}

AsymptoticLaw asymp_limit_ab(const Flux& flux, double p) {
  if (!(p > 0.0)) throw DomainError("asymp_limit_ab: p must be > 0");
  if (std::abs(p - 1.0) <= 1e-12) return {AsymptoticLaw::Regime::LogLinear, 1.0, 0.5};
  if (p < 1.0) return {AsymptoticLaw::Regime::Weyl, p, 1.0 / (4.0 * pi)};
  const double c = gamma(p - 0.5) / (2.0 * std::sqrt(pi) * gamma(p)) * flux_sum(flux.reduced, 2.0 * p - 1.0);
  return {AsymptoticLaw::Regime::Power, p, c};
}

AsymptoticLaw asymp_limit_anti(double p) {
  if (std::abs(p - 1.0) <= 1e-12) return {AsymptoticLaw::Regime::LogLinear, 1.0, 0.5};
  if (!(p > 1.0)) throw DomainError("asymp_limit_anti: only p >= 1 is covered, got " + std::to_string(p));
  const double c = gamma(p - 0.5) / (std::sqrt(pi) * gamma(p)) * riemann_zeta(2.0 * p - 1.0);
  return {AsymptoticLaw::Regime::Power, p, c};
}

// ---------------------------------------------------------------------------

double hardy_sobolev_lower(const Flux& flux, double q) {
  const BoundParams params = BoundParams::from_q(q);
  return std::pow(c_strong_ab(flux, params), -2.0 / (params.alpha + 2.0));
}

TrialSpec cosine_bump_trial(double q, double ell, int n) {
  if (!(q > 2.0)) throw DomainError("trial: q must be > 2");
  if (!(ell > 0.0)) throw DomainError("trial: dilation must be > 0");
  // Integral_{-1}^{1} cos^q(pi t / 2) dt = (2/sqrt(pi)) Gamma((q+1)/2) / Gamma(q/2 + 1).
  const double cq = 2.0 / std::sqrt(pi) * gamma((q + 1.0) / 2.0) / gamma(q / 2.0 + 1.0);
  return TrialSpec{ell, n, pi * pi / 4.0, 1.0, cq};
}

TrialSpec cosine_bump_trial(const Flux& flux, double q) {
  return cosine_bump_trial(q, 1.0 / flux.dist, static_cast<int>(std::lround(flux.raw)));
}

double hardy_trial_quotient(const Flux& flux, double q, const TrialSpec& trial) {
  if (!(q > 2.0)) throw DomainError("hardy_trial_quotient: q must be > 2");
  if (!(trial.A > 0.0 && trial.B > 0.0 && trial.Cq > 0.0 && trial.ell > 0.0)) {
    throw DomainError("hardy_trial_quotient: trial integrals must be positive");
  }
  const double mu = trial.n - flux.raw;
  const double numerator = 2.0 * pi * (trial.A / trial.ell + mu * mu * trial.ell * trial.B);
  return numerator / std::pow(2.0 * pi * trial.ell * trial.Cq, 2.0 / q);
}

// ---------------------------------------------------------------------------

double c_strong(const Operator& op, const BoundParams& params) {
  if (const auto* ab = std::get_if<AharonovBohm>(&op)) return c_strong_ab(ab->flux, params);
  return c_strong_anti(params);
}

WeakConstant c_weak_upper(const Operator& op, const BoundParams& params) {
  if (const auto* ab = std::get_if<AharonovBohm>(&op)) return c_weak_upper_ab(ab->flux, params);
  return c_weak_upper_anti(params);
}

ExtReal rhs_strong(const RadialPotential& V, const Operator& op, const BoundParams& params) {
  return strong_norm(V, params).scaled(c_strong(op, params));
}

ExtReal rhs_weak(const RadialPotential& V, const Operator& op, const BoundParams& params) {
  return weak_norm(V, params).scaled(c_weak_upper(op, params).value);
}

}  // namespace clr2d
