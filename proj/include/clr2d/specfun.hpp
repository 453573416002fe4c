#pragma once

// Special functions behind every explicit constant: Gamma, Riemann and
// Hurwitz zeta, and the flux sums sum_{n in Z} |n - phi|^{-s}.
//
// All functions are pure and reentrant.

namespace clr2d {

/// Smallest admissible distance of a flux to the integers.
inline constexpr double kMinFluxDistance = 1e-9;

/// Gamma(x) for x > 0.
double gamma(double x);

/// Riemann zeta(s) for s > 1.
double riemann_zeta(double s);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s} for s > 1, a > 0.
///
/// Euler-Maclaurin: explicit head of 32 terms, integral tail, and Bernoulli
/// corrections through B_6. Relative error below 1e-12 for s in (1, 10],
/// a in (0, 2].
double hurwitz_zeta(double s, double a);

struct FluxSumQuery {
  double phi;
  double s;
};

/// sum_{n in Z} |n - phi|^{-s}; periodic and even in phi.
double flux_sum(const FluxSumQuery& q);

inline double flux_sum(double phi, double s) { return flux_sum(FluxSumQuery{phi, s}); }

}  // namespace clr2d
