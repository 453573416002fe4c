#include "clr2d/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

#include "clr2d/numerics.hpp"

namespace clr2d {

namespace {

constexpr int kHeadTerms = 32;

// B_{2j} / (2j)! for j = 1, 2, 3.
constexpr std::array<double, 3> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
};

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("gamma: argument must be > 0, got " + std::to_string(x));
  return std::tgamma(x);
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("hurwitz_zeta: s must be > 1, got " + std::to_string(s));
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("hurwitz_zeta: a must be > 0, got " + std::to_string(a));

  double head = 0.0;
  for (int k = kHeadTerms - 1; k >= 0; --k) head += std::pow(k + a, -s);

  const double x = kHeadTerms + a;
  const double xs = std::pow(x, -s);
  double tail = x * xs / (s - 1.0) + 0.5 * xs;

  // d^{2j-1}/dx^{2j-1} x^{-s} contributes s (s+1) ... (s+2j-2) x^{-s-2j+1}.
  double rising = s;
  double power = xs / x;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    tail += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= x * x;
  }
  return head + tail;
}

double riemann_zeta(double s) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("riemann_zeta: s must be > 1, got " + std::to_string(s));
  return hurwitz_zeta(s, 1.0);
}

double flux_sum(const FluxSumQuery& q) {
  if (!(q.s > 1.0)) throw DomainError("flux_sum: exponent must be > 1, got " + std::to_string(q.s));
  if (!std::isfinite(q.phi)) throw DomainError("flux_sum: flux must be finite");
  const double frac = q.phi - std::floor(q.phi);
  const double a = std::min(frac, 1.0 - frac);
  if (!(a >= kMinFluxDistance)) {
    throw DomainError("flux_sum: flux " + std::to_string(q.phi) + " is within 1e-9 of an integer");
  }
  return hurwitz_zeta(q.s, a) + hurwitz_zeta(q.s, 1.0 - a);
}

}  // namespace clr2d
