#include <doctest.h>

#include <cmath>

#include "clr2d/bounds.hpp"
#include "clr2d/specfun.hpp"
#include "oracles.hpp"

using namespace clr2d;
using numerics::pi;

namespace {
const double kZeta3 = 1.2020569031595942;
const double kZeta5 = 1.0369277551433699;

// Minimum of the beta-objective over a uniform grid, as an independent check
// of the golden-section search.
double grid_minimum(const std::function<double(double)>& f, double lo, double hi, int n) {
  double best = f(lo);
  for (int i = 1; i < n; ++i) best = std::min(best, f(lo + (hi - lo) * i / (n - 1)));
  return best;
}
}  // namespace

TEST_CASE("strong constants") {
  const Flux half = reduce_flux(0.5);
  const BoundParams a2 = BoundParams::from_alpha(2.0);
  CHECK(c_strong_ab(half, a2) == doctest::Approx(7 * kZeta3 / (4 * pi)).epsilon(1e-12));
  CHECK(c_strong_ab(half, a2) == doctest::Approx(0.669611).epsilon(1e-4));
  CHECK(c_strong_ab(reduce_flux(1.5), a2) == c_strong_ab(half, a2));
  // direct-summation oracle for the mode sum
  CHECK(c_strong_ab(half, a2) ==
        doctest::Approx(clr2d::gamma(1.5) / (4 * std::pow(pi, 1.5)) * oracle::flux_sum_direct(0.5, 3.0)).epsilon(1e-11));

  CHECK(c_strong_anti(a2) == doctest::Approx(kZeta3 / (4 * pi)).epsilon(1e-12));
  CHECK(c_strong_anti(BoundParams::from_alpha(3.0)) == doctest::Approx(pi * pi / 135).epsilon(1e-12));
  CHECK(c_strong_anti(a2) / c_strong_ab(half, a2) == doctest::Approx(1.0 / 7).epsilon(1e-12));

  SUBCASE("small flux: d^2 c_strong -> 1/(2 pi^2) at alpha = 1") {
    CHECK(c_strong_ab(reduce_flux(1e-6), BoundParams::from_alpha(1.0)) * 1e-12 ==
          doctest::Approx(1.0 / (2 * pi * pi)).epsilon(1e-5));
  }
}

TEST_CASE("green diagonal") {
  const Flux half = reduce_flux(0.5);
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const BoundParams bp = BoundParams::from_alpha(alpha);
    CHECK(green_diag(half, bp.p) == c_strong_ab(half, bp));
  }
  CHECK(green_diag(half, 3.0) == doctest::Approx(93 * kZeta5 / (16 * pi)).epsilon(1e-12));
  CHECK(green_diag(half, 3.0) ==
        doctest::Approx(clr2d::gamma(2.5) / (4 * std::pow(pi, 1.5) * 2.0) * oracle::flux_sum_direct(0.5, 5.0)).epsilon(1e-11));
  CHECK_THROWS_AS(green_diag(half, 1.0), DomainError);
  CHECK_THROWS_AS(green_diag(half, 1.0 + 1e-7), DomainError);
}

TEST_CASE("weak constants") {
  for (double phi : {0.5, 0.3, 0.1, 0.05, 0.01}) {
    for (double alpha : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      const Flux f = reduce_flux(phi);
      const BoundParams bp = BoundParams::from_alpha(alpha);
      const WeakConstant w = c_weak_upper_ab(f, bp);
      CAPTURE(phi);
      CAPTURE(alpha);
      CHECK(std::isfinite(w.value));
      CHECK(c_weak_lower_ab(f, bp) <= w.value);
      CHECK(w.witness.beta > 0.0);
      CHECK(w.witness.beta < alpha);
      CHECK(w.witness.theta == doctest::Approx((alpha - w.witness.beta) / (alpha + 2)).epsilon(1e-15));
      CHECK(w.witness.s == doctest::Approx(w.witness.theta * f.dist * f.dist).epsilon(1e-15));
      CHECK(weak_objective_ab(f, bp, w.witness.beta) == doctest::Approx(w.value).epsilon(1e-12));
      const double lo = std::max(1e-4 * alpha, 4e-6), hi = (1 - 1e-4) * alpha;
      const double grid = grid_minimum([&](double b) { return weak_objective_ab(f, bp, b); }, lo, hi, 4001);
      CHECK(w.value <= grid * (1 + 1e-9));
      CHECK(w.value >= grid * (1 - 1e-3));
    }
  }
  SUBCASE("antisymmetric") {
    const WeakConstant w = c_weak_upper_anti(BoundParams::from_alpha(2.0));
    CHECK(w.value >= kZeta3 / (4 * pi));
    CHECK(c_weak_lower_anti(BoundParams::from_alpha(2.0)) == c_strong_anti(BoundParams::from_alpha(2.0)));
    CHECK(w.witness.s == doctest::Approx(w.witness.theta));
    double prev = c_weak_upper_anti(BoundParams::from_alpha(0.5)).value;
    for (double alpha = 0.5; alpha <= 4.0; alpha += 0.25) {
      const double v = c_weak_upper_anti(BoundParams::from_alpha(alpha)).value;
      const double v2 = c_weak_upper_anti(BoundParams::from_alpha(alpha + 1e-8)).value;
      CHECK(std::abs(v2 - v) <= 1e-6 * v);
      CHECK(std::isfinite(prev));
      prev = v;
    }
  }
  SUBCASE("objective poles at both ends") {
    const Flux f = reduce_flux(0.5);
    const BoundParams bp = BoundParams::from_alpha(2.0);
    CHECK(weak_objective_ab(f, bp, 1.999999) > 100 * weak_objective_ab(f, bp, 1.0));
    CHECK(weak_objective_ab(f, bp, 1e-5) > 100 * weak_objective_ab(f, bp, 1.0));
    CHECK_THROWS_AS(weak_objective_ab(f, bp, 2.0), DomainError);
  }
}

TEST_CASE("scaling of the strong constant in the flux") {
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const BoundParams bp = BoundParams::from_alpha(alpha);
    double lo = INFINITY, hi = 0.0;
    for (double phi : {0.5, 0.25, 0.1, 0.05, 0.01}) {
      const Flux f = reduce_flux(phi);
      const double scaled = c_strong_ab(f, bp) * std::pow(f.dist, 1 + alpha);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo <= 10.0);
  }
}

TEST_CASE("asymptotic laws") {
  const AsymptoticLaw l2 = asymp_limit_ab(reduce_flux(0.5), 2.0);
  CHECK(l2.regime == AsymptoticLaw::Regime::Power);
  CHECK(l2.coefficient == doctest::Approx(3.5 * kZeta3).epsilon(1e-12));
  CHECK(l2.normalize(4e6, 1e3) == doctest::Approx(4.0));

  const AsymptoticLaw l1 = asymp_limit_ab(reduce_flux(0.3), 1.0);
  CHECK(l1.regime == AsymptoticLaw::Regime::LogLinear);
  CHECK(l1.coefficient == 0.5);

  const AsymptoticLaw lh = asymp_limit_ab(reduce_flux(0.3), 0.5);
  CHECK(lh.regime == AsymptoticLaw::Regime::Weyl);
  CHECK(lh.target(RadialPotential::wp(0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS((void)lh.target(RadialPotential::wp(1.0)), DomainError);

  CHECK(asymp_limit_anti(2.0).coefficient == doctest::Approx(0.5 * kZeta3).epsilon(1e-12));
  CHECK(asymp_limit_anti(1.0).regime == AsymptoticLaw::Regime::LogLinear);
  CHECK(asymp_limit_anti(2.0).coefficient / l2.coefficient == doctest::Approx(1.0 / 7).epsilon(1e-12));
  CHECK_THROWS_AS(asymp_limit_anti(0.5), DomainError);
}

TEST_CASE("Hardy-Sobolev bounds") {
  const Flux half = reduce_flux(0.5);
  CHECK(hardy_sobolev_lower(half, 4.0) == doctest::Approx(std::pow(7 * kZeta3 / (4 * pi), -0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(hardy_sobolev_lower(half, 2.0), DomainError);

  SUBCASE("cosine bump integrals against quadrature") {
    const TrialSpec t = cosine_bump_trial(4.0, 1.0, 0);
    auto phi = [](double x) { return std::cos(pi * x / 2); };
    auto dphi = [](double x) { return -pi / 2 * std::sin(pi * x / 2); };
    CHECK(t.A == doctest::Approx(numerics::adaptive_simpson([&](double x) { return dphi(x) * dphi(x); }, -1, 1, 1e-13)).epsilon(1e-10));
    CHECK(t.B == doctest::Approx(numerics::adaptive_simpson([&](double x) { return phi(x) * phi(x); }, -1, 1, 1e-13)).epsilon(1e-10));
    CHECK(t.Cq == doctest::Approx(0.75).epsilon(1e-12));
    for (double q : {2.5, 3.0, 6.0}) {
      const double c = numerics::adaptive_simpson([&](double x) { return std::pow(phi(x), q); }, -1, 1, 1e-13);
      CHECK(cosine_bump_trial(q, 1.0, 0).Cq == doctest::Approx(c).epsilon(1e-9));
    }
  }
  SUBCASE("quotient with l = 1/d scales exactly like d^{1+2/q}") {
    for (double q : {3.0, 4.0, 8.0}) {
      const double ref = hardy_trial_quotient(half, q, cosine_bump_trial(half, q)) / std::pow(0.5, 1 + 2 / q);
      for (double phi : {0.05, 0.1, 0.3, 1.7}) {
        const Flux f = reduce_flux(phi);
        const double v = hardy_trial_quotient(f, q, cosine_bump_trial(f, q)) / std::pow(f.dist, 1 + 2 / q);
        CHECK(v == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
  SUBCASE("lower bound below the trial upper bound, increasing in d") {
    double prev = 0.0;
    for (double phi : {0.05, 0.1, 0.2, 0.3, 0.5}) {
      const Flux f = reduce_flux(phi);
      const double lower = hardy_sobolev_lower(f, 4.0);
      CHECK(lower <= hardy_trial_quotient(f, 4.0, cosine_bump_trial(f, 4.0)));
      CHECK(lower > prev);
      prev = lower;
    }
  }
}

TEST_CASE("right-hand sides") {
  const auto well = RadialPotential::inv_square_well(4.0, std::exp(pi));
  const Operator ab = AharonovBohm{reduce_flux(0.5)};
  const BoundParams a2 = BoundParams::from_alpha(2.0);
  CHECK(rhs_strong(well, ab, a2).value() == doctest::Approx(211.47).epsilon(1e-4));
  CHECK(rhs_strong(well, Antisymmetric{}, a2).value() == doctest::Approx(30.21).epsilon(1e-3));
  CHECK(rhs_strong(RadialPotential::wp(2.0), ab, a2).is_infinite());
  CHECK(rhs_weak(RadialPotential::wp(2.0), ab, a2).is_finite());
  CHECK(rhs_strong(RadialPotential::wp(2.0, 0.0), ab, a2).value() == 0.0);
}
