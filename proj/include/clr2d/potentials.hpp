#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

#include "clr2d/numerics.hpp"

namespace clr2d {

// ---------------------------------------------------------------------------
// Flux
// ---------------------------------------------------------------------------

/// A non-integer Aharonov-Bohm flux with its reduction to (0, 1/2].
struct Flux {
  double raw;
  double reduced;  ///< representative in (0, 1/2]
  double dist;     ///< d(phi) = min_k |phi - k|; equals `reduced`
};

/// Rejects fluxes within kMinFluxDistance of an integer ("trivial gauge").
Flux reduce_flux(double phi);

// ---------------------------------------------------------------------------
// Exponent bookkeeping
// ---------------------------------------------------------------------------

/// Weight exponent alpha with p = 1 + alpha/2 and q = 2 + 4/alpha, so that
/// 1/p + 2/q = 1.
struct BoundParams {
  double alpha;
  double p;
  double q;

  static BoundParams from_alpha(double alpha);
  static BoundParams from_p(double p);
  static BoundParams from_q(double q);
};

// ---------------------------------------------------------------------------
// Radial potential families
// ---------------------------------------------------------------------------

/// lambda * W_p with W_p(r) = r^{-2} (ln r)^{-1/p} for r > e and 0 otherwise.
struct LongRangeWp {
  double p;
  double lambda;
};

/// V(r) = v r^{-2} on 1 <= r <= R, zero elsewhere.
struct InvSquareWell {
  double v;
  double R;
};

/// Piecewise-linear samples of the log-coordinate potential t -> e^{2t} V(e^t)
/// on a strictly increasing knot vector, zero at both ends and outside.
struct SampledLog {
  Eigen::VectorXd t;
  Eigen::VectorXd values;
};

using RadialFamily = std::variant<LongRangeWp, InvSquareWell, SampledLog>;

/// An immutable, radial, bounded, nonnegative potential vanishing near r = 0.
class RadialPotential {
 public:
  explicit RadialPotential(RadialFamily family);

  static RadialPotential wp(double p, double lambda = 1.0) { return RadialPotential(LongRangeWp{p, lambda}); }
  static RadialPotential inv_square_well(double v, double R) { return RadialPotential(InvSquareWell{v, R}); }
  static RadialPotential sampled(Eigen::VectorXd t, Eigen::VectorXd values) {
    return RadialPotential(SampledLog{std::move(t), std::move(values)});
  }

  [[nodiscard]] const RadialFamily& family() const { return family_; }

  /// V(r) for r > 0.
  [[nodiscard]] double operator()(double r) const;

  [[nodiscard]] bool is_zero() const;

 private:
  RadialFamily family_;
};

// ---------------------------------------------------------------------------
// Log-coordinate potentials
// ---------------------------------------------------------------------------

/// Which radius t = 0 refers to: r = e^t, or the shifted r = e^{t+1} used for W_p.
enum class LogConvention { Natural, ShiftedByE };

/// t -> c on [t0, t1].
struct LogBox {
  double c;
  double t0;
  double t1;
};

/// t -> lambda (t + 1)^{-1/p} for t > 0.
struct LogTail {
  double lambda;
  double p;
};

/// Piecewise-linear in t, compact support.
struct LogLinear {
  Eigen::VectorXd t;
  Eigen::VectorXd values;
};

/// An evaluable log-coordinate potential t -> V~(t) >= 0.
///
/// Jumps are allowed only at breakpoints(); value_left/value_right give the
/// one-sided limits there. The convention records the reference radius.
class LogPotential {
 public:
  using Shape = std::variant<LogBox, LogTail, LogLinear>;

  LogPotential(Shape shape, LogConvention convention);

  static LogPotential box(double c, double t0, double t1) {
    return {LogBox{c, t0, t1}, LogConvention::Natural};
  }

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] LogConvention convention() const { return convention_; }

  /// ln r at t = 0.
  [[nodiscard]] double log_radius_offset() const { return convention_ == LogConvention::ShiftedByE ? 1.0 : 0.0; }

  [[nodiscard]] double operator()(double t) const { return value(t); }
  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double value_left(double t) const;
  [[nodiscard]] double value_right(double t) const;

  /// Left end of the support; V~ vanishes identically below it.
  [[nodiscard]] double support_begin() const;
  /// Right end of the support; +inf for the slowly decaying tail.
  [[nodiscard]] double support_end() const;
  [[nodiscard]] bool compact() const;

  /// Points where V~ or its derivative may jump, sorted.
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] double sup() const;

  /// Integral of V~^P dt over R (P > 0).
  [[nodiscard]] ExtReal integral_pow(double P) const;
  [[nodiscard]] ExtReal integral() const { return integral_pow(1.0); }

  /// |{t : V~(t) > tau}| for tau > 0.
  [[nodiscard]] double level_measure(double tau) const;
  /// |{t : V~(t) >= tau}|, the left limit of level_measure at tau.
  [[nodiscard]] double level_measure_geq(double tau) const;

  /// Smallest t after which V~ is nonincreasing and <= level.
  [[nodiscard]] double tail_start(double level) const;

  /// Integration horizon for a channel with threshold mu^2.
  [[nodiscard]] double horizon(double mu) const;

  [[nodiscard]] LogPotential scaled(double c) const;

  [[nodiscard]] bool is_zero() const { return sup() == 0.0; }

 private:
  Shape shape_;
  LogConvention convention_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// V~(t) = e^{2t} V(e^t); W_p uses the shifted r = e^{t+1} and becomes
/// lambda (t+1)^{-1/p} on t > 0.
LogPotential log_transform(const RadialPotential& V);

/// Integral of V_+^{1+alpha/2} |x|^alpha dx = 2 pi Integral V~^p dt.
ExtReal strong_norm(const RadialPotential& V, const BoundParams& params);

/// sup_{tau>0} tau^{1+alpha/2} Integral_{|x|^2 V(x) > tau} dx / |x|^2.
ExtReal weak_norm(const RadialPotential& V, const BoundParams& params);

/// Integral of V_+ dx over R^2.
ExtReal integral_V(const RadialPotential& V);

/// Pointwise multiplication by lambda >= 0.
RadialPotential scale(const RadialPotential& V, double lambda);

}  // namespace clr2d
