#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace clr2d {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical procedure cannot certify its own result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonnegative extended real: either a finite value or the +infinity marker.
///
/// Divergent norms are meaningful outcomes here, so infinity is carried as a
/// flag and never as a floating-point inf inside arithmetic.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(v)) throw DomainError("ExtReal: finite value required, use ExtReal::infinity()");
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }

  [[nodiscard]] double value() const {
    if (infinite_) throw DomainError("ExtReal: value() of the infinity marker");
    return value_;
  }

  /// Multiplication by a finite nonnegative constant; 0 * inf is taken as 0.
  [[nodiscard]] ExtReal scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("ExtReal::scaled: factor must be finite and >= 0");
    if (infinite_) return c == 0.0 ? ExtReal(0.0) : infinity();
    return ExtReal(value_ * c);
  }

  /// x <= *this, with every finite x below the marker.
  [[nodiscard]] bool bounds(double x) const { return infinite_ || x <= value_; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline std::string to_string(const ExtReal& x) {
  if (x.is_infinite()) return "inf";
  return std::to_string(x.value());
}

/// Visitor built from lambdas, for std::visit.
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

namespace numerics {

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

struct MinimizeResult {
  double x;
  double fx;
};

/// Golden-section minimization on [a, b]; assumes f unimodal there.
MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                       double xtol = 1e-10, int max_iter = 200);

/// Golden-section maximization on [a, b].
MinimizeResult golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                       double xtol = 1e-10, int max_iter = 200);

}  // namespace numerics
}  // namespace clr2d
