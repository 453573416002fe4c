#include "clr2d/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace clr2d {

namespace {

using numerics::pi;

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kErr = {71.0 / 57600,     0.0,          -71.0 / 16695, 71.0 / 1920,
                                        -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

constexpr double kScaleFloor = 1e-4;

// Maps the Prufer angle for scale k_old to scale k_new; tan(theta) scales by
// k_new / k_old and every interval [m pi, (m+1) pi) is preserved.
double rescale_phase(double theta, double ratio) {
  const double m = std::floor(theta / pi);
  const double f = theta - m * pi;
  return m * pi + std::atan2(ratio * std::sin(f), std::cos(f));
}

// Integrates the scaled Prufer phase theta' = k cos^2 + ((V~ - mu^2)/k) sin^2,
// with u = rho sin(theta) / k and u' = rho cos(theta). The scale k follows
// sqrt|V~ - mu^2| and is refreshed at every step.
class PhaseIntegrator {
 public:
  PhaseIntegrator(const LogPotential& pot, double mu, double tol) : pot_(pot), mu2_(mu * mu), tol_(tol) {}

  void start(double t, double u, double du) {
    t_ = t;
    k_ = scale_for(pot_.value_right(t) - mu2_);
    theta_ = std::atan2(k_ * u, du);
    if (theta_ < 0.0) theta_ += pi;  // u >= 0 at the start, keep theta in [0, pi)
  }

  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] double theta() const { return theta_; }

  /// u'/u, or +inf at a node.
  [[nodiscard]] double log_derivative() const {
    const double s = std::sin(theta_);
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return k_ * std::cos(theta_) / s;
  }

  /// Integrates to `target`; V~ must be smooth on (t, target).
  void advance(double target) {
    const double a = t_;
    const double b = target;
    while (t_ < b) {
      const double q = potential_on(t_, a, b) - mu2_;
      const double k_new = scale_for(q);
      if (k_new != k_) {
        theta_ = rescale_phase(theta_, k_new / k_);
        k_ = k_new;
      }
      const double rate = std::max(k_, std::abs(q) / k_);
      const double h_cap = 1.0 / rate;
      if (h_ <= 0.0) h_ = 0.1 * h_cap;
      double h = std::min({h_, h_cap, b - t_});
      bool last = (h == b - t_);
      for (;;) {
        const auto [theta_new, err] = dp_step(h, a, b);
        if (err <= tol_ || h <= 1e-14 * (1.0 + std::abs(t_))) {
          theta_ = theta_new;
          t_ = last ? b : t_ + h;
          const double grow = err > 0.0 ? 0.9 * std::pow(tol_ / err, 0.2) : 5.0;
          h_ = h * std::clamp(grow, 0.2, 5.0);
          break;
        }
        h *= std::clamp(0.9 * std::pow(tol_ / err, 0.2), 0.1, 0.5);
        last = false;
      }
    }
  }

 private:
  static double scale_for(double q) { return std::max(std::sqrt(std::abs(q)), kScaleFloor); }

  // V~ inside [a, b], taking one-sided limits at the ends.
  double potential_on(double t, double a, double b) const {
    if (t <= a) return pot_.value_right(a);
    if (t >= b) return pot_.value_left(b);
    return pot_.value(t);
  }

  double rhs(double t, double theta, double a, double b) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return k_ * c * c + (potential_on(t, a, b) - mu2_) / k_ * s * s;
  }

  std::pair<double, double> dp_step(double h, double a, double b) const {
    std::array<double, 7> f{};
    for (int i = 0; i < 7; ++i) {
      double y = theta_;
      for (int j = 0; j < i; ++j) y += h * kA[i][j] * f[j];
      f[i] = rhs(t_ + kC[i] * h, y, a, b);
    }
    double y5 = theta_;
    double err = 0.0;
    for (int i = 0; i < 7; ++i) {
      y5 += h * kA[6][i < 6 ? i : 5] * (i < 6 ? f[i] : 0.0);
      err += h * kErr[i] * f[i];
    }
    return {y5, std::abs(err)};
  }

  const LogPotential& pot_;
  double mu2_;
  double tol_;
  double t_ = 0.0;
  double theta_ = 0.0;
  double k_ = 1.0;
  double h_ = 0.0;
};

void validate(const ModeProblem& prob, const CountSettings& cfg) {
  if (!(prob.mu >= 0.0) || !std::isfinite(prob.mu)) throw DomainError("mode problem: mu must be finite and >= 0");
  if (std::holds_alternative<WholeLine>(prob.domain) && !(prob.mu > 0.0)) {
    throw DomainError("mode problem: mu must be > 0 on the whole line (threshold at 0)");
  }
  if (!(cfg.rtol > 1e-12 && cfg.rtol < 1e-4)) throw DomainError("count settings: rtol must lie in (1e-12, 1e-4)");
  if (!(cfg.resonance_eps >= 0.0)) throw DomainError("count settings: resonance_eps must be >= 0");
  if (!std::isfinite(prob.pot.sup())) throw DomainError("mode problem: potential is not finite");
}

}  // namespace

ModeCount count_mode(const ModeProblem& prob, const CountSettings& cfg) {
  validate(prob, cfg);
  const double mu = prob.mu;
  const LogPotential& pot = prob.pot;
  ModeFlags flags;

  PhaseIntegrator ode(pot, mu, cfg.rtol);
  double t_start = 0.0;
  if (const auto* half = std::get_if<HalfLine>(&prob.domain)) {
    t_start = half->t0;
    if (half->bc == Boundary::Dirichlet) {
      ode.start(t_start, 0.0, 1.0);
    } else {
      ode.start(t_start, 1.0, 0.0);
    }
  } else {
    // V~ vanishes left of the support, so (1, mu) is exactly the e^{mu t} branch.
    t_start = pot.support_begin() - std::max(5.0 / mu, 2.0);
    ode.start(t_start, 1.0, mu);
  }
  const double theta_start = ode.theta();

  double t_end = std::max(cfg.t_max.value_or(pot.horizon(mu)), t_start);
  t_end = std::max(t_end, pot.tail_start(mu * mu));
  if (pot.compact()) t_end = std::max(t_end, pot.support_end());

  for (double bp : pot.breakpoints()) {
    if (bp > ode.t() && bp < t_end) ode.advance(bp);
  }
  if (t_end > ode.t()) ode.advance(t_end);

  // Tail decision. Beyond t_end V~ is nonincreasing and below mu^2, so with
  // q = mu^2 - V~ the Riccati variable w = u'/u satisfies: w >= -sqrt(q) never
  // reaches a node, w < -mu always does.
  const double eps = cfg.resonance_eps;
  const double extension_cap = std::max(1e4, 10.0 * (t_end - t_start));
  double extended = 0.0;
  double action = 0.0;
  std::int64_t extra = 0;
  for (;;) {
    const double q = std::max(0.0, mu * mu - pot.value_right(ode.t()));
    const double w = ode.log_derivative();
    flags.resonance_ambiguous = std::abs(w + mu) <= eps;
    if (w >= -std::sqrt(q)) break;
    if (w < -mu - eps) {
      extra = 1;
      break;
    }
    if (pot.compact()) break;  // q == mu^2 here: w sits in the resonance band
    if (action > 50.0) {
      flags.resonance_ambiguous = true;
      extra = w < -mu ? 1 : 0;
      break;
    }
    if (extended > extension_cap) {
      flags.horizon_truncated = true;
      extra = w < -mu ? 1 : 0;
      break;
    }
    const double chunk = std::min(1.0 / std::max(std::sqrt(q), 1e-3), 1e3);
    ode.advance(ode.t() + chunk);
    extended += chunk;
    action += std::sqrt(q) * chunk;
  }

  const auto nodes = static_cast<std::int64_t>(std::floor(ode.theta() / pi) - std::floor(theta_start / pi));
  return ModeCount{nodes + extra, flags};
}

// ---------------------------------------------------------------------------

FdGrid default_fd_grid(const ModeProblem& prob, double h) {
  if (!(h > 0.0)) throw DomainError("fd grid: h must be > 0");
  const LogPotential& pot = prob.pot;
  const double pad = prob.mu > 0.0 ? std::max(10.0 / prob.mu, 5.0) : 50.0;
  const double right = (pot.compact() ? pot.support_end() : pot.horizon(prob.mu)) + pad;
  if (const auto* half = std::get_if<HalfLine>(&prob.domain)) return FdGrid{h, half->t0, right};

  if (const auto* box = std::get_if<LogBox>(&pot.shape())) {
    const double width = box->t1 - box->t0;
    const double hh = width / std::ceil(width / h);
    const double margin = std::ceil(pad / hh) * hh;
    return FdGrid{hh, box->t0 - margin, box->t1 + margin};
  }
  return FdGrid{h, pot.support_begin() - pad, right};
}

Eigen::VectorXd fd_diagonal(const ModeProblem& prob, const FdGrid& grid) {
  const double h = grid.h;
  if (!(h > 0.0) || !(grid.t_end > grid.t_begin)) throw DomainError("fd grid: bad window");
  const double stiffness = (prob.mu * prob.mu + prob.pot.sup()) * h * h;
  if (stiffness > 1e-2) throw DomainError("fd grid: h too coarse for the potential scale");

  const auto n = static_cast<Eigen::Index>(std::llround((grid.t_end - grid.t_begin) / h));
  const double mu2 = prob.mu * prob.mu;
  const double inv_h2 = 1.0 / (h * h);
  auto averaged = [&](double t) { return 0.5 * (prob.pot.value_left(t) + prob.pot.value_right(t)); };

  const auto* half = std::get_if<HalfLine>(&prob.domain);
  if (half != nullptr && half->bc == Boundary::Neumann) {
    // Cell-centred nodes; the ghost value u_0 = u_1 encodes u'(t0) = 0.
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = grid.t_begin + (static_cast<double>(i) + 0.5) * h;
      d[i] = 2.0 * inv_h2 + mu2 - averaged(t);
    }
    d[0] -= inv_h2;
    return d;
  }
  Eigen::VectorXd d(n - 1);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double t = grid.t_begin + static_cast<double>(i) * h;
    d[i - 1] = 2.0 * inv_h2 + mu2 - averaged(t);
  }
  return d;
}

std::int64_t sturm_negative_count(const Eigen::Ref<const Eigen::VectorXd>& diag, double off) {
  const double off2 = off * off;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::int64_t negatives = 0;
  double pivot = 1.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    pivot = diag[i] - (i > 0 ? off2 / pivot : 0.0);
    if (pivot == 0.0) pivot = -tiny;
    if (pivot < 0.0) ++negatives;
  }
  return negatives;
}

std::int64_t count_mode_fd(const ModeProblem& prob, const FdGrid& grid) {
  if (std::holds_alternative<WholeLine>(prob.domain) && !(prob.mu > 0.0)) {
    throw DomainError("fd count: mu must be > 0 on the whole line");
  }
  auto at = [&](double h) {
    const FdGrid g{h, grid.t_begin, grid.t_end};
    return sturm_negative_count(fd_diagonal(prob, g), -1.0 / (h * h));
  };
  const std::int64_t coarse = at(grid.h);
  const std::int64_t fine = at(0.5 * grid.h);
  if (coarse != fine) {
    throw NumericalError("fd count: refinement changed the count (" + std::to_string(coarse) + " -> " +
                         std::to_string(fine) + ")");
  }
  return fine;
}

std::int64_t count_mode_fd(const ModeProblem& prob) { return count_mode_fd(prob, default_fd_grid(prob)); }

std::int64_t count_square_well(double mu, double v, double ell) {
  if (!(mu > 0.0) || !(v > 0.0) || !(ell > 0.0)) throw DomainError("square well: mu, v, ell must be > 0");
  if (v <= mu * mu) return 0;
  // u = cos(kt) + (mu/k) sin(kt) matches e^{mu t} at t = 0; its zeros are
  // t_j = (j pi - atan(k/mu)) / k, j >= 1.
  const double k = std::sqrt(v - mu * mu);
  const double phase = std::atan(k / mu);
  const auto interior = static_cast<std::int64_t>(std::floor((k * ell + phase) / pi));
  const double u = std::cos(k * ell) + mu / k * std::sin(k * ell);
  const double du = -k * std::sin(k * ell) + mu * std::cos(k * ell);
  // Past ell, u = A e^{mu t} + B e^{-mu t} with A proportional to u' + mu u.
  const bool node_beyond = u * (du + mu * u) < 0.0;
  return interior + (node_beyond ? 1 : 0);
}

ExtReal bargmann_bound(double mu, const LogPotential& pot) {
  if (!(mu > 0.0)) throw DomainError("bargmann_bound: mu must be > 0");
  const ExtReal total = pot.integral();
  if (total.is_infinite()) return ExtReal::infinity();
  return ExtReal(total.value() / (2.0 * mu));
}

const char* to_string(ZeroCertificate c) {
  switch (c) {
    case ZeroCertificate::None:
      return "none";
    case ZeroCertificate::Pointwise:
      return "pointwise";
    case ZeroCertificate::Bargmann:
      return "bargmann";
  }
  return "?";
}

ZeroCertificate certify_zero(double mu, const LogPotential& pot) {
  if (pot.sup() <= mu * mu) return ZeroCertificate::Pointwise;
  const ExtReal b = bargmann_bound(mu, pot);
  if (b.is_finite() && b.value() < 1.0) return ZeroCertificate::Bargmann;
  return ZeroCertificate::None;
}

}  // namespace clr2d
