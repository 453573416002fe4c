#pragma once

#include <variant>

#include "clr2d/numerics.hpp"
#include "clr2d/potentials.hpp"

namespace clr2d {

/// The Aharonov-Bohm operator D_phi^2 - V.
struct AharonovBohm {
  Flux flux;
};

/// The Laplacian restricted to functions antisymmetric under x1 <-> x2.
struct Antisymmetric {};

using Operator = std::variant<AharonovBohm, Antisymmetric>;

// ---------------------------------------------------------------------------
// Strong constants and the Green's-function diagonal
// ---------------------------------------------------------------------------

/// Diagonal of the kernel of (-d_t^2 + (i d_theta - phi)^2)^{-p}:
/// Gamma(p - 1/2) / (4 pi^{3/2} Gamma(p)) * sum_n |n - phi|^{1-2p}.
///
/// Throws DomainError for p <= 1 + 1e-6, where the mode sum diverges.
double green_diag(const Flux& flux, double p);

/// Upper bound on the sharp constant of the weighted CLR inequality for the
/// Aharonov-Bohm operator; identical to green_diag(flux, 1 + alpha/2).
double c_strong_ab(const Flux& flux, const BoundParams& params);

/// Upper bound for the antisymmetric operator:
/// Gamma((1+alpha)/2) / (2 pi^{3/2} Gamma(1+alpha/2)) * zeta(1 + alpha).
double c_strong_anti(const BoundParams& params);

// ---------------------------------------------------------------------------
// Weak constants
// ---------------------------------------------------------------------------

/// Parameters of the Hardy splitting behind the weak-constant bound.
struct InterpolationParams {
  double beta;                 ///< auxiliary strong exponent in (0, alpha)
  double theta;                ///< splitting weight, (alpha - beta) / (alpha + 2)
  double s;                    ///< Hardy level theta * d^2 (d = 1 for the antisymmetric case)
  bool grid_fallback = false;  ///< true when the golden-section search was rejected
};

struct WeakConstant {
  double value;
  InterpolationParams witness;
};

/// Rigorous upper bound on the weak-norm constant, minimized over beta.
WeakConstant c_weak_upper_ab(const Flux& flux, const BoundParams& params);

/// Lower bound on the sharp weak-norm constant; equal to c_strong_ab.
double c_weak_lower_ab(const Flux& flux, const BoundParams& params);

/// As c_weak_upper_ab with Hardy constant 1 and c_strong_anti.
WeakConstant c_weak_upper_anti(const BoundParams& params);

/// Lower bound on the antisymmetric weak constant; equal to c_strong_anti.
double c_weak_lower_anti(const BoundParams& params);

/// The beta-objective being minimized, exposed for grid oracles.
double weak_objective_ab(const Flux& flux, const BoundParams& params, double beta);
double weak_objective_anti(const BoundParams& params, double beta);

// ---------------------------------------------------------------------------
// Strong-coupling limits
// ---------------------------------------------------------------------------

/// Large-coupling law of N(H - lambda V) for potentials with the W_p tail.
struct AsymptoticLaw {
  enum class Regime {
    Power,      ///< N ~ coefficient * lambda^p
    LogLinear,  ///< N ~ coefficient * lambda ln lambda
    Weyl,       ///< N ~ coefficient * lambda * Integral V_+
  };
  Regime regime;
  double p;
  double coefficient;

  /// N divided by the regime's growth factor (lambda^p, lambda ln lambda or lambda).
  [[nodiscard]] double normalize(double count, double lambda) const;

  /// Limit of normalize(N(lambda), lambda) for the given potential.
  [[nodiscard]] double target(const RadialPotential& V) const;
};

const char* to_string(AsymptoticLaw::Regime r);

AsymptoticLaw asymp_limit_ab(const Flux& flux, double p);

/// Defined for p >= 1 only; throws DomainError otherwise.
AsymptoticLaw asymp_limit_anti(double p);

// ---------------------------------------------------------------------------
// Hardy-Sobolev constant bounds
// ---------------------------------------------------------------------------

/// Lower bound C_{phi,alpha}^{-2/(alpha+2)} on S_{phi,q}, alpha = 4/(q-2).
double hardy_sobolev_lower(const Flux& flux, double q);

/// Trial function phi(ln r / ell) e^{i n theta} for the Hardy-Sobolev quotient.
struct TrialSpec {
  double ell;
  int n;
  double A;  ///< Integral |phi'|^2
  double B;  ///< Integral |phi|^2
  double Cq; ///< Integral |phi|^q
};

/// Cosine bump phi(t) = cos(pi t / 2) on [-1, 1].
TrialSpec cosine_bump_trial(double q, double ell, int n);

/// Same, with n the nearest integer to the flux and ell = 1/d(phi).
TrialSpec cosine_bump_trial(const Flux& flux, double q);

/// 2 pi (A/ell + (n - phi)^2 ell B) / (2 pi ell Cq)^{2/q}; an upper bound on
/// S_{phi,q} when n is the integer nearest to phi.
double hardy_trial_quotient(const Flux& flux, double q, const TrialSpec& trial);

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

double c_strong(const Operator& op, const BoundParams& params);
WeakConstant c_weak_upper(const Operator& op, const BoundParams& params);

/// c_strong * strong_norm; the infinity marker propagates.
ExtReal rhs_strong(const RadialPotential& V, const Operator& op, const BoundParams& params);

/// c_weak_upper * weak_norm.
ExtReal rhs_weak(const RadialPotential& V, const Operator& op, const BoundParams& params);

}  // namespace clr2d
