#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>

#include "clr2d/potentials.hpp"

namespace clr2d {

// One angular channel: -u'' + (mu^2 - V~(t)) u on the line or a half-line.
// Counts are the number of eigenvalues in (-inf, 0).

enum class Boundary { Dirichlet, Neumann };

struct WholeLine {};

struct HalfLine {
  double t0;
  Boundary bc;
};

using ModeDomain = std::variant<WholeLine, HalfLine>;

struct ModeProblem {
  double mu;
  LogPotential pot;
  ModeDomain domain = WholeLine{};
};

struct CountSettings {
  /// Integration horizon; defaults to pot.horizon(mu). Integration always
  /// continues at least to where V~ stays below mu^2.
  std::optional<double> t_max;
  double rtol = 1e-8;
  double resonance_eps = 1e-6;
};

struct ModeFlags {
  /// |u'/u + mu| <= resonance_eps at the decision point: an eigenvalue sits at 0.
  bool resonance_ambiguous = false;
  /// The tail certificate did not resolve within the extension budget.
  bool horizon_truncated = false;

  [[nodiscard]] bool any() const { return resonance_ambiguous || horizon_truncated; }
  ModeFlags& operator|=(const ModeFlags& o) {
    resonance_ambiguous |= o.resonance_ambiguous;
    horizon_truncated |= o.horizon_truncated;
    return *this;
  }
};

struct ModeCount {
  std::int64_t count;
  ModeFlags flags;
};

/// Oscillation count by zero-energy shooting in Prufer form.
///
/// The zero-energy solution starts on the decaying branch at the left end
/// (or with the boundary data of the half-line), its nodes are counted as
/// Prufer-phase crossings of multiples of pi, and a node beyond the horizon
/// is detected from the terminal logarithmic derivative: u'/u < -mu means the
/// growing branch enters with the opposite sign.
ModeCount count_mode(const ModeProblem& prob, const CountSettings& cfg = {});

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

struct FdGrid {
  double h;
  double t_begin;
  double t_end;
};

/// Default finite-difference window for a problem: the support padded by
/// max(10/mu, 5) on open ends, with a box's edges aligned to grid nodes.
FdGrid default_fd_grid(const ModeProblem& prob, double h = 1e-3);

/// Diagonal of the central-difference matrix (off-diagonal is -1/h^2).
Eigen::VectorXd fd_diagonal(const ModeProblem& prob, const FdGrid& grid);

/// Number of negative eigenvalues of the symmetric tridiagonal matrix with
/// the given diagonal and constant off-diagonal, by LDL^T pivot signs.
std::int64_t sturm_negative_count(const Eigen::Ref<const Eigen::VectorXd>& diag, double off);

/// Finite-difference count at h, checked against h/2.
/// Throws NumericalError when the two resolutions disagree.
std::int64_t count_mode_fd(const ModeProblem& prob, const FdGrid& grid);
std::int64_t count_mode_fd(const ModeProblem& prob);

/// Closed-form count for V~ = v on [0, ell] on the whole line.
std::int64_t count_square_well(double mu, double v, double ell);

/// (2 mu)^{-1} Integral V~_+ dt, an upper bound on the whole-line count.
ExtReal bargmann_bound(double mu, const LogPotential& pot);

/// Why a whole-line channel provably has no negative eigenvalues.
enum class ZeroCertificate { None, Pointwise, Bargmann };

const char* to_string(ZeroCertificate c);

/// Pointwise sup V~ <= mu^2, else Bargmann bound < 1, else None.
ZeroCertificate certify_zero(double mu, const LogPotential& pot);

}  // namespace clr2d
