#pragma once

#include <cstdint>
#include <map>

#include "clr2d/modes.hpp"
#include "clr2d/potentials.hpp"

namespace clr2d {

/// Negative-eigenvalue count of a radial operator, channel by channel.
///
/// For the Aharonov-Bohm operator the channel index n is taken relative to
/// the reduced flux, so channel n has mu = |n - flux.reduced|.
struct CountResult {
  std::int64_t total = 0;
  std::map<int, std::int64_t> per_mode;
  /// Largest |n| examined.
  int max_index = 0;
  /// Weakest certificate among the channels that closed the sum.
  ZeroCertificate certificate = ZeroCertificate::Pointwise;
  ModeFlags flags;
};

struct CountOptions {
  CountSettings mode;
  /// Threads used for the per-channel shooting; results do not depend on it.
  unsigned workers = 1;
};

/// N(D_phi^2 - lambda V), summed over channels n in Z until two consecutive
/// channels on each side carry a zero certificate.
CountResult count_ab(const RadialPotential& V, const Flux& flux, double lambda, const CountOptions& opts = {});

/// N(-Delta_as - lambda V) over the channels mu = n, n >= 1.
CountResult count_anti(const RadialPotential& V, double lambda, const CountOptions& opts = {});

// ---------------------------------------------------------------------------
// Lattice brackets for lambda W_p
// ---------------------------------------------------------------------------

struct LatticeBracketParams {
  double p;
  Flux flux;
  double lambda;
  double L;
};

struct Bracket {
  std::int64_t lower;
  std::int64_t upper;
};

/// Sum over k >= 0 of #{(m, n) in N x Z : pi^2 m^2 / L^2 + (n - phi)^2 < lambda ((k+1) L + 1)^{-1/p}}.
std::int64_t lattice_lower(const LatticeBracketParams& params);

/// Sum over k >= 0 of #{(m, n) in N_0 x Z : pi^2 m^2 / L^2 + (n - phi)^2 < lambda (k L + 1)^{-1/p}}.
std::int64_t lattice_upper(const LatticeBracketParams& params);

/// (lattice_lower, lattice_upper); N(D_phi^2 - lambda W_p) lies in between.
Bracket bracket_wp(const LatticeBracketParams& params);

/// The same sums with (n - phi) replaced by n, n >= 1 (flux is ignored).
std::int64_t lattice_lower_anti(const LatticeBracketParams& params);
std::int64_t lattice_upper_anti(const LatticeBracketParams& params);
Bracket bracket_wp_anti(const LatticeBracketParams& params);

/// Interval length max(1, lambda^{(p-1)/2}) used for strong-coupling sweeps.
double bracket_length(double lambda, double p);

}  // namespace clr2d
