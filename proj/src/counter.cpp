#include "clr2d/counter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

namespace clr2d {

namespace {

using numerics::pi;

struct Channel {
  int n;
  double mu;
};

// Channels along one direction, stopping after two consecutive zero
// certificates. Certified channels are recorded with count 0.
void collect_side(const LogPotential& pot, const std::function<double(int)>& mu_of, int first, int step,
                  std::vector<Channel>& to_shoot, CountResult& out) {
  int consecutive = 0;
  for (int n = first;; n += step) {
    const double mu = mu_of(n);
    out.max_index = std::max(out.max_index, std::abs(n));
    const ZeroCertificate cert = certify_zero(mu, pot);
    if (cert == ZeroCertificate::None) {
      consecutive = 0;
      to_shoot.push_back({n, mu});
      continue;
    }
    out.per_mode[n] = 0;
    if (cert == ZeroCertificate::Bargmann) out.certificate = ZeroCertificate::Bargmann;
    if (++consecutive == 2) return;
  }
}

void shoot_all(const LogPotential& pot, const std::vector<Channel>& channels, const CountOptions& opts,
               CountResult& out) {
  std::vector<ModeCount> counts(channels.size(), ModeCount{0, {}});
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < channels.size(); i = next++) {
      counts[i] = count_mode(ModeProblem{channels[i].mu, pot}, opts.mode);
    }
  };
  const unsigned workers = std::clamp<unsigned>(opts.workers, 1U, static_cast<unsigned>(channels.size()) + 1U);
  if (workers <= 1 || channels.size() < 2) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < channels.size(); ++i) {
    out.per_mode[channels[i].n] = counts[i].count;
    out.flags |= counts[i].flags;
  }
  out.total = 0;
  for (const auto& [n, c] : out.per_mode) out.total += c;
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("coupling lambda must be finite and >= 0");
}

}  // namespace

CountResult count_ab(const RadialPotential& V, const Flux& flux, double lambda, const CountOptions& opts) {
  check_lambda(lambda);
  const LogPotential pot = log_transform(V).scaled(lambda);
  const double phi = flux.reduced;
  auto mu_of = [phi](int n) { return std::abs(n - phi); };

  CountResult out;
  std::vector<Channel> channels;
  collect_side(pot, mu_of, 1, 1, channels, out);
  collect_side(pot, mu_of, 0, -1, channels, out);
  shoot_all(pot, channels, opts, out);
  return out;
}

CountResult count_anti(const RadialPotential& V, double lambda, const CountOptions& opts) {
  check_lambda(lambda);
  const LogPotential pot = log_transform(V).scaled(lambda);
  auto mu_of = [](int n) { return static_cast<double>(n); };

  CountResult out;
  std::vector<Channel> channels;
  collect_side(pot, mu_of, 1, 1, channels, out);
  shoot_all(pot, channels, opts, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kCountCap = 4.0e18;  // below 2^62

void check_params(const LatticeBracketParams& params) {
  if (!(params.p > 0.0) || !(params.lambda > 0.0) || !(params.L > 0.0) || !std::isfinite(params.lambda) ||
      !std::isfinite(params.L) || !std::isfinite(params.p)) {
    throw DomainError("lattice bracket: p, lambda and L must be finite and > 0");
  }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r) || static_cast<double>(r) > kCountCap) {
    throw NumericalError("lattice bracket: count exceeds the 2^62 guard");
  }
  return r;
}

// Number of k >= 0 admitted for a lattice energy E: the lower sum needs
// (k+1) L + 1 < (lambda/E)^p, the upper sum k L + 1 < (lambda/E)^p.
std::int64_t k_range(double E, const LatticeBracketParams& params, bool upper) {
  if (!(E < params.lambda)) return 0;
  const double x = (std::pow(params.lambda / E, params.p) - 1.0) / params.L;
  if (!(x < kCountCap)) throw NumericalError("lattice bracket: count exceeds the 2^62 guard");
  const double c = std::ceil(x) - (upper ? 0.0 : 1.0);
  return c > 0.0 ? static_cast<std::int64_t>(c) : 0;
}

// Sum over m >= m0 and the channel set; `mus` enumerates the mu values with
// mu^2 < bound for a given bound.
template <class ForEachMu>
std::int64_t lattice_sum(const LatticeBracketParams& params, bool upper, ForEachMu&& for_each_mu) {
  check_params(params);
  std::int64_t total = 0;
  for (std::int64_t m = upper ? 0 : 1;; ++m) {
    const double wave = pi * static_cast<double>(m) / params.L;
    const double em = wave * wave;
    if (!(em < params.lambda)) break;
    for_each_mu(params.lambda - em, [&](double mu) { total = checked_add(total, k_range(em + mu * mu, params, upper)); });
  }
  return total;
}

// mu = |n - phi| with mu^2 < bound.
auto ab_channels(double phi) {
  return [phi](double bound, const auto& visit) {
    const double r = std::sqrt(bound);
    const auto n_lo = static_cast<std::int64_t>(std::floor(phi - r));
    const auto n_hi = static_cast<std::int64_t>(std::ceil(phi + r));
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      const double mu = static_cast<double>(n) - phi;
      if (mu * mu < bound) visit(mu);
    }
  };
}

// mu = n, n >= 1, with mu^2 < bound.
auto anti_channels() {
  return [](double bound, const auto& visit) {
    const auto n_hi = static_cast<std::int64_t>(std::ceil(std::sqrt(bound)));
    for (std::int64_t n = 1; n <= n_hi; ++n) {
      const auto mu = static_cast<double>(n);
      if (mu * mu < bound) visit(mu);
    }
  };
}

}  // namespace

std::int64_t lattice_lower(const LatticeBracketParams& params) {
  return lattice_sum(params, false, ab_channels(params.flux.reduced));
}

std::int64_t lattice_upper(const LatticeBracketParams& params) {
  return lattice_sum(params, true, ab_channels(params.flux.reduced));
}

Bracket bracket_wp(const LatticeBracketParams& params) { return {lattice_lower(params), lattice_upper(params)}; }

std::int64_t lattice_lower_anti(const LatticeBracketParams& params) {
  return lattice_sum(params, false, anti_channels());
}

std::int64_t lattice_upper_anti(const LatticeBracketParams& params) {
  return lattice_sum(params, true, anti_channels());
}

Bracket bracket_wp_anti(const LatticeBracketParams& params) {
  return {lattice_lower_anti(params), lattice_upper_anti(params)};
}

double bracket_length(double lambda, double p) {
  if (!(lambda > 0.0) || !(p > 0.0)) throw DomainError("bracket_length: lambda and p must be > 0");
  return std::max(1.0, std::pow(lambda, (p - 1.0) / 2.0));
}

}  // namespace clr2d
