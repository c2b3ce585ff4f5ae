#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "translab/core.hpp"

namespace translab {

// Envelope suprema are taken over nested dyadic grids (2^k + 1 nodes including
// both endpoints), so each refinement keeps every previous node and the
// estimate can only increase.
inline constexpr std::size_t kEnvelopeStartPoints = 513;
inline constexpr std::size_t kEnvelopeMaxPoints = (std::size_t{1} << 17) + 1;
inline constexpr double kEnvelopeRelTol = 1e-6;

/// sup over t in I of |f(t - shift)| on a fixed grid of `points` nodes.
template <Generator G>
double envelope_sup(const G& g, const Interval& interval, double shift,
                    std::size_t points) {
  if (points < 2) throw std::invalid_argument("envelope_sup: need at least 2 points");
  const double h = interval.length() / static_cast<double>(points - 1);
  double m = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t =
        (i + 1 == points) ? interval.hi : interval.lo + h * static_cast<double>(i);
    m = std::max(m, std::abs(g(t - shift)));
  }
  return m;
}

/// Refines the envelope grid until the supremum is stable to relative 1e-6,
/// or the node cap is reached.
template <Generator G>
double envelope_sup_adaptive(const G& g, const Interval& interval, double shift) {
  std::size_t n = kEnvelopeStartPoints;
  double prev = envelope_sup(g, interval, shift, n);
  while (n < kEnvelopeMaxPoints) {
    n = 2 * (n - 1) + 1;
    const double cur = envelope_sup(g, interval, shift, n);
    if (cur - prev <= kEnvelopeRelTol * cur) return cur;  // nested grids: cur >= prev
    prev = cur;
  }
  return prev;
}

/// E(x) = sup_{t in I} |f(t - (a x + b))| for each requested x. Needs a != 0.
template <Generator G>
std::vector<double> shift_envelope(const G& g, const Interval& interval, double a,
                                   double b, std::span<const double> xs) {
  if (a == 0.0) throw std::invalid_argument("shift_envelope: need a != 0");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("shift_envelope: non-finite shift parameters");
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::invalid_argument("shift_envelope: non-finite x");
    out.push_back(envelope_sup_adaptive(g, interval, a * x + b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Super-exponential decay probe
// ---------------------------------------------------------------------------

/// Question to ask of an envelope table: does E(x) e^{gamma x} fall below
/// `tolerance` and stay there? xs are the probe abscissae (strictly
/// increasing, nonnegative); they may be left empty when the caller supplies
/// a ready-made envelope table.
struct DecayProbe {
  double gamma;
  std::vector<double> xs;
  double tolerance;
};

enum class DecayStatus { found, failed, inconclusive };

struct DecayReport {
  DecayStatus status;
  std::optional<double> crossing_x;  // least sampled x whose tail stays below
  std::vector<double> products;      // E(x_i) e^{gamma x_i}
};

inline const char* to_string(DecayStatus s) {
  switch (s) {
    case DecayStatus::found: return "found";
    case DecayStatus::failed: return "failed";
    default: return "inconclusive";
  }
}

/// Scans (x_i, E_i) pairs, x strictly increasing. "found" means there is a
/// sampled x past which all products sit below tolerance and never increase;
/// a tail that is still shrinking but not yet below tolerance is
/// "inconclusive", a growing tail is "failed".
inline DecayReport superexp_check(std::span<const std::pair<double, double>> envelope,
                                  const DecayProbe& probe) {
  if (envelope.empty()) throw std::invalid_argument("superexp_check: empty envelope");
  if (!(probe.tolerance > 0.0))
    throw std::invalid_argument("superexp_check: need tolerance > 0");
  if (!std::isfinite(probe.gamma))
    throw std::invalid_argument("superexp_check: non-finite gamma");
  if (!probe.xs.empty() && probe.xs.size() != envelope.size())
    throw std::invalid_argument("superexp_check: probe abscissae do not match envelope");
  const std::size_t m = envelope.size();
  std::vector<double> products(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0 && !(envelope[i].first > envelope[i - 1].first))
      throw std::invalid_argument("superexp_check: x values must be increasing");
    if (!probe.xs.empty() && probe.xs[i] != envelope[i].first)
      throw std::invalid_argument("superexp_check: probe abscissae do not match envelope");
    if (envelope[i].second < 0.0)
      throw std::invalid_argument("superexp_check: negative envelope value");
    products[i] = envelope[i].second * std::exp(probe.gamma * envelope[i].first);
  }

  std::size_t best = m;  // m means: no valid tail start
  for (std::size_t i = m; i-- > 0;) {
    const bool below = products[i] < probe.tolerance;
    const bool steps_down = (i + 1 == m) || products[i] >= products[i + 1];
    if (below && steps_down && (best == m ? i + 1 == m : best == i + 1))
      best = i;
    else
      break;
  }

  DecayReport report;
  report.products = std::move(products);
  if (best < m) {
    report.status = DecayStatus::found;
    report.crossing_x = envelope[best].first;
  } else if (m < 2 || report.products[m - 1] <= report.products[m - 2]) {
    report.status = DecayStatus::inconclusive;
  } else {
    report.status = DecayStatus::failed;
  }
  return report;
}

/// Computes the shift envelope at the probe's own abscissae and scans it.
template <Generator G>
DecayReport run_decay_probe(const G& g, const Interval& interval, double a, double b,
                            const DecayProbe& probe) {
  if (probe.xs.empty())
    throw std::invalid_argument("run_decay_probe: probe has no abscissae");
  for (std::size_t i = 0; i < probe.xs.size(); ++i) {
    if (probe.xs[i] < 0.0)
      throw std::invalid_argument("run_decay_probe: abscissae must be nonnegative");
    if (i > 0 && !(probe.xs[i] > probe.xs[i - 1]))
      throw std::invalid_argument("run_decay_probe: abscissae must be strictly increasing");
  }
  const std::vector<double> env = shift_envelope(g, interval, a, b, probe.xs);
  std::vector<std::pair<double, double>> table;
  table.reserve(probe.xs.size());
  for (std::size_t i = 0; i < probe.xs.size(); ++i)
    table.emplace_back(probe.xs[i], env[i]);
  return superexp_check(table, probe);
}

}  // namespace translab
