#pragma once

#include <string>
#include <variant>

#include "translab/core.hpp"

namespace translab {

// ---------------------------------------------------------------------------
// Translation sets
// ---------------------------------------------------------------------------

struct ExplicitFamily {};

/// a*k + b for k = k_min..k_max, a != 0.
struct ArithmeticFamily {
  double a;
  double b;
  long k_min;
  long k_max;
};

/// scale * ratio^k for k = 1..count, ratio > 1.
struct LacunaryFamily {
  double ratio;
  int count;
  double scale;
};

/// scale * k^exponent for k = 1..count, exponent > 0.
struct PowerFamily {
  double exponent;
  int count;
  double scale;
};

using Family =
    std::variant<ExplicitFamily, ArithmeticFamily, LacunaryFamily, PowerFamily>;

/// Finite ordered set of pairwise distinct real translates, together with the
/// family it was generated from (if any). Enumeration order is preserved.
class TranslationSet {
 public:
  static TranslationSet explicit_set(std::vector<double> values) {
    return TranslationSet(std::move(values), ExplicitFamily{});
  }

  static TranslationSet arithmetic(double a, double b, long k_min, long k_max) {
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("TranslationSet::arithmetic: need finite a != 0");
    if (k_min > k_max)
      throw std::invalid_argument("TranslationSet::arithmetic: need k_min <= k_max");
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (long k = k_min; k <= k_max; ++k)
      vals.push_back(a * static_cast<double>(k) + b);
    return TranslationSet(std::move(vals), ArithmeticFamily{a, b, k_min, k_max});
  }

  static TranslationSet lacunary(double ratio, int count, double scale = 1.0) {
    if (!(ratio > 1.0) || !std::isfinite(ratio))
      throw std::invalid_argument("TranslationSet::lacunary: need ratio > 1");
    if (count < 1) throw std::invalid_argument("TranslationSet::lacunary: need count >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw std::invalid_argument("TranslationSet::lacunary: need scale > 0");
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(count));
    double v = scale;
    for (int k = 1; k <= count; ++k) {
      v *= ratio;
      vals.push_back(v);
    }
    return TranslationSet(std::move(vals), LacunaryFamily{ratio, count, scale});
  }

  static TranslationSet power(double exponent, int count, double scale = 1.0) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
      throw std::invalid_argument("TranslationSet::power: need exponent > 0");
    if (count < 1) throw std::invalid_argument("TranslationSet::power: need count >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw std::invalid_argument("TranslationSet::power: need scale > 0");
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k)
      vals.push_back(scale * std::pow(static_cast<double>(k), exponent));
    return TranslationSet(std::move(vals), PowerFamily{exponent, count, scale});
  }

  const std::vector<double>& values() const { return values_; }
  const Family& family() const { return family_; }
  std::size_t size() const { return values_.size(); }

  /// First k values as an explicit set (every prefix of a family is one).
  TranslationSet prefix(std::size_t k) const {
    if (k == 0 || k > values_.size())
      throw std::invalid_argument("TranslationSet::prefix: k out of range");
    return explicit_set(std::vector<double>(values_.begin(),
                                            values_.begin() + static_cast<long>(k)));
  }

  /// All values multiplied by s > 0; parametric families stay parametric.
  TranslationSet scaled(double s) const {
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("TranslationSet::scaled: need s > 0");
    if (const auto* ar = std::get_if<ArithmeticFamily>(&family_))
      return arithmetic(s * ar->a, s * ar->b, ar->k_min, ar->k_max);
    if (const auto* la = std::get_if<LacunaryFamily>(&family_))
      return lacunary(la->ratio, la->count, s * la->scale);
    if (const auto* po = std::get_if<PowerFamily>(&family_))
      return power(po->exponent, po->count, s * po->scale);
    std::vector<double> vals(values_);
    for (double& v : vals) v *= s;
    return explicit_set(std::move(vals));
  }

  std::string family_name() const {
    if (std::holds_alternative<ArithmeticFamily>(family_)) return "arithmetic";
    if (std::holds_alternative<LacunaryFamily>(family_)) return "lacunary";
    if (std::holds_alternative<PowerFamily>(family_)) return "power";
    return "explicit";
  }

 private:
  TranslationSet(std::vector<double> values, Family family)
      : values_(std::move(values)), family_(family) {
    if (values_.empty())
      throw std::invalid_argument("TranslationSet: empty value list");
    for (double v : values_)
      if (!std::isfinite(v))
        throw std::invalid_argument("TranslationSet: non-finite value");
    std::vector<double> sorted(values_);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("TranslationSet: values must be pairwise distinct");
  }

  std::vector<double> values_;
  Family family_;
};

// ---------------------------------------------------------------------------
// Divergence diagnostics
// ---------------------------------------------------------------------------

/// Running sums of 1/|lambda| in enumeration order; lambda = 0 is skipped.
inline std::vector<double> reciprocal_partial_sums(const TranslationSet& set) {
  std::vector<double> sums;
  sums.reserve(set.size());
  double acc = 0.0;
  for (double v : set.values()) {
    if (v != 0.0) acc += 1.0 / std::abs(v);
    sums.push_back(acc);
  }
  return sums;
}

/// Cayley-type map of the right half plane onto the unit disk. Pole at z = -1.
inline Complex moebius_map(Complex z) {
  if (z == Complex(-1.0))
    throw std::domain_error("moebius_map: pole at z = -1");
  return (z - Complex(1.0)) / (z + Complex(1.0));
}

/// Blaschke deficit 1 - |moebius_map(lambda)| of a positive translate.
/// lambda = 0 maps to the boundary and is booked with the maximal deficit 1,
/// which keeps the running sums monotone without a special error path.
inline double blaschke_deficit(double lambda) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("blaschke_deficit: need lambda >= 0");
  if (lambda == 0.0) return 1.0;
  return 1.0 - std::abs(moebius_map(Complex(lambda)));
}

struct BlaschkeSums {
  std::vector<double> plus;   // running deficit sums over {lambda >= 0}
  std::vector<double> minus;  // running deficit sums over {-lambda : lambda < 0}
};

/// Splits the set into the nonnegative part and the reflected negative part,
/// and accumulates 1 - |moebius_map(.)| along each, in enumeration order.
inline BlaschkeSums blaschke_deficit_sums(const TranslationSet& set) {
  BlaschkeSums out;
  double acc_plus = 0.0;
  double acc_minus = 0.0;
  for (double v : set.values()) {
    if (v >= 0.0) {
      acc_plus += blaschke_deficit(v);
      out.plus.push_back(acc_plus);
    } else {
      acc_minus += blaschke_deficit(-v);
      out.minus.push_back(acc_minus);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class Verdict { divergent, convergent, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::divergent: return "divergent";
    case Verdict::convergent: return "convergent";
    default: return "unknown";
  }
}

struct ClassificationReport {
  std::string family;
  Verdict verdict;
  std::vector<double> partial_sums;
  std::vector<double> blaschke_plus;
  std::vector<double> blaschke_minus;
};

/// Verdict for the infinite continuation of a parametric family. A finite
/// explicit list decides nothing, hence "unknown"; the partial sums are
/// reported either way so callers can look at the trend.
inline ClassificationReport classify(const TranslationSet& set) {
  ClassificationReport report;
  report.family = set.family_name();
  report.partial_sums = reciprocal_partial_sums(set);
  BlaschkeSums bs = blaschke_deficit_sums(set);
  report.blaschke_plus = std::move(bs.plus);
  report.blaschke_minus = std::move(bs.minus);

  if (std::holds_alternative<ArithmeticFamily>(set.family())) {
    // sum 1/|a k + b| is a harmonic tail: always divergent.
    report.verdict = Verdict::divergent;
  } else if (const auto* po = std::get_if<PowerFamily>(&set.family())) {
    report.verdict = po->exponent <= 1.0 ? Verdict::divergent : Verdict::convergent;
  } else if (std::holds_alternative<LacunaryFamily>(set.family())) {
    // geometric growth: sum of reciprocals converges.
    report.verdict = Verdict::convergent;
  } else {
    report.verdict = Verdict::unknown;
  }
  return report;
}

}  // namespace translab
