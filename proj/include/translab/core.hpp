#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace translab {

using Complex = std::complex<double>;

/// Base class for structured runtime failures raised by the engines.
/// Precondition violations throw std::invalid_argument instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A translate column vanished at every grid node (in exact arithmetic).
struct ZeroColumnError : Error {
  using Error::Error;
};

/// The coefficient iteration left the representable range.
struct CoefficientOverflow : Error {
  using Error::Error;
};

/// A polynomial family exceeded the configured monomial cap.
struct TermCapExceeded : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Intervals and grids
// ---------------------------------------------------------------------------

/// Compact interval [lo, hi] with lo < hi, both finite.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw std::invalid_argument("Interval: need finite lo < hi");
  }

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Uniform sampling grid on an interval, endpoints included.
struct Grid {
  Interval interval;
  std::vector<double> points;  // t_0 < ... < t_{M-1}, t_0 = lo, t_{M-1} = hi
  double step;

  std::size_t size() const { return points.size(); }
};

inline Grid make_grid(const Interval& interval, std::size_t m) {
  if (m < 2) throw std::invalid_argument("make_grid: need at least 2 points");
  std::vector<double> pts(m);
  const double h = interval.length() / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i)
    pts[i] = interval.lo + h * static_cast<double>(i);
  pts[m - 1] = interval.hi;  // exact endpoint
  return Grid{interval, std::move(pts), h};
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Anything that can be sampled at a real point.
template <class G>
concept Generator = requires(const G& g, double t) {
  { g(t) } -> std::convertible_to<Complex>;
};

/// f(t) = q(t) e^{-c t^2} with a complex polynomial q and Gaussian rate c > 0.
class PolyGaussianGenerator {
 public:
  PolyGaussianGenerator(std::vector<Complex> alpha, double c)
      : alpha_(std::move(alpha)), c_(c) {
    if (alpha_.empty())
      throw std::invalid_argument("PolyGaussianGenerator: empty coefficient list");
    bool nonzero = false;
    for (const Complex& a : alpha_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw std::invalid_argument("PolyGaussianGenerator: non-finite coefficient");
      if (a != Complex(0.0)) nonzero = true;
    }
    if (!nonzero)
      throw std::invalid_argument("PolyGaussianGenerator: polynomial must be nonzero");
    if (!(c_ > 0.0) || !std::isfinite(c_))
      throw std::invalid_argument("PolyGaussianGenerator: need c > 0");
  }

  Complex operator()(double t) const { return poly_at(t) * std::exp(-c_ * t * t); }

  /// q(t) by Horner's rule.
  Complex poly_at(double t) const {
    Complex acc(0.0);
    for (std::size_t j = alpha_.size(); j-- > 0;) acc = acc * t + alpha_[j];
    return acc;
  }

  /// Exponent of the Gaussian factor, -c t^2.
  double gauss_exponent(double t) const { return -c_ * t * t; }

  const std::vector<Complex>& alpha() const { return alpha_; }
  double c() const { return c_; }
  int degree() const { return static_cast<int>(alpha_.size()) - 1; }

 private:
  std::vector<Complex> alpha_;
  double c_;
};

/// Generator given by samples on a uniform abscissa grid; linear interpolation
/// between nodes, identically zero outside the tabulated window.
class TabulatedGenerator {
 public:
  TabulatedGenerator(double x0, double dx, std::vector<Complex> samples)
      : x0_(x0), dx_(dx), samples_(std::move(samples)) {
    if (samples_.size() < 2)
      throw std::invalid_argument("TabulatedGenerator: need at least 2 samples");
    if (!(dx_ > 0.0) || !std::isfinite(dx_) || !std::isfinite(x0_))
      throw std::invalid_argument("TabulatedGenerator: need finite x0 and dx > 0");
  }

  template <class F>
  static TabulatedGenerator sample(F&& f, double x0, double x1, std::size_t m) {
    if (!(x1 > x0) || m < 2)
      throw std::invalid_argument("TabulatedGenerator::sample: invalid window");
    const double dx = (x1 - x0) / static_cast<double>(m - 1);
    std::vector<Complex> vals(m);
    for (std::size_t i = 0; i < m; ++i)
      vals[i] = f(x0 + dx * static_cast<double>(i));
    return TabulatedGenerator(x0, dx, std::move(vals));
  }

  Complex operator()(double t) const {
    const double u = (t - x0_) / dx_;
    if (u < 0.0 || u > static_cast<double>(samples_.size() - 1)) return Complex(0.0);
    const auto i = static_cast<std::size_t>(u);
    if (i + 1 >= samples_.size()) return samples_.back();
    const double w = u - static_cast<double>(i);
    return samples_[i] * (1.0 - w) + samples_[i + 1] * w;
  }

  double x_min() const { return x0_; }
  double x_max() const { return x0_ + dx_ * static_cast<double>(samples_.size() - 1); }

 private:
  double x0_;
  double dx_;
  std::vector<Complex> samples_;
};

template <Generator G>
Complex eval_generator(const G& g, double t) {
  return g(t);
}

/// T_s f evaluated at t, i.e. f(t - s).
template <Generator G>
Complex eval_shift(const G& g, double s, double t) {
  return g(t - s);
}

// ---------------------------------------------------------------------------
// Gaussian shift factorization
// ---------------------------------------------------------------------------

/// e^{-c(t-lambda)^2} = e^{-c t^2} * e^{2 c t lambda} * e^{-c lambda^2}.
/// Exposed for conditioning diagnostics of translate dictionaries.
struct GaussianShiftFactors {
  double gauss_t;       // e^{-c t^2}
  double cross;         // e^{2 c t lambda}
  double gauss_lambda;  // e^{-c lambda^2}
  bool overflow;        // cross exponent left the safe double range
};

inline GaussianShiftFactors gaussian_shift_factorization(double c, double t,
                                                         double lambda) {
  if (!(c > 0.0)) throw std::invalid_argument("gaussian_shift_factorization: need c > 0");
  const double cross_exp = 2.0 * c * t * lambda;
  return GaussianShiftFactors{std::exp(-c * t * t), std::exp(cross_exp),
                              std::exp(-c * lambda * lambda),
                              std::abs(cross_exp) > 700.0};
}

// ---------------------------------------------------------------------------
// Norms on sampled functions
// ---------------------------------------------------------------------------

inline double sup_norm(std::span<const Complex> values) {
  if (values.empty()) throw std::invalid_argument("sup_norm: empty input");
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  return m;
}

/// Composite-rectangle L^p norm on a uniform grid: (step * sum |v|^p)^{1/p}.
inline double lp_norm(std::span<const Complex> values, double p, double step) {
  if (values.empty()) throw std::invalid_argument("lp_norm: empty input");
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("lp_norm: need step > 0");
  double s = 0.0;
  for (const Complex& v : values) s += std::pow(std::abs(v), p);
  return std::pow(step * s, 1.0 / p);
}

}  // namespace translab
