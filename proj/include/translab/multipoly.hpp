#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <sstream>

#include "translab/core.hpp"

namespace translab {

/// Default cap on the number of stored monomials per polynomial. The
/// recursion below at most doubles the term count per step, so families with
/// many variables and large depth can blow up; the cap turns that into a
/// structured error instead of an allocation failure.
inline constexpr std::size_t kDefaultTermCap = 200000;

namespace detail {

/// Graded lexicographic order, larger terms first: higher total degree wins,
/// ties broken by the first differing exponent (x1 weighs heaviest).
struct GrlexDescending {
  bool operator()(const std::vector<unsigned>& a,
                  const std::vector<unsigned>& b) const {
    unsigned ta = 0, tb = 0;
    for (unsigned e : a) ta += e;
    for (unsigned e : b) tb += e;
    if (ta != tb) return ta > tb;
    return a > b;
  }
};

}  // namespace detail

/// Sparse multivariate polynomial in x1..xn with exact integer coefficients.
/// Supports exactly the operations the coefficient recursion needs.
class MultiPoly {
 public:
  using Coeff = boost::multiprecision::cpp_int;
  using TermMap = std::map<std::vector<unsigned>, Coeff, detail::GrlexDescending>;

  explicit MultiPoly(int n_vars) : n_vars_(n_vars) {
    if (n_vars < 1) throw std::invalid_argument("MultiPoly: need n_vars >= 1");
  }

  /// The monomial x_{j+1} (j is zero-based).
  static MultiPoly variable(int n_vars, int j) {
    MultiPoly p(n_vars);
    if (j < 0 || j >= n_vars)
      throw std::invalid_argument("MultiPoly::variable: index out of range");
    std::vector<unsigned> e(static_cast<std::size_t>(n_vars), 0u);
    e[static_cast<std::size_t>(j)] = 1u;
    p.terms_[std::move(e)] = 1;
    return p;
  }

  static MultiPoly constant(int n_vars, Coeff c) {
    MultiPoly p(n_vars);
    if (c != 0) p.terms_[std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0u)] = std::move(c);
    return p;
  }

  int n_vars() const { return n_vars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  /// Max total degree over stored terms; 0 for the zero polynomial.
  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (unsigned k : e) t += static_cast<int>(k);
      d = std::max(d, t);
    }
    return d;
  }

  Coeff max_abs_coeff() const {
    Coeff m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, Coeff(abs(c)));
    return m;
  }

  MultiPoly times_var(int j) const {
    if (j < 0 || j >= n_vars_)
      throw std::invalid_argument("MultiPoly::times_var: index out of range");
    MultiPoly out(n_vars_);
    for (const auto& [e, c] : terms_) {
      std::vector<unsigned> shifted(e);
      ++shifted[static_cast<std::size_t>(j)];
      out.terms_[std::move(shifted)] = c;
    }
    return out;
  }

  MultiPoly negate() const {
    MultiPoly out(n_vars_);
    for (const auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
  }

  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    if (a.n_vars_ != b.n_vars_)
      throw std::invalid_argument("MultiPoly: variable count mismatch");
    MultiPoly out(a);
    for (const auto& [e, c] : b.terms_) {
      auto it = out.terms_.find(e);
      if (it == out.terms_.end()) {
        out.terms_[e] = -c;
      } else {
        it->second -= c;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

  /// Numeric evaluation at a complex point. Coefficients round to double on
  /// the way in, exact while they stay below 2^53.
  Complex evaluate(std::span<const Complex> point) const {
    if (point.size() != static_cast<std::size_t>(n_vars_))
      throw std::invalid_argument("MultiPoly::evaluate: point dimension mismatch");
    Complex acc(0.0);
    for (const auto& [e, c] : terms_) {
      Complex term(c.convert_to<double>());
      for (std::size_t v = 0; v < e.size(); ++v) {
        Complex base = point[v];
        for (unsigned k = 0; k < e[v]; ++k) term *= base;
      }
      acc += term;
    }
    return acc;
  }

  /// Canonical text form: terms in graded-lex order (leading term first),
  /// each as coeff*monomial with "^1" omitted, joined by " + ". The zero
  /// polynomial prints as "0".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c.str();
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        os << "*x" << (v + 1);
        if (e[v] > 1) os << "^" << e[v];
      }
    }
    return os.str();
  }

 private:
  int n_vars_;
  TermMap terms_;
};

// ---------------------------------------------------------------------------
// The reduction's polynomial family
// ---------------------------------------------------------------------------

/// Base of the recursion: p_{1,j} = x_j for j = 1..n.
inline std::vector<MultiPoly> poly_base(int n) {
  if (n < 1) throw std::invalid_argument("poly_base: need n >= 1");
  std::vector<MultiPoly> fam;
  fam.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) fam.push_back(MultiPoly::variable(n, j));
  return fam;
}

/// One level of the recursion:
///   p_{l+1,j} = p_{l,j+1} - p_{l,1} * x_j   (j < n)
///   p_{l+1,n} = -p_{l,1} * x_n
inline std::vector<MultiPoly> poly_step(const std::vector<MultiPoly>& fam,
                                        std::size_t term_cap = kDefaultTermCap) {
  if (fam.empty()) throw std::invalid_argument("poly_step: empty family");
  const int n = static_cast<int>(fam.size());
  for (const MultiPoly& p : fam)
    if (p.n_vars() != n)
      throw std::invalid_argument("poly_step: family must have n polynomials in n variables");
  std::vector<MultiPoly> next;
  next.reserve(fam.size());
  for (int j = 0; j + 1 < n; ++j)
    next.push_back(fam[static_cast<std::size_t>(j) + 1] - fam[0].times_var(j));
  next.push_back(fam[0].times_var(n - 1).negate());
  for (const MultiPoly& p : next)
    if (p.term_count() > term_cap)
      throw TermCapExceeded("poly_step: term cap exceeded (" +
                            std::to_string(p.term_count()) + " > " +
                            std::to_string(term_cap) + " monomials)");
  return next;
}

/// The family at level ell, i.e. ell - 1 recursion steps from the base.
inline std::vector<MultiPoly> poly_family(int n, int ell,
                                          std::size_t term_cap = kDefaultTermCap) {
  if (ell < 1) throw std::invalid_argument("poly_family: need ell >= 1");
  std::vector<MultiPoly> fam = poly_base(n);
  for (int l = 1; l < ell; ++l) fam = poly_step(fam, term_cap);
  return fam;
}

}  // namespace translab
