#pragma once

#include "translab/core.hpp"
#include "translab/multipoly.hpp"

namespace translab {

/// Coefficient magnitude past which one reduction step is declared overflowed.
inline constexpr double kCoeffOverflowLimit = 1e300;

/// One level of the coefficient recursion, the evaluated shadow of poly_step:
///   q'_j = q_{j+1} - q_1 c_j   (j < n),   q'_n = -q_1 c_n.
inline std::vector<Complex> coeff_step(std::span<const Complex> q,
                                       std::span<const Complex> c) {
  if (q.empty() || q.size() != c.size())
    throw std::invalid_argument("coeff_step: need matching nonempty q and c");
  const std::size_t n = q.size();
  std::vector<Complex> next(n);
  const Complex q1 = q[0];
  for (std::size_t j = 0; j + 1 < n; ++j) next[j] = q[j + 1] - q1 * c[j];
  next[n - 1] = -q1 * c[n - 1];
  for (const Complex& z : next)
    if (!(std::abs(z) <= kCoeffOverflowLimit))
      throw CoefficientOverflow("coeff_step: coefficient magnitude exceeded 1e300");
  return next;
}

// ---------------------------------------------------------------------------
// Reduction problems
// ---------------------------------------------------------------------------

/// The combination F0 = T_b f + sum_j c_j T_{a j + b} f whose leading
/// translate the reduction peels off. c_j = d_{m0+j} / d_{m0} normalizes the
/// leading coefficient to 1.
template <Generator G>
struct ReductionProblem {
  G f;
  double a;
  double b;
  std::vector<Complex> d;  // d_{m0}, ..., d_m as given
  long m0;
  std::vector<Complex> c;  // c_1..c_n, n = d.size() - 1

  std::size_t n() const { return c.size(); }
};

template <Generator G>
ReductionProblem<G> make_reduction_problem(G f, double a, double b,
                                           std::vector<Complex> d, long m0 = 0) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("make_reduction_problem: need finite a != 0, b");
  if (d.size() < 2)
    throw std::invalid_argument("make_reduction_problem: need at least two coefficients");
  for (const Complex& z : d)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("make_reduction_problem: non-finite coefficient");
  if (d[0] == Complex(0.0))
    throw std::invalid_argument("make_reduction_problem: leading coefficient must be nonzero");
  std::vector<Complex> c(d.size() - 1);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = d[j + 1] / d[0];
  return ReductionProblem<G>{std::move(f), a, b, std::move(d), m0, std::move(c)};
}

/// Iteration state: at level ell, A_ell = T_b f + sum_j q_j T_{a(ell+j-1)+b} f.
/// At ell = 1 the q coincide with the problem's c.
struct ReductionState {
  int ell;
  std::vector<Complex> q;
  std::vector<Complex> q1_history;  // q_1 at levels 1..ell-1, in order
};

template <Generator G>
ReductionState initial_state(const ReductionProblem<G>& problem) {
  return ReductionState{1, problem.c, {}};
}

template <Generator G>
void advance(const ReductionProblem<G>& problem, ReductionState& state) {
  if (state.q.size() != problem.n())
    throw std::invalid_argument("advance: state does not match problem size");
  state.q1_history.push_back(state.q[0]);
  state.q = coeff_step(state.q, problem.c);
  ++state.ell;
}

// ---------------------------------------------------------------------------
// Sampling the combinations
// ---------------------------------------------------------------------------

template <Generator G>
Complex eval_F0(const ReductionProblem<G>& problem, double t) {
  Complex v = problem.f(t - problem.b);
  for (std::size_t j = 0; j < problem.n(); ++j)
    v += problem.c[j] * problem.f(t - (problem.a * static_cast<double>(j + 1) + problem.b));
  return v;
}

/// Samples A_ell = T_b f + sum_j q_j T_{a(ell+j-1)+b} f on a grid.
template <Generator G>
std::vector<Complex> assemble_A(const ReductionProblem<G>& problem,
                                const ReductionState& state, const Grid& grid) {
  if (state.q.size() != problem.n())
    throw std::invalid_argument("assemble_A: state does not match problem size");
  std::vector<Complex> out;
  out.reserve(grid.size());
  for (double t : grid.points) {
    Complex v = problem.f(t - problem.b);
    for (std::size_t j = 0; j < state.q.size(); ++j) {
      const double shift =
          problem.a * static_cast<double>(state.ell + static_cast<long>(j)) + problem.b;
      v += state.q[j] * problem.f(t - shift);
    }
    out.push_back(v);
  }
  return out;
}

/// Samples the trailing block A_ell - T_b f alone. Summing the small
/// translates directly avoids the cancellation that computing
/// (A_ell) - (T_b f) in doubles would hit once the block is below machine
/// precision relative to f.
template <Generator G>
std::vector<Complex> sample_tail(const ReductionProblem<G>& problem,
                                 const ReductionState& state, const Grid& grid) {
  std::vector<Complex> out;
  out.reserve(grid.size());
  for (double t : grid.points) {
    Complex v(0.0);
    for (std::size_t j = 0; j < state.q.size(); ++j) {
      const double shift =
          problem.a * static_cast<double>(state.ell + static_cast<long>(j)) + problem.b;
      v += state.q[j] * problem.f(t - shift);
    }
    out.push_back(v);
  }
  return out;
}

/// Weights beta_0..beta_{ell-1} with A_ell = sum_k beta_k T_{a k} F0:
/// beta_0 = 1 and beta_k = -q_1 at level k. Proof of membership of A_ell in
/// the shift-invariant span of F0.
template <Generator G>
std::vector<Complex> span_representation(const ReductionProblem<G>& problem,
                                         const ReductionState& state) {
  if (state.q.size() != problem.n())
    throw std::invalid_argument("span_representation: state does not match problem size");
  if (state.q1_history.size() + 1 != static_cast<std::size_t>(state.ell))
    throw std::invalid_argument("span_representation: history does not match level");
  std::vector<Complex> beta(static_cast<std::size_t>(state.ell));
  beta[0] = Complex(1.0);
  for (std::size_t k = 1; k < beta.size(); ++k) beta[k] = -state.q1_history[k - 1];
  return beta;
}

/// Samples sum_k beta_k F0(t - a k) on a grid, for checking the span identity.
template <Generator G>
std::vector<Complex> sample_span(const ReductionProblem<G>& problem,
                                 std::span<const Complex> beta, const Grid& grid) {
  std::vector<Complex> out;
  out.reserve(grid.size());
  for (double t : grid.points) {
    Complex v(0.0);
    for (std::size_t k = 0; k < beta.size(); ++k)
      v += beta[k] * eval_F0(problem, t - problem.a * static_cast<double>(k));
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convergence tables
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  int ell;
  double err_sup;   // sup over the grid of |A_ell - T_b f|
  double max_q;     // max_j |q_j| at this level
  double fitted_c;  // running max of max_q^{1/ell}
  std::string status;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::string status;  // converged | no-convergence | inconclusive | overflow
};

/// Runs the reduction to ell_max and tabulates the error. Verdict rule:
/// "converged" if the final error is at or below conv_tol, "no-convergence"
/// if it at least doubled from the level-min(2, ell_max) baseline, otherwise
/// "inconclusive". A coefficient overflow truncates the table.
template <Generator G>
ConvergenceTable convergence_run(const ReductionProblem<G>& problem, const Grid& grid,
                                 int ell_max, double conv_tol = 1e-10) {
  if (ell_max < 1) throw std::invalid_argument("convergence_run: need ell_max >= 1");
  if (!(conv_tol > 0.0))
    throw std::invalid_argument("convergence_run: need conv_tol > 0");
  ConvergenceTable table;
  ReductionState state = initial_state(problem);
  double fitted = 0.0;
  for (int ell = 1; ell <= ell_max; ++ell) {
    const std::vector<Complex> tail = sample_tail(problem, state, grid);
    const double err = sup_norm(tail);
    double max_q = 0.0;
    for (const Complex& z : state.q) max_q = std::max(max_q, std::abs(z));
    fitted = std::max(fitted, std::pow(max_q, 1.0 / static_cast<double>(ell)));
    table.rows.push_back(ConvergenceRow{ell, err, max_q, fitted, "ok"});
    if (ell == ell_max) break;
    try {
      advance(problem, state);
    } catch (const CoefficientOverflow&) {
      table.status = "overflow";
      return table;
    }
  }
  const std::size_t base_index = std::min<std::size_t>(2, table.rows.size()) - 1;
  const double err_base = table.rows[base_index].err_sup;
  const double err_final = table.rows.back().err_sup;
  if (err_final <= conv_tol)
    table.status = "converged";
  else if (err_final >= 2.0 * err_base)
    table.status = "no-convergence";
  else
    table.status = "inconclusive";
  return table;
}

// ---------------------------------------------------------------------------
// Symbolic / numeric cross-check
// ---------------------------------------------------------------------------

/// Largest deviation between the symbolic family evaluated at c and the
/// iterated coefficients, relative to max(1, max_j |q_j|).
inline double poly_vs_coeff_consistency(int n, int ell, std::span<const Complex> c,
                                        std::size_t term_cap = kDefaultTermCap) {
  if (n < 1 || static_cast<std::size_t>(n) != c.size())
    throw std::invalid_argument("poly_vs_coeff_consistency: c must have n entries");
  if (ell < 1) throw std::invalid_argument("poly_vs_coeff_consistency: need ell >= 1");
  const std::vector<MultiPoly> fam = poly_family(n, ell, term_cap);
  std::vector<Complex> q(c.begin(), c.end());
  for (int l = 1; l < ell; ++l) q = coeff_step(q, c);
  double scale = 1.0;
  for (const Complex& z : q) scale = std::max(scale, std::abs(z));
  double worst = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j)
    worst = std::max(worst, std::abs(fam[j].evaluate(c) - q[j]));
  return worst / scale;
}

}  // namespace translab
