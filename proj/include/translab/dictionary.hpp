#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>

#include "translab/core.hpp"
#include "translab/lambda_sets.hpp"

namespace translab {

// ---------------------------------------------------------------------------
// Scaled translate columns
// ---------------------------------------------------------------------------

/// A translate sampled on a grid and divided by its sup-norm sample. The raw
/// column is e^{log_scale} times `values`; keeping the scale in log form lets
/// far translates through whose raw samples underflow double precision.
struct ScaledColumn {
  std::vector<Complex> values;  // sup-norm sample equals 1
  double log_scale;
};

/// Generic path: sample f(t_i - lambda) directly and normalize. Columns that
/// vanish at every node are an error (the translate has left the window the
/// generator can resolve).
template <Generator G>
ScaledColumn scaled_translate_column(const G& g, const Grid& grid, double lambda) {
  std::vector<Complex> v;
  v.reserve(grid.size());
  double m = 0.0;
  for (double t : grid.points) {
    v.push_back(g(t - lambda));
    m = std::max(m, std::abs(v.back()));
  }
  if (m == 0.0)
    throw ZeroColumnError("translate column is zero at every grid node (lambda = " +
                          std::to_string(lambda) + ")");
  for (Complex& z : v) z /= m;
  return ScaledColumn{std::move(v), std::log(m)};
}

/// Structure-aware overload: |q(s) e^{-c s^2}| is assembled in log space so
/// the scaled column stays meaningful for translates whose raw samples are
/// far below the double underflow threshold.
inline ScaledColumn scaled_translate_column(const PolyGaussianGenerator& g,
                                            const Grid& grid, double lambda) {
  const std::size_t m = grid.size();
  std::vector<Complex> qv(m);
  std::vector<double> log_mag(m);
  double log_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double s = grid.points[i] - lambda;
    qv[i] = g.poly_at(s);
    const double aq = std::abs(qv[i]);
    log_mag[i] = aq == 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::log(aq) + g.gauss_exponent(s);
    log_max = std::max(log_max, log_mag[i]);
  }
  if (log_max == -std::numeric_limits<double>::infinity())
    throw ZeroColumnError("translate column is zero at every grid node (lambda = " +
                          std::to_string(lambda) + ")");
  std::vector<Complex> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double aq = std::abs(qv[i]);
    if (aq == 0.0) {
      v[i] = Complex(0.0);
      continue;
    }
    const double arg = g.gauss_exponent(grid.points[i] - lambda) - log_max;
    // q_i e^{arg} can overflow transiently when |q_i| is tiny; route those
    // few entries through the phase to keep the product below 1.
    if (arg <= 500.0)
      v[i] = qv[i] * std::exp(arg);
    else
      v[i] = (qv[i] / aq) * std::exp(log_mag[i] - log_max);
  }
  return ScaledColumn{std::move(v), log_max};
}

// ---------------------------------------------------------------------------
// Sampled dictionaries
// ---------------------------------------------------------------------------

/// Translate dictionary sampled on a grid, one scaled column per lambda.
struct SampledDictionary {
  Grid grid;
  TranslationSet lambdas;
  Eigen::MatrixXcd columns;            // M x K, each column sup-norm-sampled to 1
  std::vector<double> column_log_scales;  // raw column k = e^{scale_k} * column k

  // Samples further scaled translate columns of the same generator, for
  // probes and diagnostics that must stay consistent with the dictionary.
  std::function<ScaledColumn(const Grid&, double)> column_sampler;

  std::size_t rows() const { return static_cast<std::size_t>(columns.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(columns.cols()); }
};

template <Generator G>
SampledDictionary build_dictionary(const G& g, const Grid& grid,
                                   const TranslationSet& lambdas) {
  const std::size_t m = grid.size();
  const std::size_t k = lambdas.size();
  Eigen::MatrixXcd a(m, k);
  std::vector<double> log_scales(k);
  for (std::size_t col = 0; col < k; ++col) {
    ScaledColumn sc = scaled_translate_column(g, grid, lambdas.values()[col]);
    for (std::size_t i = 0; i < m; ++i) a(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(col)) = sc.values[i];
    log_scales[col] = sc.log_scale;
  }
  return SampledDictionary{
      grid, lambdas, std::move(a), std::move(log_scales),
      [g](const Grid& gr, double lambda) { return scaled_translate_column(g, gr, lambda); }};
}

// ---------------------------------------------------------------------------
// Best approximation by truncated SVD
// ---------------------------------------------------------------------------

struct ApproximationResult {
  Eigen::VectorXcd coefficients;  // in the unscaled translate basis
  double residual_sup;
  double residual_lp;
  double p;                 // exponent the L^p residual was computed with
  double coefficient_norm;  // Euclidean norm of `coefficients`
  int effective_rank;       // singular values kept by the cutoff
};

/// Least-squares fit of `target` by the dictionary columns. Singular values
/// below cutoff * sigma_max are discarded; cutoff must lie in (0, 1).
inline ApproximationResult best_approximation(const SampledDictionary& dict,
                                              std::span<const Complex> target,
                                              double cutoff, double p = 2.0) {
  if (!(cutoff > 0.0) || !(cutoff < 1.0))
    throw std::invalid_argument("best_approximation: cutoff must lie in (0, 1)");
  if (target.size() != dict.rows())
    throw std::invalid_argument("best_approximation: target length must match grid");
  if (!(p >= 1.0)) throw std::invalid_argument("best_approximation: need p >= 1");

  const auto m = static_cast<Eigen::Index>(dict.rows());
  const auto k = static_cast<Eigen::Index>(dict.cols());
  Eigen::VectorXcd b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = target[static_cast<std::size_t>(i)];

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dict.columns,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = cutoff * sigma_max;

  Eigen::VectorXcd projected = svd.matrixU().adjoint() * b;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(k);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) >= threshold) || sigma(i) == 0.0) break;
    y += (projected(i) / sigma(i)) * svd.matrixV().col(i);
    ++rank;
  }

  Eigen::VectorXcd residual = b - dict.columns * y;
  std::vector<Complex> rv(residual.data(), residual.data() + residual.size());

  ApproximationResult res;
  res.coefficients = Eigen::VectorXcd(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    // descale componentwise; exp may overflow to inf for far translates, and
    // 0 * inf must stay 0, not become NaN
    const double f = std::exp(-dict.column_log_scales[static_cast<std::size_t>(j)]);
    const auto unscale = [f](double v) { return v == 0.0 ? 0.0 : v * f; };
    res.coefficients(j) = Complex(unscale(y(j).real()), unscale(y(j).imag()));
  }
  res.residual_sup = sup_norm(rv);
  res.residual_lp = lp_norm(rv, p, dict.grid.step);
  res.p = p;
  res.coefficient_norm = res.coefficients.norm();
  res.effective_rank = rank;
  return res;
}

// ---------------------------------------------------------------------------
// Completeness sweeps
// ---------------------------------------------------------------------------

struct NamedTarget {
  std::string name;
  std::vector<Complex> samples;
};

struct SweepRow {
  std::string target;
  std::size_t k;
  double residual_sup;
  double residual_lp;
  double p;
  double coeff_norm;
  int effective_rank;
  std::string status;  // "ok" or "skipped:<reason>"
};

/// Residuals for each target across growing prefixes of the family. A prefix
/// whose dictionary cannot be built (a column vanishes at every node) yields
/// a skipped row rather than aborting the sweep.
template <Generator G>
std::vector<SweepRow> completeness_sweep(const G& g, const Grid& grid,
                                         const TranslationSet& family,
                                         std::span<const std::size_t> sizes,
                                         std::span<const NamedTarget> targets,
                                         double cutoff, double p = 2.0) {
  if (sizes.empty()) throw std::invalid_argument("completeness_sweep: no sizes");
  if (targets.empty()) throw std::invalid_argument("completeness_sweep: no targets");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i] > family.size())
      throw std::invalid_argument("completeness_sweep: size out of range");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("completeness_sweep: sizes must be increasing");
  }
  for (const NamedTarget& t : targets)
    if (t.samples.size() != grid.size())
      throw std::invalid_argument("completeness_sweep: target length must match grid");

  std::vector<SweepRow> rows;
  rows.reserve(sizes.size() * targets.size());
  for (const NamedTarget& t : targets) {
    for (std::size_t k : sizes) {
      SweepRow row;
      row.target = t.name;
      row.k = k;
      row.p = p;
      try {
        SampledDictionary dict = build_dictionary(g, grid, family.prefix(k));
        ApproximationResult res = best_approximation(dict, t.samples, cutoff, p);
        row.residual_sup = res.residual_sup;
        row.residual_lp = res.residual_lp;
        row.coeff_norm = res.coefficient_norm;
        row.effective_rank = res.effective_rank;
        row.status = "ok";
      } catch (const ZeroColumnError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.residual_sup = nan;
        row.residual_lp = nan;
        row.coeff_norm = nan;
        row.effective_rank = 0;
        row.status = "skipped:zero-column";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Annihilator surrogate
// ---------------------------------------------------------------------------

struct AnnihilatorResult {
  Eigen::VectorXcd weights;            // unit Euclidean norm, length M
  double margin;                       // min over unit w of |A^T w|_2
  double probe_max;                    // max response over the probe columns
  std::vector<double> probe_responses; // |sum_i w_i s_i(probe)| per probe
};

/// Finds the unit weight vector least visible to the dictionary columns:
/// margin = min_{|w|_2 = 1} |A^T w|_2, attained at the conjugate of a left
/// null direction. Probe responses measure whether the annihilator also kills
/// translates outside the dictionary; probes are sampled with the same
/// sup-norm scaling as the columns.
inline AnnihilatorResult annihilator_margin(const SampledDictionary& dict,
                                            const TranslationSet& probes) {
  const std::size_t m = dict.rows();
  const std::size_t k = dict.cols();
  if (m <= k)
    throw std::invalid_argument(
        "annihilator_margin: need more grid nodes than dictionary columns");
  if (!dict.column_sampler)
    throw std::invalid_argument("annihilator_margin: dictionary has no column sampler");
  for (double probe : probes.values())
    for (double lambda : dict.lambdas.values())
      if (probe == lambda)
        throw std::invalid_argument(
            "annihilator_margin: probe coincides with a dictionary translate");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dict.columns, Eigen::ComputeFullU);
  const Eigen::VectorXcd u = svd.matrixU().col(static_cast<Eigen::Index>(m) - 1);
  Eigen::VectorXcd w = u.conjugate();

  AnnihilatorResult res;
  res.weights = w;
  res.margin = (dict.columns.transpose() * w).norm();
  res.probe_responses.reserve(probes.size());
  double pm = 0.0;
  for (double probe : probes.values()) {
    const ScaledColumn sc = dict.column_sampler(dict.grid, probe);
    Complex acc(0.0);
    for (std::size_t i = 0; i < m; ++i)
      acc += w(static_cast<Eigen::Index>(i)) * sc.values[i];
    const double response = std::abs(acc);
    res.probe_responses.push_back(response);
    pm = std::max(pm, response);
  }
  res.probe_max = pm;
  return res;
}

}  // namespace translab
