#pragma once

#include <charconv>
#include <json.hpp>
#include <ostream>

#include "translab/dictionary.hpp"
#include "translab/lambda_sets.hpp"
#include "translab/multipoly.hpp"
#include "translab/reduction.hpp"

namespace translab {

inline constexpr const char* kSchemaVersion = "1";

/// Locale-independent decimal rendering with 17 significant digits, enough to
/// round-trip any double. Infinities and NaN print as inf/-inf/nan.
inline std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 17);
  if (ec != std::errc())
    throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "target,K,residual_sup,residual_lp,p,coeff_norm,effective_rank,status\n";
  for (const SweepRow& r : rows) {
    os << r.target << ',' << r.k << ',' << format_real(r.residual_sup) << ','
       << format_real(r.residual_lp) << ',' << format_real(r.p) << ','
       << format_real(r.coeff_norm) << ',' << r.effective_rank << ',' << r.status
       << '\n';
  }
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "ell,err_sup,max_q,fitted_C,status\n";
  for (const ConvergenceRow& r : table.rows) {
    os << r.ell << ',' << format_real(r.err_sup) << ',' << format_real(r.max_q)
       << ',' << format_real(r.fitted_c) << ',' << r.status << '\n';
  }
}

// ---------------------------------------------------------------------------
// Polynomial listings
// ---------------------------------------------------------------------------

inline void write_poly_listing(std::ostream& os, int n, int ell,
                               std::span<const MultiPoly> family) {
  os << "n = " << n << '\n';
  os << "ell = " << ell << '\n';
  for (std::size_t j = 0; j < family.size(); ++j)
    os << "p_" << (j + 1) << " = " << family[j].to_string() << '\n';
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

inline nlohmann::json classification_to_json(const ClassificationReport& report) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"family", report.family},
                        {"verdict", to_string(report.verdict)},
                        {"partial_sums", report.partial_sums},
                        {"blaschke_plus", report.blaschke_plus},
                        {"blaschke_minus", report.blaschke_minus}};
}

inline nlohmann::json annihilator_to_json(const AnnihilatorResult& result,
                                          const TranslationSet& probes) {
  nlohmann::json weights = nlohmann::json::array();
  for (Eigen::Index i = 0; i < result.weights.size(); ++i)
    weights.push_back({result.weights(i).real(), result.weights(i).imag()});
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"margin", result.margin},
                        {"probe_max", result.probe_max},
                        {"probes", probes.values()},
                        {"probe_responses", result.probe_responses},
                        {"weights", weights}};
}

inline nlohmann::json convergence_summary_to_json(const ConvergenceTable& table) {
  nlohmann::json summary{{"schema_version", kSchemaVersion},
                         {"status", table.status},
                         {"levels", table.rows.size()}};
  if (!table.rows.empty()) {
    summary["final_err_sup"] = table.rows.back().err_sup;
    summary["fitted_C"] = table.rows.back().fitted_c;
  }
  return summary;
}

inline nlohmann::json error_to_json(const std::string& type, const std::string& message) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"error", {{"type", type}, {"message", message}}}};
}

}  // namespace translab
