#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "translab/envelope.hpp"
#include "translab/serialize.hpp"

namespace translab {

using GeneratorVariant = std::variant<PolyGaussianGenerator, TabulatedGenerator>;

/// Parsed and validated experiment description. Every cross-field invariant
/// the engines rely on is checked during parsing, so execution failures are
/// genuine engine conditions rather than malformed input.
struct ExperimentConfig {
  std::string command;
  std::string output_base;

  std::optional<TranslationSet> lambda;
  std::optional<GeneratorVariant> generator;
  std::optional<Grid> grid;

  // approx
  std::vector<std::size_t> sizes;
  std::vector<std::string> targets;
  double cutoff = 1e-12;
  double p = 2.0;
  std::optional<TranslationSet> probes;

  // reduce
  double a = 1.0;
  double b = 0.0;
  std::vector<Complex> d;
  long m0 = 0;
  int ell_max = 1;
  double conv_tol = 1e-10;

  // polys
  int poly_n = 1;
  int poly_ell = 1;
  std::size_t poly_term_cap = kDefaultTermCap;
};

namespace detail {

inline const std::set<std::string> kTargetNames = {"sin3t", "t", "t2", "bump",
                                                   "member"};

inline void check_keys(const nlohmann::json& obj, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw std::invalid_argument(where + ": unexpected key '" + item.key() + "'");
}

inline const nlohmann::json& get_field(const nlohmann::json& obj,
                                       const std::string& where,
                                       const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw std::invalid_argument(where + ": missing key '" + key + "'");
  return *it;
}

inline double as_real(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number())
    throw std::invalid_argument(where + ": expected a number");
  return v.get<double>();
}

inline double real_field(const nlohmann::json& obj, const std::string& where,
                         const std::string& key) {
  return as_real(get_field(obj, where, key), where + "." + key);
}

inline double real_field_or(const nlohmann::json& obj, const std::string& where,
                            const std::string& key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_real(*it, where + "." + key);
}

inline long int_field(const nlohmann::json& obj, const std::string& where,
                      const std::string& key) {
  const nlohmann::json& v = get_field(obj, where, key);
  if (!v.is_number_integer())
    throw std::invalid_argument(where + "." + key + ": expected an integer");
  return v.get<long>();
}

inline long int_field_or(const nlohmann::json& obj, const std::string& where,
                         const std::string& key, long fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer())
    throw std::invalid_argument(where + "." + key + ": expected an integer");
  return it->get<long>();
}

/// A complex entry is either a plain number or a [re, im] pair.
inline Complex as_complex(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  throw std::invalid_argument(where + ": expected a number or [re, im] pair");
}

inline std::vector<Complex> complex_list(const nlohmann::json& v,
                                         const std::string& where) {
  if (!v.is_array() || v.empty())
    throw std::invalid_argument(where + ": expected a nonempty array");
  std::vector<Complex> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_complex(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> real_list(const nlohmann::json& v,
                                     const std::string& where) {
  if (!v.is_array() || v.empty())
    throw std::invalid_argument(where + ": expected a nonempty array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_real(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline TranslationSet parse_lambda(const nlohmann::json& j, const std::string& where) {
  check_keys(j, where, {"kind", "values", "a", "b", "k_min", "k_max", "ratio",
                        "count", "scale", "exponent"});
  const nlohmann::json& kind_v = get_field(j, where, "kind");
  if (!kind_v.is_string())
    throw std::invalid_argument(where + ".kind: expected a string");
  const std::string kind = kind_v.get<std::string>();
  if (kind == "explicit") {
    check_keys(j, where, {"kind", "values"});
    return TranslationSet::explicit_set(real_list(get_field(j, where, "values"),
                                                  where + ".values"));
  }
  if (kind == "arithmetic") {
    check_keys(j, where, {"kind", "a", "b", "k_min", "k_max"});
    return TranslationSet::arithmetic(real_field(j, where, "a"),
                                      real_field(j, where, "b"),
                                      int_field(j, where, "k_min"),
                                      int_field(j, where, "k_max"));
  }
  if (kind == "lacunary") {
    check_keys(j, where, {"kind", "ratio", "count", "scale"});
    return TranslationSet::lacunary(real_field(j, where, "ratio"),
                                    static_cast<int>(int_field(j, where, "count")),
                                    real_field_or(j, where, "scale", 1.0));
  }
  if (kind == "power") {
    check_keys(j, where, {"kind", "exponent", "count", "scale"});
    return TranslationSet::power(real_field(j, where, "exponent"),
                                 static_cast<int>(int_field(j, where, "count")),
                                 real_field_or(j, where, "scale", 1.0));
  }
  throw std::invalid_argument(where + ".kind: unknown family '" + kind + "'");
}

inline GeneratorVariant parse_generator(const nlohmann::json& j,
                                        const std::string& where) {
  const nlohmann::json& kind_v = get_field(j, where, "kind");
  if (!kind_v.is_string())
    throw std::invalid_argument(where + ".kind: expected a string");
  const std::string kind = kind_v.get<std::string>();
  if (kind == "poly_gaussian") {
    check_keys(j, where, {"kind", "alpha", "c"});
    return PolyGaussianGenerator(
        complex_list(get_field(j, where, "alpha"), where + ".alpha"),
        real_field(j, where, "c"));
  }
  if (kind == "tabulated") {
    check_keys(j, where, {"kind", "x0", "dx", "values"});
    return TabulatedGenerator(real_field(j, where, "x0"), real_field(j, where, "dx"),
                              complex_list(get_field(j, where, "values"),
                                           where + ".values"));
  }
  throw std::invalid_argument(where + ".kind: unknown generator '" + kind + "'");
}

inline Grid parse_interval(const nlohmann::json& j, const std::string& where) {
  check_keys(j, where, {"lo", "hi", "points"});
  const long points = int_field(j, where, "points");
  if (points < 2) throw std::invalid_argument(where + ".points: need at least 2");
  return make_grid(Interval(real_field(j, where, "lo"), real_field(j, where, "hi")),
                   static_cast<std::size_t>(points));
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::check_keys;
  using detail::get_field;

  if (!j.is_object())
    throw std::invalid_argument("config: expected a JSON object");
  const nlohmann::json& version = get_field(j, "config", "schema_version");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
    throw std::invalid_argument("config.schema_version: expected the string \"" +
                                std::string(kSchemaVersion) + "\"");
  const nlohmann::json& command_v = get_field(j, "config", "command");
  if (!command_v.is_string())
    throw std::invalid_argument("config.command: expected a string");

  ExperimentConfig cfg;
  cfg.command = command_v.get<std::string>();

  std::set<std::string> allowed = {"schema_version", "command", "output"};
  if (cfg.command == "classify") {
    allowed.insert("lambda");
  } else if (cfg.command == "approx") {
    allowed.insert({"lambda", "generator", "interval", "approx"});
  } else if (cfg.command == "reduce") {
    allowed.insert({"generator", "interval", "reduce"});
  } else if (cfg.command == "polys") {
    allowed.insert("polys");
  } else {
    throw std::invalid_argument("config.command: unknown command '" + cfg.command + "'");
  }
  check_keys(j, "config", allowed);

  cfg.output_base = cfg.command;
  if (auto it = j.find("output"); it != j.end()) {
    if (!it->is_string() || it->get<std::string>().empty())
      throw std::invalid_argument("config.output: expected a nonempty string");
    cfg.output_base = it->get<std::string>();
    if (cfg.output_base.find('/') != std::string::npos ||
        cfg.output_base.find('\\') != std::string::npos)
      throw std::invalid_argument("config.output: must be a bare file stem");
  }

  if (cfg.command == "classify" || cfg.command == "approx")
    cfg.lambda = detail::parse_lambda(get_field(j, "config", "lambda"), "config.lambda");
  if (cfg.command == "approx" || cfg.command == "reduce") {
    cfg.generator = detail::parse_generator(get_field(j, "config", "generator"),
                                            "config.generator");
    cfg.grid = detail::parse_interval(get_field(j, "config", "interval"),
                                      "config.interval");
  }

  if (cfg.command == "approx") {
    const nlohmann::json& section = get_field(j, "config", "approx");
    check_keys(section, "config.approx",
               {"sizes", "targets", "cutoff", "p", "probes"});
    const nlohmann::json& sizes = get_field(section, "config.approx", "sizes");
    if (!sizes.is_array() || sizes.empty())
      throw std::invalid_argument("config.approx.sizes: expected a nonempty array");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (!sizes[i].is_number_integer() || sizes[i].get<long>() < 1)
        throw std::invalid_argument("config.approx.sizes: entries must be positive integers");
      const auto k = static_cast<std::size_t>(sizes[i].get<long>());
      if (k > cfg.lambda->size())
        throw std::invalid_argument("config.approx.sizes: entry exceeds the family size");
      if (i > 0 && k <= cfg.sizes.back())
        throw std::invalid_argument("config.approx.sizes: must be strictly increasing");
      cfg.sizes.push_back(k);
    }
    cfg.targets = {"sin3t", "t2", "bump", "member"};
    if (auto it = section.find("targets"); it != section.end()) {
      if (!it->is_array() || it->empty())
        throw std::invalid_argument("config.approx.targets: expected a nonempty array");
      cfg.targets.clear();
      for (const nlohmann::json& name : *it) {
        if (!name.is_string() || !detail::kTargetNames.count(name.get<std::string>()))
          throw std::invalid_argument(
              "config.approx.targets: unknown target (choose from sin3t, t, t2, bump, member)");
        if (std::find(cfg.targets.begin(), cfg.targets.end(),
                      name.get<std::string>()) != cfg.targets.end())
          throw std::invalid_argument("config.approx.targets: duplicate target");
        cfg.targets.push_back(name.get<std::string>());
      }
    }
    cfg.cutoff = detail::real_field_or(section, "config.approx", "cutoff", 1e-12);
    if (!(cfg.cutoff > 0.0) || !(cfg.cutoff < 1.0))
      throw std::invalid_argument("config.approx.cutoff: must lie in (0, 1)");
    cfg.p = detail::real_field_or(section, "config.approx", "p", 2.0);
    if (!(cfg.p >= 1.0))
      throw std::invalid_argument("config.approx.p: need p >= 1");
    if (auto it = section.find("probes"); it != section.end()) {
      cfg.probes = TranslationSet::explicit_set(
          detail::real_list(*it, "config.approx.probes"));
      for (double probe : cfg.probes->values())
        for (double lambda : cfg.lambda->values())
          if (probe == lambda)
            throw std::invalid_argument(
                "config.approx.probes: probe coincides with a family value");
      if (cfg.grid->size() <= cfg.lambda->size())
        throw std::invalid_argument(
            "config.approx: annihilator probing needs more grid points than translates");
    }
  }

  if (cfg.command == "reduce") {
    const nlohmann::json& section = get_field(j, "config", "reduce");
    check_keys(section, "config.reduce", {"a", "b", "d", "m0", "ell_max", "conv_tol"});
    cfg.a = detail::real_field(section, "config.reduce", "a");
    cfg.b = detail::real_field(section, "config.reduce", "b");
    if (cfg.a == 0.0 || !std::isfinite(cfg.a) || !std::isfinite(cfg.b))
      throw std::invalid_argument("config.reduce: need finite a != 0 and finite b");
    cfg.d = detail::complex_list(get_field(section, "config.reduce", "d"),
                                 "config.reduce.d");
    if (cfg.d.size() < 2)
      throw std::invalid_argument("config.reduce.d: need at least two coefficients");
    if (cfg.d[0] == Complex(0.0))
      throw std::invalid_argument("config.reduce.d: leading coefficient must be nonzero");
    cfg.m0 = detail::int_field_or(section, "config.reduce", "m0", 0);
    const long ell_max = detail::int_field(section, "config.reduce", "ell_max");
    if (ell_max < 1 || ell_max > 100000)
      throw std::invalid_argument("config.reduce.ell_max: out of range");
    cfg.ell_max = static_cast<int>(ell_max);
    cfg.conv_tol = detail::real_field_or(section, "config.reduce", "conv_tol", 1e-10);
    if (!(cfg.conv_tol > 0.0))
      throw std::invalid_argument("config.reduce.conv_tol: need a positive tolerance");
  }

  if (cfg.command == "polys") {
    const nlohmann::json& section = get_field(j, "config", "polys");
    check_keys(section, "config.polys", {"n", "ell", "term_cap"});
    const long n = detail::int_field(section, "config.polys", "n");
    const long ell = detail::int_field(section, "config.polys", "ell");
    if (n < 1 || n > 64) throw std::invalid_argument("config.polys.n: out of range");
    if (ell < 1 || ell > 4096)
      throw std::invalid_argument("config.polys.ell: out of range");
    cfg.poly_n = static_cast<int>(n);
    cfg.poly_ell = static_cast<int>(ell);
    const long cap = detail::int_field_or(section, "config.polys", "term_cap",
                                          static_cast<long>(kDefaultTermCap));
    if (cap < 1)
      throw std::invalid_argument("config.polys.term_cap: need a positive cap");
    cfg.poly_term_cap = static_cast<std::size_t>(cap);
  }

  return cfg;
}

// ---------------------------------------------------------------------------
// Target construction
// ---------------------------------------------------------------------------

template <Generator G>
std::vector<Complex> make_target(const std::string& name, const G& g,
                                 const Grid& grid, const TranslationSet& family) {
  std::vector<Complex> out;
  out.reserve(grid.size());
  if (name == "sin3t") {
    for (double t : grid.points) out.emplace_back(std::sin(3.0 * t), 0.0);
  } else if (name == "t") {
    for (double t : grid.points) out.emplace_back(t, 0.0);
  } else if (name == "t2") {
    for (double t : grid.points) out.emplace_back(t * t, 0.0);
  } else if (name == "bump") {
    // smooth bump supported on the interval interior, peak 1 at the center
    const double mid = grid.interval.midpoint();
    const double half = 0.5 * grid.interval.length();
    for (double t : grid.points) {
      const double u = (t - mid) / half;
      out.emplace_back(std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0,
                       0.0);
    }
  } else if (name == "member") {
    const double lambda = family.values().front();
    for (double t : grid.points) out.push_back(g(t - lambda));
  } else {
    throw std::invalid_argument("make_target: unknown target '" + name + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace detail {

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open output file: " + path.string());
  os << content;
  os.flush();
  if (!os) throw Error("failed writing output file: " + path.string());
}

inline void emit(const std::filesystem::path& path, const std::string& content,
                 std::ostream& diag) {
  write_text_file(path, content);
  diag << "wrote " << path.string() << "\n";
}

}  // namespace detail

/// Executes a validated experiment, writing reports into out_dir.
inline void execute(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                    std::ostream& diag) {
  if (cfg.command == "classify") {
    const ClassificationReport report = classify(*cfg.lambda);
    detail::emit(out_dir / (cfg.output_base + ".json"),
                 classification_to_json(report).dump(2) + "\n", diag);
    return;
  }

  if (cfg.command == "approx") {
    std::visit(
        [&](const auto& g) {
          std::vector<NamedTarget> targets;
          targets.reserve(cfg.targets.size());
          for (const std::string& name : cfg.targets)
            targets.push_back({name, make_target(name, g, *cfg.grid, *cfg.lambda)});
          const std::vector<SweepRow> rows =
              completeness_sweep(g, *cfg.grid, *cfg.lambda, cfg.sizes, targets,
                                 cfg.cutoff, cfg.p);
          std::ostringstream csv;
          write_sweep_csv(csv, rows);
          detail::emit(out_dir / (cfg.output_base + ".csv"), csv.str(), diag);
          if (cfg.probes) {
            const SampledDictionary dict = build_dictionary(g, *cfg.grid, *cfg.lambda);
            const AnnihilatorResult res = annihilator_margin(dict, *cfg.probes);
            detail::emit(out_dir / (cfg.output_base + "_annihilator.json"),
                         annihilator_to_json(res, *cfg.probes).dump(2) + "\n", diag);
          }
        },
        *cfg.generator);
    return;
  }

  if (cfg.command == "reduce") {
    std::visit(
        [&](const auto& g) {
          const auto problem =
              make_reduction_problem(g, cfg.a, cfg.b, cfg.d, cfg.m0);
          const ConvergenceTable table =
              convergence_run(problem, *cfg.grid, cfg.ell_max, cfg.conv_tol);
          std::ostringstream csv;
          write_convergence_csv(csv, table);
          detail::emit(out_dir / (cfg.output_base + ".csv"), csv.str(), diag);
          detail::emit(out_dir / (cfg.output_base + ".json"),
                       convergence_summary_to_json(table).dump(2) + "\n", diag);
        },
        *cfg.generator);
    return;
  }

  if (cfg.command == "polys") {
    const std::vector<MultiPoly> family =
        poly_family(cfg.poly_n, cfg.poly_ell, cfg.poly_term_cap);
    std::ostringstream listing;
    write_poly_listing(listing, cfg.poly_n, cfg.poly_ell, family);
    detail::emit(out_dir / (cfg.output_base + ".txt"), listing.str(), diag);
    return;
  }

  throw Error("execute: unhandled command '" + cfg.command + "'");
}

/// Full run: validate, then execute. Exit codes: 0 success, 1 engine error,
/// 2 invalid configuration. Failures print a machine-readable error JSON.
inline int run(const nlohmann::json& config, const std::string& expected_command,
               const std::filesystem::path& out_dir, std::ostream& diag) {
  std::optional<ExperimentConfig> cfg;
  try {
    cfg = parse_config(config);
    if (!expected_command.empty() && cfg->command != expected_command)
      throw std::invalid_argument("config.command: '" + cfg->command +
                                  "' does not match the invoked subcommand '" +
                                  expected_command + "'");
  } catch (const std::invalid_argument& e) {
    diag << error_to_json("config", e.what()).dump(2) << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    diag << error_to_json("config", e.what()).dump(2) << "\n";
    return 2;
  }
  try {
    std::filesystem::create_directories(out_dir);
    execute(*cfg, out_dir, diag);
    return 0;
  } catch (const Error& e) {
    diag << error_to_json("engine", e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    diag << error_to_json("internal", e.what()).dump(2) << "\n";
    return 1;
  }
}

/// Convenience entry point for a config on disk.
inline int run_config_file(const std::filesystem::path& config_path,
                           const std::string& expected_command,
                           const std::filesystem::path& out_dir, std::ostream& diag) {
  nlohmann::json config;
  try {
    std::ifstream is(config_path);
    if (!is)
      throw std::invalid_argument("cannot read config file: " + config_path.string());
    config = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    diag << error_to_json("config", e.what()).dump(2) << "\n";
    return 2;
  }
  return run(config, expected_command, out_dir, diag);
}

}  // namespace translab
