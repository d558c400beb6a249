#ifndef SEMILOCAL_CLI_REPORTING_HPP_
#define SEMILOCAL_CLI_REPORTING_HPP_

// Scenario files, run reports, CSV traces and the built-in example table.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "semilocal/equality.hpp"
#include "semilocal/exact_formulas.hpp"
#include "semilocal/fixtures.hpp"
#include "json.hpp"

#ifndef SEMILOCAL_VERSION
#define SEMILOCAL_VERSION "0.0.0"
#endif

namespace semilocal {

using Json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;

/// Malformed scenario document; the message names the offending field or line.
class ScenarioError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

using RowMatrix = std::vector<std::vector<double>>;

struct FunctionSpec {
  std::string kind = "sin";  ///< sin | cos | polynomial
  std::vector<double> coefficients;
  bool operator==(const FunctionSpec&) const = default;
};

struct FamilySpec {
  std::string kind;
  int rows = 0;
  int n = 0;
  int dim = 0;
  int parameter_dim = 1;
  RowMatrix fixed_A;
  std::vector<double> fixed_b;
  RowMatrix Q, A;
  int grid_points = 201;
  FunctionSpec function;
  std::vector<double> domain;
  std::vector<double> point;
  std::string parameter_norm = "chebyshev";
  std::string image_norm = "euclidean";
  RowMatrix probe_directions;
  bool operator==(const FamilySpec&) const = default;
};

struct ScheduleSpec {
  double r0 = 0.1;
  double ratio = 0.5;
  int levels = 12;
  int samples = 256;
  std::uint64_t seed = 0;
  int window = 3;
  double growth_factor = 1.5;
  double stabilization_tol = 0.02;
  double localization_radius_factor = 10.0;
  int threads = 1;
  bool operator==(const ScheduleSpec&) const = default;
};

inline const std::vector<std::string>& analysis_kinds() {
  static const std::vector<std::string> k{"lipusc",         "calmness",   "sup_calmness",   "exact_qp",
                                          "exact_sublevel", "hypotheses", "verify_equality"};
  return k;
}

struct AnalysisRequest {
  std::string kind;
  std::vector<double> x;     ///< calmness reference point
  RowMatrix points;          ///< sup_calmness / verify_equality probe points (empty: automatic)
  std::string operator_norm = "spectral";
  double rel_tol = 0.03;
  bool operator==(const AnalysisRequest&) const = default;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string id = "scenario";
  FamilySpec family;
  std::vector<double> nominal;
  ScheduleSpec schedule;
  std::vector<AnalysisRequest> analyses;
  std::string out_dir;
  bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------
// Conversions

namespace detail {

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> from_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Matrix to_matrix(const RowMatrix& rows, Eigen::Index cols_if_empty = 0) {
  if (rows.empty()) return Matrix(0, cols_if_empty);
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ScenarioError("ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return M;
}

inline NormKind norm_from_string(const std::string& s, const std::string& field) {
  if (s == "chebyshev") return NormKind::chebyshev;
  if (s == "euclidean") return NormKind::euclidean;
  throw ScenarioError("field '" + field + "': unknown norm '" + s + "' (expected chebyshev or euclidean)");
}

}  // namespace detail

inline MappingFamily build_family(const FamilySpec& s) {
  MappingFamily f;
  FamilyKind kind;
  try {
    kind = family_kind_from_string(s.kind);
  } catch (const ArgumentError&) {
    throw ScenarioError("field 'family.kind': unknown family kind '" + s.kind + "'");
  }
  try {
    switch (kind) {
      case FamilyKind::lp_feasible:
      case FamilyKind::lp_optimal_full: {
        const Matrix FA = detail::to_matrix(s.fixed_A, s.n);
        const Vector Fb = detail::to_vector(s.fixed_b);
        f = kind == FamilyKind::lp_feasible ? make_lp_feasible(s.rows, s.n, FA, Fb)
                                            : make_lp_optimal_full(s.rows, s.n, FA, Fb);
        break;
      }
      case FamilyKind::qp_optimal_canonical: {
        const Matrix Q = detail::to_matrix(s.Q);
        f = make_qp_optimal_canonical(Q, detail::to_matrix(s.A, Q.cols()));
        break;
      }
      case FamilyKind::qp_kkt_full: f = make_qp_kkt_full(s.rows, s.n); break;
      case FamilyKind::lcp: f = make_lcp(s.n); break;
      case FamilyKind::sip_grid: f = make_sip_grid(s.n, s.grid_points); break;
      case FamilyKind::sublevel_1d: {
        if (s.domain.size() != 2) throw ScenarioError("field 'family.domain': expected [lo, hi]");
        ScalarFunction fn = ScalarFunction::sine();
        if (s.function.kind == "cos") {
          fn = ScalarFunction::cosine();
        } else if (s.function.kind == "polynomial") {
          fn = ScalarFunction::polynomial(s.function.coefficients);
        } else if (s.function.kind != "sin") {
          throw ScenarioError("field 'family.function.kind': unknown function '" + s.function.kind + "'");
        }
        f = make_sublevel_1d(fn, s.domain[0], s.domain[1]);
        break;
      }
      case FamilyKind::counterexample_sqrt:
      case FamilyKind::counterexample_jump:
      case FamilyKind::counterexample_escape: f = make_counterexample(kind); break;
      case FamilyKind::identity: f = make_identity(s.dim); break;
      case FamilyKind::constant_point: f = make_constant_point(detail::to_vector(s.point), s.parameter_dim); break;
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw ScenarioError(std::string("field 'family': ") + e.what());
  }
  f.norms.parameter_norm = detail::norm_from_string(s.parameter_norm, "family.norms.parameter");
  f.norms.image_norm = detail::norm_from_string(s.image_norm, "family.norms.image");
  for (std::size_t i = 0; i < s.probe_directions.size(); ++i) {
    if (static_cast<Eigen::Index>(s.probe_directions[i].size()) != f.parameter_dim) {
      throw ScenarioError("field 'family.probe_directions[" + std::to_string(i) + "]': expected " +
                          std::to_string(f.parameter_dim) + " values, got " +
                          std::to_string(s.probe_directions[i].size()));
    }
    f.probe_directions.push_back(detail::to_vector(s.probe_directions[i]));
  }
  return f;
}

inline RadiusSchedule build_schedule(const ScheduleSpec& s) {
  if (s.levels < 1) throw ScenarioError("field 'schedule.levels': must be at least 1");
  if (!(s.r0 > 0.0)) throw ScenarioError("field 'schedule.r0': must be positive");
  if (!(s.ratio > 0.0 && s.ratio < 1.0)) throw ScenarioError("field 'schedule.ratio': must lie in (0, 1)");
  if (s.threads < 1) throw ScenarioError("field 'schedule.threads': must be at least 1");
  RadiusSchedule r = RadiusSchedule::geometric(s.r0, s.ratio, s.levels, s.samples, s.seed);
  r.window = s.window;
  r.growth_factor = s.growth_factor;
  r.stabilization_tol = s.stabilization_tol;
  r.localization_radius_factor = s.localization_radius_factor;
  try {
    r.validate();
  } catch (const ArgumentError& e) {
    throw ScenarioError(std::string("field 'schedule': ") + e.what());
  }
  return r;
}

/// Cross-field checks: parameter length, point dimensions, analyses valid for the kind.
inline void validate(const Scenario& s) {
  if (s.schema_version != kScenarioSchemaVersion) {
    throw ScenarioError("field 'schema_version': unsupported version " + std::to_string(s.schema_version) +
                        " (expected " + std::to_string(kScenarioSchemaVersion) + ")");
  }
  if (s.id.empty()) throw ScenarioError("field 'id': must be nonempty");
  const MappingFamily f = build_family(s.family);
  build_schedule(s.schedule);
  if (static_cast<Eigen::Index>(s.nominal.size()) != f.parameter_dim) {
    throw ScenarioError("field 'nominal': expected " + std::to_string(f.parameter_dim) + " values for " + f.name() +
                        ", got " + std::to_string(s.nominal.size()));
  }
  for (std::size_t i = 0; i < s.analyses.size(); ++i) {
    const AnalysisRequest& a = s.analyses[i];
    const std::string field = "analyses[" + std::to_string(i) + "]";
    if (std::find(analysis_kinds().begin(), analysis_kinds().end(), a.kind) == analysis_kinds().end()) {
      throw ScenarioError("field '" + field + ".kind': unknown analysis '" + a.kind + "'");
    }
    if (a.kind == "calmness" && static_cast<Eigen::Index>(a.x.size()) != f.image_dim) {
      throw ScenarioError("field '" + field + ".x': expected " + std::to_string(f.image_dim) + " values, got " +
                          std::to_string(a.x.size()));
    }
    for (std::size_t j = 0; j < a.points.size(); ++j) {
      if (static_cast<Eigen::Index>(a.points[j].size()) != f.image_dim) {
        throw ScenarioError("field '" + field + ".points[" + std::to_string(j) + "]': expected " +
                            std::to_string(f.image_dim) + " values");
      }
    }
    if (a.kind == "exact_qp" && f.kind != FamilyKind::qp_optimal_canonical) {
      throw ScenarioError("field '" + field + ".kind': exact_qp needs family qp_optimal_canonical, not " + f.name());
    }
    if (a.kind == "exact_sublevel" && f.kind != FamilyKind::sublevel_1d) {
      throw ScenarioError("field '" + field + ".kind': exact_sublevel needs family sublevel_1d, not " + f.name());
    }
    if (a.kind == "exact_qp") {
      try {
        operator_norm_from_string(a.operator_norm);
      } catch (const ArgumentError& e) {
        throw ScenarioError("field '" + field + ".operator_norm': " + e.what());
      }
    }
    if (!(a.rel_tol > 0.0)) throw ScenarioError("field '" + field + ".rel_tol': must be positive");
  }
}

// ---------------------------------------------------------------------------
// JSON serialization of scenarios

inline Json scenario_to_json(const Scenario& s) {
  Json fam;
  const FamilySpec& F = s.family;
  fam["kind"] = F.kind;
  FamilyKind kind = FamilyKind::identity;
  try {
    kind = family_kind_from_string(F.kind);
  } catch (const ArgumentError&) {
  }
  switch (kind) {
    case FamilyKind::lp_feasible:
    case FamilyKind::lp_optimal_full:
      fam["rows"] = F.rows;
      fam["n"] = F.n;
      fam["fixed_A"] = F.fixed_A;
      fam["fixed_b"] = F.fixed_b;
      break;
    case FamilyKind::qp_optimal_canonical:
      fam["Q"] = F.Q;
      fam["A"] = F.A;
      break;
    case FamilyKind::qp_kkt_full:
      fam["rows"] = F.rows;
      fam["n"] = F.n;
      break;
    case FamilyKind::lcp: fam["n"] = F.n; break;
    case FamilyKind::sip_grid:
      fam["n"] = F.n;
      fam["grid_points"] = F.grid_points;
      break;
    case FamilyKind::sublevel_1d:
      fam["function"] = Json{{"kind", F.function.kind}, {"coefficients", F.function.coefficients}};
      fam["domain"] = F.domain;
      break;
    case FamilyKind::identity: fam["dim"] = F.dim; break;
    case FamilyKind::constant_point:
      fam["point"] = F.point;
      fam["parameter_dim"] = F.parameter_dim;
      break;
    default: break;
  }
  fam["norms"] = Json{{"parameter", F.parameter_norm}, {"image", F.image_norm}};
  fam["probe_directions"] = F.probe_directions;

  Json analyses = Json::array();
  for (const auto& a : s.analyses) {
    Json j{{"kind", a.kind}};
    if (a.kind == "calmness") j["x"] = a.x;
    if (a.kind == "sup_calmness" || a.kind == "verify_equality") j["points"] = a.points;
    if (a.kind == "exact_qp") j["operator_norm"] = a.operator_norm;
    if (a.kind == "verify_equality") j["rel_tol"] = a.rel_tol;
    analyses.push_back(std::move(j));
  }
  const ScheduleSpec& S = s.schedule;
  Json out{{"schema_version", s.schema_version},
           {"id", s.id},
           {"family", fam},
           {"nominal", s.nominal},
           {"schedule",
            {{"r0", S.r0},
             {"ratio", S.ratio},
             {"levels", S.levels},
             {"samples", S.samples},
             {"seed", S.seed},
             {"window", S.window},
             {"growth_factor", S.growth_factor},
             {"stabilization_tol", S.stabilization_tol},
             {"localization_radius_factor", S.localization_radius_factor},
             {"threads", S.threads}}},
           {"analyses", analyses}};
  if (!s.out_dir.empty()) out["out_dir"] = s.out_dir;
  return out;
}

namespace detail {

/// Typed access to JSON objects that rejects unknown keys and names the field on errors.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError("field '" + display() + "': expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  void mark(const std::string& key) { seen_.push_back(key); }

  template <class T>
  void get(const std::string& key, T& out, bool required = false) {
    seen_.push_back(key);
    if (!j_.contains(key)) {
      if (required) throw ScenarioError("field '" + field(key) + "': missing");
      return;
    }
    read(j_.at(key), field(key), out);
  }

  Reader child(const std::string& key) {
    seen_.push_back(key);
    if (!j_.contains(key)) throw ScenarioError("field '" + field(key) + "': missing");
    return Reader(j_.at(key), field(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        throw ScenarioError("field '" + field(it.key()) + "': unknown field");
      }
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  static void read(const Json& v, const std::string& f, double& out) {
    if (!v.is_number()) throw ScenarioError("field '" + f + "': expected a number");
    out = v.get<double>();
  }
  static void read(const Json& v, const std::string& f, int& out) {
    if (!v.is_number_integer()) throw ScenarioError("field '" + f + "': expected an integer");
    out = v.get<int>();
  }
  static void read(const Json& v, const std::string& f, std::uint64_t& out) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ScenarioError("field '" + f + "': expected a nonnegative integer");
    }
    out = v.get<std::uint64_t>();
  }
  static void read(const Json& v, const std::string& f, std::string& out) {
    if (!v.is_string()) throw ScenarioError("field '" + f + "': expected a string");
    out = v.get<std::string>();
  }
  static void read(const Json& v, const std::string& f, std::vector<double>& out) {
    if (!v.is_array()) throw ScenarioError("field '" + f + "': expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      double x = 0.0;
      read(v[i], f + "[" + std::to_string(i) + "]", x);
      out.push_back(x);
    }
  }
  static void read(const Json& v, const std::string& f, RowMatrix& out) {
    if (!v.is_array()) throw ScenarioError("field '" + f + "': expected an array of rows");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::vector<double> row;
      read(v[i], f + "[" + std::to_string(i) + "]", row);
      if (!out.empty() && row.size() != out.front().size()) {
        throw ScenarioError("field '" + f + "[" + std::to_string(i) + "]': row length differs from row 0");
      }
      out.push_back(std::move(row));
    }
  }

  const Json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  Scenario s;
  detail::Reader root(j, "");
  root.get("schema_version", s.schema_version, true);
  if (s.schema_version != kScenarioSchemaVersion) {
    throw ScenarioError("field 'schema_version': unsupported version " + std::to_string(s.schema_version));
  }
  root.get("id", s.id, true);
  {
    detail::Reader fam = root.child("family");
    FamilySpec& F = s.family;
    fam.get("kind", F.kind, true);
    fam.get("rows", F.rows);
    fam.get("n", F.n);
    fam.get("dim", F.dim);
    fam.get("parameter_dim", F.parameter_dim);
    fam.get("fixed_A", F.fixed_A);
    fam.get("fixed_b", F.fixed_b);
    fam.get("Q", F.Q);
    fam.get("A", F.A);
    fam.get("grid_points", F.grid_points);
    if (fam.has("function")) {
      detail::Reader fn = fam.child("function");
      fn.get("kind", F.function.kind, true);
      fn.get("coefficients", F.function.coefficients);
      fn.finish();
    }
    fam.get("domain", F.domain);
    fam.get("point", F.point);
    if (fam.has("norms")) {
      detail::Reader nr = fam.child("norms");
      nr.get("parameter", F.parameter_norm);
      nr.get("image", F.image_norm);
      nr.finish();
    }
    fam.get("probe_directions", F.probe_directions);
    fam.finish();
  }
  root.get("nominal", s.nominal, true);
  if (root.has("schedule")) {
    detail::Reader sch = root.child("schedule");
    ScheduleSpec& S = s.schedule;
    sch.get("r0", S.r0);
    sch.get("ratio", S.ratio);
    sch.get("levels", S.levels);
    sch.get("samples", S.samples);
    sch.get("seed", S.seed);
    sch.get("window", S.window);
    sch.get("growth_factor", S.growth_factor);
    sch.get("stabilization_tol", S.stabilization_tol);
    sch.get("localization_radius_factor", S.localization_radius_factor);
    sch.get("threads", S.threads);
    sch.finish();
  }
  if (j.contains("analyses")) {
    if (!j.at("analyses").is_array()) throw ScenarioError("field 'analyses': expected an array");
    for (std::size_t i = 0; i < j.at("analyses").size(); ++i) {
      detail::Reader ar(j.at("analyses")[i], "analyses[" + std::to_string(i) + "]");
      AnalysisRequest a;
      ar.get("kind", a.kind, true);
      ar.get("x", a.x);
      ar.get("points", a.points);
      ar.get("operator_norm", a.operator_norm);
      ar.get("rel_tol", a.rel_tol);
      ar.finish();
      s.analyses.push_back(std::move(a));
    }
  }
  root.mark("analyses");
  root.get("out_dir", s.out_dir);
  root.finish();
  validate(s);
  return s;
}

/// Parses scenario text; syntax errors report line and column.
inline Scenario parse_scenario(const std::string& text, const std::string& source = "scenario") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ScenarioError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ScenarioError& e) {
    throw ScenarioError(source + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_text_file(path), path); }

inline std::string serialize(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Reports

struct AnalysisResult {
  AnalysisRequest request;
  std::optional<ModulusEstimate> estimate;  ///< lipusc, calmness
  std::optional<CalmnessTable> table;       ///< sup_calmness
  std::optional<QpModulus> qp;
  std::optional<SublevelModulus> sublevel;
  std::optional<HypothesisVerdict> hypotheses;
  std::optional<EqualityReport> equality;
};

struct RunReport {
  Scenario scenario;
  std::vector<AnalysisResult> results;
  std::string version = SEMILOCAL_VERSION;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

inline RunReport run_scenario(const Scenario& s) {
  validate(s);
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.scenario = s;
  rep.seed = s.schedule.seed;
  const MappingFamily f = build_family(s.family);
  const RadiusSchedule sch = build_schedule(s.schedule);
  const Vector ybar = detail::to_vector(s.nominal);
  EstimatorOptions opt;
  opt.threads = s.schedule.threads;
  auto probe_points = [](const AnalysisRequest& a) {
    std::vector<Vector> pts;
    for (const auto& p : a.points) pts.push_back(detail::to_vector(p));
    return pts;
  };
  for (const auto& a : s.analyses) {
    AnalysisResult r;
    r.request = a;
    if (a.kind == "lipusc") {
      r.estimate = estimate_lipusc(f, ybar, sch, opt);
    } else if (a.kind == "calmness") {
      r.estimate = estimate_calmness(f, ybar, detail::to_vector(a.x), sch, opt);
    } else if (a.kind == "sup_calmness") {
      r.table = a.points.empty() ? sup_calmness_over_nominal(f, ybar, sch, opt)
                                 : sup_calmness_over_nominal(f, ybar, probe_points(a), sch, opt);
    } else if (a.kind == "exact_qp") {
      const Eigen::Index n = f.Q.rows();
      r.qp = qp_canonical_modulus(f.Q, f.A, ybar.head(n), ybar.tail(ybar.size() - n),
                                  operator_norm_from_string(a.operator_norm));
    } else if (a.kind == "exact_sublevel") {
      RootIsolationOptions ro;
      ro.grid_points = f.root_grid_points;
      r.sublevel = sublevel_modulus(f.function, ybar(0), f.domain_lo, f.domain_hi, 1e-9, ro);
    } else if (a.kind == "hypotheses") {
      r.hypotheses = hypothesis_report(f, ybar, sch);
    } else if (a.kind == "verify_equality") {
      r.equality = verify_equality(f, ybar, sch, a.rel_tol, probe_points(a), opt);
    }
    rep.results.push_back(std::move(r));
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace detail {

inline Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline Json numbers(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

inline Json to_json(const ModulusEstimate& e) {
  Json levels = Json::array();
  for (const auto& lv : e.per_radius) {
    levels.push_back({{"radius", number(lv.radius)},
                      {"worst_quotient", number(lv.worst)},
                      {"witness_param", numbers(lv.witness_param)},
                      {"witness_x", numbers(lv.witness_x)},
                      {"exact", lv.exact}});
  }
  return {{"value", number(e.value.value())},
          {"classification", to_string(e.classification)},
          {"witness_param", numbers(e.witness_param)},
          {"witness_x", numbers(e.witness_x)},
          {"per_radius", levels}};
}

inline Json to_json(const CalmnessTable& t) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    pts.push_back({{"x", numbers(t.points[i])},
                   {"value", number(t.estimates[i].value.value())},
                   {"classification", to_string(t.estimates[i].classification)}});
  }
  return {{"sup", to_json(t.sup)}, {"points", pts}};
}

inline Json to_json(const CheckResult& c) {
  Json j{{"verdict", to_string(c.verdict)}, {"detail", c.detail}};
  if (c.witness) {
    j["witness"] = {{"param", numbers(c.witness->param)},
                    {"x", numbers(c.witness->x)},
                    {"measure", number(c.witness->measure)}};
  }
  Json pr = Json::array();
  for (double v : c.per_radius) pr.push_back(number(v));
  j["per_radius"] = pr;
  return j;
}

inline Json to_json(const HypothesisVerdict& h) {
  return {{"closed_nominal", to_json(h.nominal_closed)},
          {"outer_semicontinuity", to_json(h.osc)},
          {"local_boundedness", to_json(h.locally_bounded)},
          {"applicable", h.applicable},
          {"violated", h.violated}};
}

inline Json to_json(const QpModulus& q) {
  Json certs = Json::array();
  for (const auto& c : q.certificates) {
    certs.push_back({{"D", c.D},
                     {"cone_multipliers", numbers(c.cone_multipliers)},
                     {"partial_inverse_norm", number(c.partial_inverse_norm)}});
  }
  return {{"value", number(q.value)},
          {"operator_norm", to_string(q.norm)},
          {"x", numbers(q.active.x)},
          {"active_set", q.active.T},
          {"certificates", certs},
          {"attaining", q.attaining}};
}

inline Json to_json(const SublevelModulus& s) {
  Json pm = Json::array();
  for (double v : s.point_moduli) pm.push_back(number(v));
  return {{"value", number(s.value.value())},
          {"boundary", s.boundary},
          {"point_moduli", pm},
          {"vanishing_gradient", s.vanishing_gradient}};
}

inline Json to_json(const EqualityReport& e) {
  return {{"verdict", to_string(e.verdict)},
          {"inequality_holds", e.inequality_holds},
          {"rel_tol", e.rel_tol},
          {"lipusc", to_json(e.lipusc)},
          {"sup_calmness", to_json(e.sup_calmness)},
          {"hypotheses", to_json(e.hypotheses)}};
}

}  // namespace detail

inline Json report_to_json(const RunReport& r, bool include_timing = true) {
  Json results = Json::array();
  for (const auto& a : r.results) {
    Json j{{"analysis", a.request.kind}};
    if (a.request.kind == "calmness") j["x"] = a.request.x;
    if (a.estimate) j["estimate"] = detail::to_json(*a.estimate);
    if (a.table) j["sup_calmness"] = detail::to_json(*a.table);
    if (a.qp) j["exact_qp"] = detail::to_json(*a.qp);
    if (a.sublevel) j["exact_sublevel"] = detail::to_json(*a.sublevel);
    if (a.hypotheses) j["hypotheses"] = detail::to_json(*a.hypotheses);
    if (a.equality) j["equality"] = detail::to_json(*a.equality);
    results.push_back(std::move(j));
  }
  Json out{{"scenario", scenario_to_json(r.scenario)},
           {"version", r.version},
           {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
           {"seed", r.seed},
           {"results", results}};
  if (include_timing) out["wall_time_s"] = r.wall_time_s;
  return out;
}

// ---------------------------------------------------------------------------
// CSV traces

namespace detail {

inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string packed(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v(i));
  return s;
}

inline std::string trace_csv(const ModulusEstimate& e) {
  std::string out = "radius,worst_quotient,witness_param_packed,witness_x\n";
  for (const auto& lv : e.per_radius) {
    out += fmt(lv.radius) + "," + fmt(lv.worst) + "," + packed(lv.witness_param) + "," + packed(lv.witness_x) + "\n";
  }
  return out;
}

inline std::string hypothesis_csv(const HypothesisVerdict& h, const std::vector<double>& radii) {
  std::string out = "radius,osc_excess,max_image_norm\n";
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const auto at = [&](const std::vector<double>& v) { return k < v.size() ? fmt(v[k]) : std::string(); };
    out += fmt(radii[k]) + "," + at(h.osc.per_radius) + "," + at(h.locally_bounded.per_radius) + "\n";
  }
  return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

}  // namespace detail

/// Trace file name -> CSV contents, one entry per estimate-producing analysis.
inline std::vector<std::pair<std::string, std::string>> trace_tables(const RunReport& r) {
  std::vector<std::pair<std::string, std::string>> out;
  const RadiusSchedule sch = build_schedule(r.scenario.schedule);
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    const AnalysisResult& a = r.results[i];
    const std::string stem = r.scenario.id + "_" + std::to_string(i) + "_" + a.request.kind;
    if (a.estimate) out.emplace_back(stem + ".csv", detail::trace_csv(*a.estimate));
    if (a.table) out.emplace_back(stem + ".csv", detail::trace_csv(a.table->sup));
    if (a.hypotheses) out.emplace_back(stem + ".csv", detail::hypothesis_csv(*a.hypotheses, sch.radii));
    if (a.equality) {
      out.emplace_back(stem + "_lipusc.csv", detail::trace_csv(a.equality->lipusc));
      out.emplace_back(stem + "_sup_calmness.csv", detail::trace_csv(a.equality->sup_calmness.sup));
    }
  }
  return out;
}

/// Writes the CSV traces into `dir` (created if missing); returns the written paths.
inline std::vector<std::string> emit_traces(const RunReport& r, const std::string& dir) {
  std::vector<std::string> paths;
  const auto tables = trace_tables(r);
  if (tables.empty()) return paths;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  for (const auto& [name, text] : tables) {
    const auto p = std::filesystem::path(dir) / name;
    detail::write_file(p, text);
    paths.push_back(p.string());
  }
  return paths;
}

/// Report JSON plus traces; nothing is written for an empty analysis list.
inline std::vector<std::string> write_outputs(const RunReport& r, const std::string& dir) {
  if (r.results.empty()) return {};
  std::vector<std::string> paths = emit_traces(r, dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  const auto p = std::filesystem::path(dir) / (r.scenario.id + "_report.json");
  detail::write_file(p, report_to_json(r).dump(2) + "\n");
  paths.push_back(p.string());
  return paths;
}

// ---------------------------------------------------------------------------
// Built-in examples

inline AnalysisRequest analysis(std::string kind, std::vector<double> x = {}) {
  AnalysisRequest a;
  a.kind = std::move(kind);
  a.x = std::move(x);
  return a;
}

/// Scenario running the named built-in example at the default schedule.
inline Scenario example_scenario(const std::string& id) {
  const Fixture fx = make_fixture(id);
  Scenario s;
  s.id = id;
  s.nominal = detail::from_vector(fx.nominal);
  FamilySpec& F = s.family;
  F.kind = fx.family.name();
  for (const auto& d : fx.family.probe_directions) F.probe_directions.push_back(detail::from_vector(d));
  if (id == "lp_optimal") {
    F.rows = 1;
    F.n = 1;
    F.fixed_A = {{-1.0}};
    F.fixed_b = {0.0};
    s.analyses = {analysis("verify_equality"), analysis("calmness", {1.0})};
  } else if (id == "lcp") {
    F.n = 1;
    s.analyses = {analysis("verify_equality"), analysis("calmness", {0.0}), analysis("calmness", {1.0})};
  } else if (id == "sip") {
    F.n = 1;
    F.probe_directions.clear();  // built into the family
    s.analyses = {analysis("verify_equality"), analysis("calmness", {1.0}), analysis("calmness", {-1.0}),
                  analysis("calmness", {0.0}), analysis("calmness", {0.5})};
  } else if (id == "sublevel") {
    F.function.kind = "sin";
    F.domain = {-2.0 * M_PI, 2.0 * M_PI};
    s.analyses = {analysis("exact_sublevel"), analysis("verify_equality")};
  } else {
    s.analyses = {analysis("verify_equality")};
  }
  return s;
}

struct TableRow {
  std::string quantity;
  std::string expected;
  std::string computed;
  std::string tolerance;
  bool pass = false;
};

struct ReproduceResult {
  RunReport report;
  std::vector<TableRow> rows;
  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.pass; });
  }
};

namespace detail {

inline TableRow near_row(const std::string& q, double expected, double computed, double tol, bool relative) {
  const double err = std::abs(computed - expected);
  const bool ok = std::isfinite(computed) && err <= (relative ? tol * std::abs(expected) : tol);
  char t[32];
  std::snprintf(t, sizeof t, relative ? "%g%% rel" : "%g abs", relative ? 100 * tol : tol);
  return {q, fmt(expected), fmt(computed), t, ok};
}

inline TableRow text_row(const std::string& q, const std::string& expected, const std::string& computed) {
  return {q, expected, computed, "exact", expected == computed};
}

inline std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "+" : "") + v[i];
  return s.empty() ? "none" : s;
}

}  // namespace detail

/// Runs a built-in example and compares against its known values.
/// Mismatches become failing rows; evaluation errors become a single failing row.
inline ReproduceResult reproduce_example(const std::string& id, const std::optional<ScheduleSpec>& schedule = {}) {
  ReproduceResult out;
  Scenario s;
  try {
    s = example_scenario(id);
  } catch (const ArgumentError&) {
    out.rows.push_back({"example id", "one of the built-in ids", id, "exact", false});
    return out;
  }
  if (schedule) s.schedule = *schedule;
  try {
    out.report = run_scenario(s);
  } catch (const Error& e) {
    out.rows.push_back({"run", "completes", e.what(), "exact", false});
    return out;
  }
  const auto& res = out.report.results;
  auto calm = [&](double x) {
    for (const auto& r : res) {
      if (r.request.kind == "calmness" && r.request.x == std::vector<double>{x}) return r.estimate->value.value();
    }
    return std::nan("");
  };
  const EqualityReport* eq = nullptr;
  for (const auto& r : res) {
    if (r.equality) eq = &*r.equality;
  }
  const double L = eq->lipusc.value.value(), S = eq->sup_calmness.sup.value.value();
  auto& rows = out.rows;
  using detail::near_row;
  if (id == "lp_optimal") {
    rows.push_back(near_row("clm at x = 1", 2.0, calm(1.0), 0.03, true));
    rows.push_back(near_row("lipusc", 2.0, L, 0.03, true));
    rows.push_back(near_row("sup clm", 2.0, S, 0.03, true));
    rows.push_back(detail::text_row("equality verdict", "equal", to_string(eq->verdict)));
  } else if (id == "lcp") {
    const SetRepr nominal = evaluate(build_family(s.family), detail::to_vector(s.nominal));
    std::vector<double> pts;
    for (const auto& p : extreme_points(nominal)) pts.push_back(p(0));
    std::sort(pts.begin(), pts.end());
    std::string shown = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) shown += (i ? ", " : "") + detail::fmt(pts[i]);
    rows.push_back(detail::text_row("nominal solutions", "{0, 1}", shown + "}"));
    rows.push_back(near_row("clm at x = 0", 0.0, calm(0.0), 1e-6, false));
    rows.push_back(near_row("clm at x = 1", 2.0, calm(1.0), 0.03, true));
    rows.push_back(near_row("lipusc", 2.0, L, 0.03, true));
    rows.push_back(near_row("sup clm", 2.0, S, 0.03, true));
  } else if (id == "sip") {
    rows.push_back(near_row("clm at x = 1", 2.0, calm(1.0), 0.03, true));
    rows.push_back(near_row("clm at x = -1", 2.0, calm(-1.0), 0.03, true));
    rows.push_back(near_row("clm at x = 0", 0.0, calm(0.0), 1e-6, false));
    rows.push_back(near_row("clm at x = 0.5", 0.0, calm(0.5), 1e-6, false));
    rows.push_back(near_row("lipusc", 2.0, L, 0.03, true));
  } else if (id == "sublevel") {
    const SublevelModulus& ex = *res.front().sublevel;
    rows.push_back(near_row("exact modulus", 1.0, ex.value.value(), 1e-9, false));
    rows.push_back(detail::text_row("boundary points", "5", std::to_string(ex.boundary.size())));
    rows.push_back(near_row("lipusc", 1.0, L, 0.05, true));
    rows.push_back(near_row("sup clm", 1.0, S, 0.05, true));
  } else {
    const std::string premise = id == "counterexample_sqrt"   ? "closed_nominal"
                                : id == "counterexample_jump" ? "outer_semicontinuity"
                                                              : "local_boundedness";
    rows.push_back(detail::text_row("lipusc classification", "infinite", to_string(eq->lipusc.classification)));
    rows.push_back(near_row("sup clm", 0.0, S, 1e-6, false));
    rows.push_back(detail::text_row("violated premises", premise, detail::joined(eq->hypotheses.violated)));
  }
  rows.push_back(detail::text_row("lipusc >= sup clm", "true", eq->inequality_holds ? "true" : "false"));
  return out;
}

inline std::string format_table(const std::string& id, const std::vector<TableRow>& rows) {
  std::size_t w[4] = {8, 8, 8, 9};
  for (const auto& r : rows) {
    w[0] = std::max(w[0], r.quantity.size());
    w[1] = std::max(w[1], r.expected.size());
    w[2] = std::max(w[2], r.computed.size());
    w[3] = std::max(w[3], r.tolerance.size());
  }
  auto pad = [](const std::string& s, std::size_t n) { return s + std::string(n - std::min(n, s.size()), ' '); };
  std::string out = "example " + id + "\n";
  out += pad("quantity", w[0]) + "  " + pad("expected", w[1]) + "  " + pad("computed", w[2]) + "  " +
         pad("tolerance", w[3]) + "  verdict\n";
  for (const auto& r : rows) {
    out += pad(r.quantity, w[0]) + "  " + pad(r.expected, w[1]) + "  " + pad(r.computed, w[2]) + "  " +
           pad(r.tolerance, w[3]) + "  " + (r.pass ? "pass" : "FAIL") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema

inline Json scenario_schema() {
  const Json number_array = {{"type", "array"}, {"items", {{"type", "number"}}}};
  const Json matrix = {{"type", "array"}, {"items", number_array}};
  auto with = [](Json base, const Json& extra) {
    base.update(extra);
    return base;
  };
  Json kinds = Json::array();
  for (FamilyKind k : kAllFamilyKinds) kinds.push_back(to_string(k));
  return {
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "semilocal scenario"},
      {"type", "object"},
      {"required", {"schema_version", "id", "family", "nominal"}},
      {"additionalProperties", false},
      {"properties",
       {{"schema_version", {{"const", kScenarioSchemaVersion}}},
        {"id", {{"type", "string"}, {"minLength", 1}}},
        {"family",
         {{"type", "object"},
          {"required", {"kind"}},
          {"additionalProperties", false},
          {"properties",
           {{"kind", {{"enum", kinds}}},
            {"rows", {{"type", "integer"}, {"minimum", 0}, {"description", "perturbed constraint rows"}}},
            {"n", {{"type", "integer"}, {"minimum", 1}, {"description", "number of variables"}}},
            {"dim", {{"type", "integer"}, {"minimum", 1}, {"description", "identity dimension"}}},
            {"parameter_dim", {{"type", "integer"}, {"minimum", 1}}},
            {"fixed_A", matrix},
            {"fixed_b", number_array},
            {"Q", matrix},
            {"A", matrix},
            {"grid_points", {{"type", "integer"}, {"minimum", 2}}},
            {"function",
             {{"type", "object"},
              {"required", {"kind"}},
              {"additionalProperties", false},
              {"properties",
               {{"kind", {{"enum", {"sin", "cos", "polynomial"}}}},
                {"coefficients", with(number_array, {{"description", "ascending powers"}})}}}}},
            {"domain", with(number_array, {{"minItems", 2}, {"maxItems", 2}})},
            {"point", number_array},
            {"norms",
             {{"type", "object"},
              {"additionalProperties", false},
              {"properties",
               {{"parameter", {{"enum", {"chebyshev", "euclidean"}}}},
                {"image", {{"enum", {"chebyshev", "euclidean"}}}}}}}},
            {"probe_directions", matrix}}}}},
        {"nominal", number_array},
        {"schedule",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties",
           {{"r0", {{"type", "number"}, {"exclusiveMinimum", 0}}},
            {"ratio", {{"type", "number"}, {"exclusiveMinimum", 0}, {"exclusiveMaximum", 1}}},
            {"levels", {{"type", "integer"}, {"minimum", 1}}},
            {"samples", {{"type", "integer"}, {"minimum", 1}}},
            {"seed", {{"type", "integer"}, {"minimum", 0}}},
            {"window", {{"type", "integer"}, {"minimum", 2}}},
            {"growth_factor", {{"type", "number"}, {"exclusiveMinimum", 1}}},
            {"stabilization_tol", {{"type", "number"}, {"minimum", 0}}},
            {"localization_radius_factor", {{"type", "number"}, {"exclusiveMinimum", 0}}},
            {"threads", {{"type", "integer"}, {"minimum", 1}}}}}}},
        {"analyses",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"required", {"kind"}},
            {"additionalProperties", false},
            {"properties",
             {{"kind", {{"enum", analysis_kinds()}}},
              {"x", number_array},
              {"points", matrix},
              {"operator_norm", {{"enum", {"spectral", "inf_induced"}}}},
              {"rel_tol", {{"type", "number"}, {"exclusiveMinimum", 0}}}}}}}}},
        {"out_dir", {{"type", "string"}}}}}};
}

}  // namespace semilocal

#endif  // SEMILOCAL_CLI_REPORTING_HPP_
