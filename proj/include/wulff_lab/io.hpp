#pragma once

// CSV / JSON / SVG serialization. Every number is written with 15 significant digits.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wulff_lab/iamcf.hpp"
#include "wulff_lab/shapes.hpp"
#include "wulff_lab/variation.hpp"
#include "wulff_lab/verify.hpp"

namespace wulff_lab::io {

using json = nlohmann::json;

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// JSON number rounded to 15 significant digits; null for non-finite values.
inline json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(num(v));
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void header(const std::vector<std::string>& cols) { row_strings(cols); }
  template <class... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(vals), first = false), ...);
    os_ << '\n';
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << csv_field(cells[i]);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return csv_field(s); }
  static std::string cell(const char* s) { return csv_field(s); }
  std::ostream& os_;
};

// ---------------------------------------------------------------------------
// Functional reports
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {"shape", "p", "n", "V", "P_F", "M_F", "r_max",
                                                "E_F", "F_quotient", "hk", "kappa_n", "margin"};
  return cols;
}

inline void write_report_row(CsvWriter& w, const std::string& shape, const FunctionalReport& r) {
  w.row(shape, r.p, r.n, r.V, r.P_F, r.M_F, r.r_max, r.E_F, r.F_quotient, r.hk.value_or(std::nan("")), r.kappa_n,
        r.margin());
}

inline json to_json(const FunctionalReport& r) {
  json x_max = json::array();
  for (Eigen::Index i = 0; i < r.x_max.size(); ++i) x_max.push_back(jnum(r.x_max[i]));
  return {{"p", jnum(r.p)},     {"n", r.n},
          {"V", jnum(r.V)},     {"P_F", jnum(r.P_F)},
          {"M_F", jnum(r.M_F)}, {"r_max", jnum(r.r_max)},
          {"x_max", x_max},     {"E_F", jnum(r.E_F)},
          {"F_quotient", jnum(r.F_quotient)},
          {"hk", r.hk ? jnum(*r.hk) : json(nullptr)},
          {"kappa_n", jnum(r.kappa_n)},
          {"margin", jnum(r.margin())}};
}

// ---------------------------------------------------------------------------
// Flow traces
// ---------------------------------------------------------------------------

inline void write_flow_csv(std::ostream& os, const FlowTrace& trace) {
  CsvWriter w(os);
  w.header({"t", "V", "P_F", "M_F", "r_max", "E_F", "F_quotient", "wulff_fit_r", "wulff_fit_distance"});
  for (const auto& s : trace.states)
    w.row(s.t, s.report.V, s.report.P_F, s.report.M_F, s.report.r_max, s.report.E_F, s.report.F_quotient,
          s.rescaled_fit.r, s.rescaled_fit.distance);
}

inline json flow_json(const FlowTrace& trace) {
  json rows = json::array();
  for (const auto& s : trace.states) {
    json r = to_json(s.report);
    r["t"] = jnum(s.t);
    r["wulff_fit_r"] = jnum(s.rescaled_fit.r);
    r["wulff_fit_distance"] = jnum(s.rescaled_fit.distance);
    rows.push_back(std::move(r));
  }
  return {{"states", rows}, {"steps", trace.steps.size()}};
}

/// Closed boundary polyline, with the best-fit Wulff shape of the same curve overlaid.
inline std::string svg_snapshot(const SupportCurve2& curve, const FinslerNorm2& norm) {
  const auto fit = fit_wulff(curve, norm);
  std::vector<Eigen::Vector2d> pts, overlay;
  const auto& g = curve.grid();
  const int stride = std::max(1, g.size() / 256);
  for (int j = 0; j < g.size(); j += stride) {
    pts.push_back(curve.point(j));
    const Eigen::Vector2d u = g.unit(j), up = g.unit_perp(j);
    overlay.push_back(fit.center + fit.r * (norm(u) * u + norm.grad(u).dot(up) * up));
  }
  double ext = 0.0;
  for (const auto& p : pts) ext = std::max(ext, p.cwiseAbs().maxCoeff());
  for (const auto& p : overlay) ext = std::max(ext, p.cwiseAbs().maxCoeff());
  ext *= 1.1;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(-ext) << " " << num(-ext) << " " << num(2 * ext)
     << " " << num(2 * ext) << "\" width=\"512\" height=\"512\">\n";
  auto poly = [&](const std::vector<Eigen::Vector2d>& v, const char* style) {
    os << "<polygon fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << num(v[i].x()) << "," << num(-v[i].y());
    os << "\"/>\n";
  };
  const std::string width = "stroke-width=\"" + num(ext / 200) + "\"";
  poly(overlay, ("stroke=\"#999\" stroke-dasharray=\"" + num(ext / 50) + "\" " + width).c_str());
  poly(pts, ("stroke=\"#000\" " + width).c_str());
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Variation and cuts
// ---------------------------------------------------------------------------

inline void write_derivative_csv(std::ostream& os, const std::vector<std::pair<std::string, std::vector<DerivativeRow>>>& blocks) {
  CsvWriter w(os);
  w.header({"target", "t", "value", "predicted", "ratio", "rel_error", "order"});
  for (const auto& [name, rows] : blocks)
    for (const auto& r : rows) w.row(name, r.t, r.value, r.predicted, r.ratio, r.rel_error, r.order);
}

inline void write_cut_csv(std::ostream& os, const std::vector<CutReport>& rows) {
  CsvWriter w(os);
  w.header({"eps", "dV", "dP_F", "dM_F", "r_max", "bound_rhs", "dF", "bound_ratio", "volume_perimeter_ratio"});
  for (const auto& r : rows)
    w.row(r.eps, r.dV, r.dP, r.dM, r.r_max, r.bound_rhs, r.dF, r.bound_ratio(), r.volume_perimeter_ratio());
}

inline json cut_json(const std::vector<CutReport>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"eps", jnum(r.eps)},         {"dV", jnum(r.dV)},   {"dP_F", jnum(r.dP)},
                   {"dM_F", jnum(r.dM)},         {"r_max", jnum(r.r_max)},
                   {"bound_rhs", jnum(r.bound_rhs)}, {"dF", jnum(r.dF)},
                   {"bound_ratio", jnum(r.bound_ratio())},
                   {"volume_perimeter_ratio", jnum(r.volume_perimeter_ratio())}});
  return out;
}

// ---------------------------------------------------------------------------
// Suites and searches
// ---------------------------------------------------------------------------

inline void write_suite_csv(std::ostream& os, const SuiteReport& rep) {
  CsvWriter w(os);
  w.header({"suite", "norm", "p", "index", "family", "shape", "value", "bound", "margin", "E_F", "fit_distance",
            "center_norm", "note"});
  for (const auto& r : rep.rows)
    w.row(rep.name, rep.norm, rep.p, r.index, r.family, r.shape, r.value, r.bound, r.margin, r.E_F, r.fit_distance,
          r.center_norm, r.note);
}

inline json suite_json(const SuiteReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"index", r.index},         {"family", r.family},       {"shape", r.shape},
                    {"value", jnum(r.value)},   {"bound", jnum(r.bound)},   {"margin", jnum(r.margin)},
                    {"E_F", jnum(r.E_F)},       {"fit_distance", jnum(r.fit_distance)},
                    {"center_norm", jnum(r.center_norm)}, {"note", r.note}});
  return {{"suite", rep.name},
          {"norm", rep.norm},
          {"p", jnum(rep.p)},
          {"n_cases", rep.n_cases},
          {"tolerance", jnum(rep.tolerance)},
          {"worst_margin", jnum(rep.worst_margin)},
          {"worst_shape", rep.worst_shape},
          {"passed", rep.passed()},
          {"rows", rows}};
}

inline void write_trajectory_csv(std::ostream& os, const SearchResult& res) {
  CsvWriter w(os);
  w.header({"iteration", "F_quotient"});
  for (std::size_t i = 0; i < res.trajectory.size(); ++i) w.row(i, res.trajectory[i]);
}

// ---------------------------------------------------------------------------
// Norm and shape records
// ---------------------------------------------------------------------------

inline json to_json(const NormSpec& n) {
  switch (n.kind) {
    case NormKind::euclidean: return {{"kind", "euclidean"}};
    case NormKind::lp: return {{"kind", "lp"}, {"q", jnum(n.q)}};
    case NormKind::elliptic: {
      json j = {{"kind", "elliptic"}};
      if (!n.axes.empty()) {
        j["axes"] = json::array();
        for (double a : n.axes) j["axes"].push_back(jnum(a));
      } else {
        j["matrix"] = json::array();
        for (const auto& row : n.matrix) {
          json r = json::array();
          for (double v : row) r.push_back(jnum(v));
          j["matrix"].push_back(r);
        }
      }
      return j;
    }
  }
  return nullptr;
}

namespace detail {
inline const json& key(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) throw Error(ErrorKind::invalid_argument, where + ": missing key '" + name + "'");
  return j.at(name);
}
inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorKind::invalid_argument, where + ": expected a number");
  return j.get<double>();
}
inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::invalid_argument, where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}
}  // namespace detail

/// Either a quick-form string ("elliptic:1,2") or a record {"kind": ...}.
inline NormSpec norm_from_json(const json& j, const std::string& where = "norm") {
  if (j.is_string()) return parse_norm(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, where + ": expected a string or an object");
  const auto kind = detail::key(j, "kind", where).get<std::string>();
  if (kind == "euclidean") return NormSpec::euclidean();
  if (kind == "lp") return NormSpec::lp(detail::number(detail::key(j, "q", where), where + ".q"));
  if (kind == "elliptic") {
    if (j.contains("matrix")) {
      NormSpec s;
      s.kind = NormKind::elliptic;
      for (const auto& row : j.at("matrix")) s.matrix.push_back(detail::numbers(row, where + ".matrix"));
      return s;
    }
    return NormSpec::elliptic_axes(detail::numbers(detail::key(j, "axes", where), where + ".axes"));
  }
  throw Error(ErrorKind::invalid_argument, where + ".kind: unknown norm kind '" + kind + "'");
}

inline json to_json(const ShapeSpec& s) {
  auto arr = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
  };
  json j = {{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case ShapeKind::wulff:
      j["r"] = jnum(s.r);
      j["center"] = arr(s.center.empty() ? std::vector<double>{0.0, 0.0} : s.center);
      break;
    case ShapeKind::support_fourier: {
      j["a0"] = jnum(s.a0);
      json c = json::array();
      for (const auto& ab : s.coeffs) c.push_back({jnum(ab[0]), jnum(ab[1])});
      j["coeffs"] = c;
      break;
    }
    case ShapeKind::polygon:
    case ShapeKind::polytope: {
      json v = json::array();
      for (const auto& p : s.vertices) v.push_back(arr(p));
      j["vertices"] = v;
      if (!s.facets.empty()) {
        json f = json::array();
        for (const auto& fc : s.facets) {
          std::vector<double> nrm(fc.normal.data(), fc.normal.data() + fc.normal.size());
          f.push_back({{"vertices", fc.vertices}, {"normal", arr(nrm)}, {"offset", jnum(fc.offset)}});
        }
        j["facets"] = f;
      }
      break;
    }
    case ShapeKind::box: j["halfwidths"] = arr(s.halfwidths); break;
    case ShapeKind::ellipse:
      j["semi_axes"] = arr(s.semi_axes);
      j["angle"] = jnum(s.angle);
      j["center"] = arr(s.center.empty() ? std::vector<double>{0.0, 0.0} : s.center);
      break;
    case ShapeKind::cross_polytope:
      j["dim"] = s.dim;
      j["r"] = jnum(s.r);
      break;
  }
  if (s.grid > 0) j["grid"] = s.grid;
  return j;
}

inline ShapeSpec shape_from_json(const json& j, const std::string& where = "shape") {
  using detail::key;
  using detail::number;
  using detail::numbers;
  if (j.is_string()) return parse_shape(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, where + ": expected a string or an object");
  const auto kind = key(j, "kind", where).get<std::string>();
  ShapeSpec s;
  if (kind == "wulff") {
    s = ShapeSpec::make_wulff(number(key(j, "r", where), where + ".r"),
                              j.contains("center") ? numbers(j.at("center"), where + ".center") : std::vector<double>{});
  } else if (kind == "support_fourier") {
    std::vector<std::array<double, 2>> coeffs;
    if (j.contains("coeffs"))
      for (const auto& c : j.at("coeffs")) {
        auto ab = numbers(c, where + ".coeffs");
        if (ab.size() != 2) throw Error(ErrorKind::invalid_argument, where + ".coeffs: entries must be [a_k, b_k]");
        coeffs.push_back({ab[0], ab[1]});
      }
    s = ShapeSpec::make_fourier(number(key(j, "a0", where), where + ".a0"), std::move(coeffs));
  } else if (kind == "polygon" || kind == "polytope") {
    s.kind = kind == "polygon" ? ShapeKind::polygon : ShapeKind::polytope;
    for (const auto& v : key(j, "vertices", where)) s.vertices.push_back(numbers(v, where + ".vertices"));
    if (j.contains("facets"))
      for (const auto& f : j.at("facets")) {
        Facet fc;
        fc.vertices = key(f, "vertices", where + ".facets").get<std::vector<int>>();
        auto nrm = numbers(key(f, "normal", where + ".facets"), where + ".facets.normal");
        fc.normal = Eigen::Map<Eigen::VectorXd>(nrm.data(), static_cast<Eigen::Index>(nrm.size()));
        fc.offset = number(key(f, "offset", where + ".facets"), where + ".facets.offset");
        s.facets.push_back(std::move(fc));
      }
  } else if (kind == "box") {
    s = ShapeSpec::make_box(numbers(key(j, "halfwidths", where), where + ".halfwidths"));
  } else if (kind == "ellipse") {
    auto ax = numbers(key(j, "semi_axes", where), where + ".semi_axes");
    if (ax.size() != 2) throw Error(ErrorKind::invalid_argument, where + ".semi_axes: expected two numbers");
    s = ShapeSpec::make_ellipse(ax[0], ax[1], j.contains("angle") ? number(j.at("angle"), where + ".angle") : 0.0,
                                j.contains("center") ? numbers(j.at("center"), where + ".center") : std::vector<double>{});
  } else if (kind == "cross_polytope") {
    s = ShapeSpec::make_cross(key(j, "dim", where).get<int>(), j.contains("r") ? number(j.at("r"), where + ".r") : 1.0);
  } else {
    throw Error(ErrorKind::invalid_argument, where + ".kind: unknown shape kind '" + kind + "'");
  }
  if (j.contains("grid")) s.grid = j.at("grid").get<int>();
  return s;
}

}  // namespace wulff_lab::io
