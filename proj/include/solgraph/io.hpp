#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "solgraph/common.hpp"
#include "solgraph/domain.hpp"
#include "solgraph/mesh.hpp"

namespace solgraph {

// All reals are written as decimal strings with 17 significant digits so
// that they re-parse to the identical double.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// write-temp-then-rename
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

using CsvRow = std::vector<std::string>;

inline void emit_csv(const std::vector<std::string>& header,
                     const std::vector<CsvRow>& rows,
                     const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
    out += "\n";
  }
  write_file_atomic(path, out);
}

// ---- SVG ------------------------------------------------------------------

struct SvgPolyline {
  std::vector<Point> pts;
  std::string cls = "curve";
};

struct SvgLabel {
  Point at;
  std::string text;
};

// Half-plane convention: the y axis points up. Polylines are emitted in a
// flipped user space with a fitted viewBox and 5% margin.
inline void emit_svg(const std::vector<SvgPolyline>& lines,
                     const std::vector<SvgLabel>& labels,
                     const std::filesystem::path& path) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& l : lines)
    for (const auto& p : l.pts) {
      xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
  if (!(xmin <= xmax)) { xmin = ymin = 0.0; xmax = ymax = 1.0; }
  double w = std::max(xmax - xmin, 1e-9), h = std::max(ymax - ymin, 1e-9);
  double mx = 0.05 * w, my = 0.05 * h;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << format_real(xmin - mx) << " " << format_real(-(ymax + my)) << " "
      << format_real(w + 2 * mx) << " " << format_real(h + 2 * my) << "\">\n"
      << "<style>polyline{fill:none;stroke-width:" << format_real(0.004 * std::max(w, h))
      << "}.curve{stroke:#1f4e9c}.domain{stroke:#0a7d3e}.bstar{stroke:#b06000;"
         "stroke-dasharray:0.01}.mask{stroke:#c02020}.axis{stroke:#999}"
      << "text{font-size:" << format_real(0.04 * std::max(w, h))
      << "px;font-family:sans-serif}</style>\n";
  for (const auto& l : lines) {
    out << "<polyline class=\"" << l.cls << "\" points=\"";
    for (const auto& p : l.pts)
      out << format_real(p.x) << "," << format_real(-p.y) << " ";
    out << "\"/>\n";
  }
  for (const auto& lb : labels)
    out << "<text x=\"" << format_real(lb.at.x) << "\" y=\""
        << format_real(-lb.at.y) << "\">" << lb.text << "</text>\n";
  out << "</svg>\n";
  write_file_atomic(path, out.str());
}

inline std::vector<Point> sample_path(const PathGeom& g, int n) {
  std::vector<Point> pts;
  pts.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    pts.push_back(geom_point_native(g, static_cast<double>(i) / n));
  return pts;
}

// ---- domain files ----------------------------------------------------------

inline nlohmann::json domain_to_json(const AdmissibleDomain& d) {
  nlohmann::json j;
  j["version"] = 1;
  j["H"] = format_real(d.H);
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& a : d.arcs) {
    nlohmann::json ja;
    ja["kind"] = a.kind == ArcKind::A ? "A" : a.kind == ArcKind::B ? "B" : "C";
    ja["orientation"] = a.orientation;
    if (const auto* arc = std::get_if<ArcOnCurve>(&a.geometry)) {
      ja["geometry"] = "curve";
      ja["w"] = format_real(arc->curve.w);
      ja["z"] = format_real(arc->curve.z);
      ja["t_lo"] = format_real(arc->t_lo);
      ja["t_hi"] = format_real(arc->t_hi);
    } else if (const auto* c = std::get_if<CircleArc>(&a.geometry)) {
      ja["geometry"] = "circle";
      ja["cx"] = format_real(c->center.x);
      ja["cy"] = format_real(c->center.y);
      ja["radius"] = format_real(c->radius);
      ja["angle_lo"] = format_real(c->angle_lo);
      ja["angle_hi"] = format_real(c->angle_hi);
    } else {
      throw IoError("domain_to_json: segment geometry is not serializable");
    }
    arcs.push_back(ja);
  }
  j["arcs"] = arcs;
  nlohmann::json stars = nlohmann::json::array();
  for (const auto& s : d.b_star_arcs) {
    nlohmann::json js;
    js["w"] = format_real(s.curve.w);
    js["z"] = format_real(s.curve.z);
    js["t_lo"] = format_real(s.t_lo);
    js["t_hi"] = format_real(s.t_hi);
    stars.push_back(js);
  }
  j["b_star"] = stars;
  return j;
}

inline double parse_real(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw IoError("bad real: " + s);
  }
}

inline AdmissibleDomain domain_from_json(const nlohmann::json& j) {
  AdmissibleDomain d;
  if (j.value("version", 0) != 1) throw IoError("domain file: bad version");
  d.H = parse_real(j.at("H").get<std::string>());
  for (const auto& ja : j.at("arcs")) {
    BoundaryArc a;
    std::string kind = ja.at("kind").get<std::string>();
    a.kind = kind == "A" ? ArcKind::A : kind == "B" ? ArcKind::B : ArcKind::C;
    a.orientation = ja.at("orientation").get<int>();
    std::string geom = ja.at("geometry").get<std::string>();
    if (geom == "curve") {
      ArcOnCurve arc;
      arc.curve.w = parse_real(ja.at("w").get<std::string>());
      arc.curve.z = parse_real(ja.at("z").get<std::string>());
      arc.curve.H = d.H;
      arc.t_lo = parse_real(ja.at("t_lo").get<std::string>());
      arc.t_hi = parse_real(ja.at("t_hi").get<std::string>());
      a.geometry = arc;
    } else if (geom == "circle") {
      CircleArc c;
      c.center.x = parse_real(ja.at("cx").get<std::string>());
      c.center.y = parse_real(ja.at("cy").get<std::string>());
      c.radius = parse_real(ja.at("radius").get<std::string>());
      c.angle_lo = parse_real(ja.at("angle_lo").get<std::string>());
      c.angle_hi = parse_real(ja.at("angle_hi").get<std::string>());
      a.geometry = c;
    } else {
      throw IoError("domain file: unknown geometry tag " + geom);
    }
    d.arcs.push_back(a);
  }
  for (const auto& js : j.value("b_star", nlohmann::json::array())) {
    ArcOnCurve s;
    s.curve.w = parse_real(js.at("w").get<std::string>());
    s.curve.z = parse_real(js.at("z").get<std::string>());
    s.curve.H = d.H;
    s.t_lo = parse_real(js.at("t_lo").get<std::string>());
    s.t_hi = parse_real(js.at("t_hi").get<std::string>());
    d.b_star_arcs.push_back(s);
  }
  for (std::size_t i = 0; i < d.arcs.size(); ++i)
    d.vertices.push_back(arc_first(d.arcs[i]));
  return d;
}

inline void save_domain(const AdmissibleDomain& d,
                        const std::filesystem::path& path) {
  write_file_atomic(path, domain_to_json(d).dump(2) + "\n");
}

inline AdmissibleDomain load_domain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return domain_from_json(j);
}

// ---- mesh / field files -----------------------------------------------------

inline void save_mesh(const Mesh& m, const std::filesystem::path& path) {
  std::string out;
  out += std::to_string(m.nodes.size()) + "\n";
  for (const auto& p : m.nodes)
    out += format_real(p.x) + " " + format_real(p.y) + "\n";
  out += std::to_string(m.triangles.size()) + "\n";
  for (const auto& t : m.triangles)
    out += std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
           std::to_string(t[2]) + "\n";
  out += std::to_string(m.boundary_edges.size()) + "\n";
  for (const auto& e : m.boundary_edges)
    out += std::to_string(e.a) + " " + std::to_string(e.b) + " " +
           std::to_string(e.arc_id) + "\n";
  write_file_atomic(path, out);
}

inline Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Mesh m;
  std::size_t nn = 0, nt = 0, ne = 0;
  in >> nn;
  m.nodes.resize(nn);
  for (auto& p : m.nodes) in >> p.x >> p.y;
  in >> nt;
  m.triangles.resize(nt);
  for (auto& t : m.triangles) in >> t[0] >> t[1] >> t[2];
  in >> ne;
  m.boundary_edges.resize(ne);
  m.on_boundary.assign(nn, 0);
  for (auto& e : m.boundary_edges) {
    in >> e.a >> e.b >> e.arc_id;
    m.on_boundary[e.a] = m.on_boundary[e.b] = 1;
  }
  if (!in) throw IoError("mesh file: parse error");
  return m;
}

inline void save_field(const Mesh& m, const std::vector<double>& u,
                       const std::filesystem::path& path) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    rows.push_back({std::to_string(i), format_real(m.nodes[i].x),
                    format_real(m.nodes[i].y), format_real(u[i])});
  emit_csv({"node_index", "x", "y", "u"}, rows, path);
}

// ---- run manifest -----------------------------------------------------------

class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    entries_.push_back({key, value});
  }
  void add_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(data.data(), data.size())));
    files_.push_back({p.filename().string(), hex});
  }
  void write(const std::filesystem::path& path) const {
    std::vector<CsvRow> rows;
    for (const auto& [k, v] : entries_) rows.push_back({"config", k, v});
    for (const auto& [f, c] : files_) rows.push_back({"file", f, c});
    emit_csv({"type", "key", "value"}, rows, path);
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace solgraph
