// Command-line front end: curve data, domain construction and checking,
// Dirichlet solves, exhaustion experiments and flux reports, with
// deterministic CSV/SVG artifacts and a checksum manifest per run.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "solgraph/barrier.hpp"
#include "solgraph/connectors.hpp"
#include "solgraph/constructions.hpp"
#include "solgraph/curve.hpp"
#include "solgraph/exhaustion.hpp"
#include "solgraph/fem.hpp"
#include "solgraph/flux.hpp"
#include "solgraph/io.hpp"
#include "solgraph/mesh.hpp"
#include "solgraph/omega_s.hpp"
#include "solgraph/polygons.hpp"

namespace sg = solgraph;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string out = "out";
  long seed = 1;
  double tol_slack = 1e-8;
  double tol_eq = 1e-6;
  fs::path outdir() const {
    const char* env = std::getenv("SOLGRAPH_OUT");
    fs::path p = env && *env ? fs::path(env) : fs::path(out);
    fs::create_directories(p);
    return p;
  }
};

std::string real(double v) { return sg::format_real(v); }

void manifest_start(sg::Manifest& man, const Common& c,
                    const std::string& command) {
  man.set("version", "solgraph 1.0.0");
  man.set("command", command);
  man.set("seed", std::to_string(c.seed));
}

void write_manifest(sg::Manifest& man, const Common& c,
                    const std::vector<fs::path>& files) {
  for (const auto& f : files) man.add_file(f);
  man.write(c.outdir() / "manifest.csv");
}

sg::CheckMode parse_mode(const std::string& mode) {
  if (mode == "b-empty") return sg::CheckMode::BEmpty;
  if (mode == "a-empty") return sg::CheckMode::AEmpty;
  if (mode == "c-empty") return sg::CheckMode::CEmpty;
  if (mode == "general") return sg::CheckMode::General;
  throw CLI::ValidationError("--mode", "unknown mode " + mode);
}

int run_constants(const Common& c, double H) {
  sg::CurveConstants k = sg::curve_constants(H);
  double Tres = sg::integrate_g(H, -1.0, k.T);
  sg::KofH kh = sg::k_of_h(H);
  std::vector<sg::CsvRow> rows{{real(H), real(k.L), real(k.M), real(k.T),
                                real(Tres), real(kh.K), real(kh.t0)}};
  fs::path f = c.outdir() / "constants.csv";
  sg::emit_csv({"H", "L", "M", "T", "T_residual", "K", "t0"}, rows, f);
  sg::Manifest man;
  manifest_start(man, c, "constants");
  man.set("H", real(H));
  write_manifest(man, c, {f});
  return 0;
}

int run_curve(const Common& c, double H, double z, int samples) {
  sg::CurveParams curve{0.0, z, H};
  sg::CurveConstants k = sg::curve_constants(H);
  std::vector<sg::CsvRow> rows;
  std::vector<sg::Point> pts;
  for (int i = 0; i <= samples; ++i) {
    double t = -sg::kPi + 2.0 * sg::kPi * i / samples;
    sg::Point p = sg::gamma(curve, t);
    rows.push_back({real(t), real(p.x), real(p.y)});
    pts.push_back(p);
  }
  fs::path fcsv = c.outdir() / "curve.csv";
  sg::emit_csv({"t", "x", "y"}, rows, fcsv);

  double t3 = std::acos(-k.T);
  std::vector<sg::SvgLabel> labels{
      {sg::gamma(curve, 0.0), "P1"},
      {sg::gamma(curve, -0.5 * sg::kPi), "P2+"},
      {sg::gamma(curve, 0.5 * sg::kPi), "P2-"},
      {sg::gamma(curve, t3), "P3"},
      {sg::gamma(curve, sg::kPi), "P4+"},
      {sg::gamma(curve, -sg::kPi), "P4-"},
  };
  fs::path fsvg = c.outdir() / "curve.svg";
  sg::emit_svg({{pts, "curve"}}, labels, fsvg);
  sg::Manifest man;
  manifest_start(man, c, "curve");
  man.set("H", real(H));
  man.set("z", real(z));
  man.set("samples", std::to_string(samples));
  write_manifest(man, c, {fcsv, fsvg});
  return 0;
}

void domain_svg(const sg::AdmissibleDomain& dom, const fs::path& path,
                const std::vector<std::string>& arc_names = {}) {
  std::vector<sg::SvgPolyline> lines;
  std::vector<sg::SvgLabel> labels;
  for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
    auto pts = sg::sample_path(dom.arcs[i].geometry, 512);
    lines.push_back({pts, "domain"});
    if (i < arc_names.size())
      labels.push_back({pts[pts.size() / 2], arc_names[i]});
  }
  for (const auto& s : dom.b_star_arcs)
    lines.push_back({sg::sample_path(sg::PathGeom{s}, 512), "bstar"});
  sg::emit_svg(lines, labels, path);
}

int run_domain_build(const Common& c, const std::string& type, double H,
                     double y0, double s, double size, double eps,
                     double pparam) {
  sg::AdmissibleDomain dom;
  std::vector<std::string> names;
  if (type == "b-empty") {
    sg::Point p{0.0, y0};
    double d = size > 0 ? size : 0.6 * 2.0 * p.y / (3.0 + 2.0 * H);
    double e = eps > 0 ? eps : 0.1 * d;
    dom = sg::build_b_empty(p, d, e, H);
    names = {"A1", "C1", "A2", "C2"};
  } else if (type == "a-empty-generic" || type == "a-empty-vertical" ||
             type == "a-empty-horizontal") {
    sg::TangencyCase tc = type == "a-empty-generic"
                              ? sg::TangencyCase::Generic
                              : type == "a-empty-vertical"
                                    ? sg::TangencyCase::VerticalTangent
                                    : sg::TangencyCase::HorizontalTangent;
    sg::CurveParams curve{0.0, y0, H};
    sg::AEmptyOptions opt;
    if (size > 0) opt.size = size;
    if (eps > 0) opt.eps = eps;
    double t = pparam;
    if (tc == sg::TangencyCase::VerticalTangent && t == 0.0) t = -0.5 * sg::kPi;
    if (tc == sg::TangencyCase::Generic && t == 0.0) t = -0.8;
    dom = sg::build_a_empty(curve, t, tc, opt);
    names = {"B1", "C2", "B2", "C1"};
  } else if (type == "omega-s") {
    sg::OmegaS om = sg::build_omega_s(y0, H, s);
    dom = om.domain;
    names = {"B_D", "A+", "B_E", "A-"};
  } else {
    throw CLI::ValidationError("--type", "unknown domain type " + type);
  }
  fs::path fdom = c.outdir() / "domain.json";
  sg::save_domain(dom, fdom);
  fs::path fsvg = c.outdir() / "domain.svg";
  domain_svg(dom, fsvg, names);
  sg::Manifest man;
  manifest_start(man, c, "domain-build");
  man.set("type", type);
  man.set("H", real(H));
  man.set("y0", real(y0));
  man.set("s", real(s));
  write_manifest(man, c, {fdom, fsvg});
  return 0;
}

int run_domain_check(const Common& c, const std::string& in,
                     const std::string& mode) {
  sg::AdmissibleDomain dom = sg::load_domain(in);
  sg::ConditionReport rep = sg::check_conditions(dom, parse_mode(mode));
  std::vector<sg::CsvRow> rows;
  for (const auto& r : rep.rows)
    rows.push_back({real(r.alpha), real(r.beta), real(r.perimeter),
                    real(r.area_weight), real(r.slack_alpha),
                    real(r.slack_beta), r.is_full_boundary ? "1" : "0",
                    r.pass ? "pass" : "fail"});
  fs::path f = c.outdir() / "conditions.csv";
  sg::emit_csv({"alpha", "beta", "perimeter", "I", "slack_alpha", "slack_beta",
                "full_boundary", "verdict"},
               rows, f);
  sg::Manifest man;
  manifest_start(man, c, "domain-check");
  man.set("input", in);
  man.set("mode", mode);
  man.set("verdict", rep.pass ? "pass" : "fail");
  write_manifest(man, c, {f});
  std::cout << (rep.pass ? "pass" : "fail") << "\n";
  return 0;
}

int run_omega_s(const Common& c, double H, double y0) {
  std::vector<sg::CsvRow> rows;
  for (int i = 1; i < 20; ++i) {
    double s = i / 20.0;
    double F = 0.0;
    bool valid = true;
    try {
      F = sg::omega_s_condition_value(y0, H, s);
    } catch (const sg::Error&) {
      valid = false;
    }
    rows.push_back({real(s), real(sg::phi_of_s(H, s)), real(sg::e_of_s(H, s)),
                    real(sg::d_of_s(H, s)), valid ? real(F) : "nan"});
  }
  sg::SStarResult sr = sg::s_star(y0, H);
  rows.push_back({"s0", real(sr.s0), "", "", real(sr.F_s0)});
  rows.push_back({"s*", real(sr.s_star), "", "", real(sr.F_at_root)});
  fs::path f = c.outdir() / "omega_s.csv";
  sg::emit_csv({"s", "phi", "e", "d", "F"}, rows, f);
  sg::OmegaS om = sg::build_omega_s(y0, H, sr.s_star);
  fs::path fsvg = c.outdir() / "omega_s.svg";
  domain_svg(om.domain, fsvg, {"B_D", "A+", "B_E", "A-"});
  sg::Manifest man;
  manifest_start(man, c, "omega-s");
  man.set("H", real(H));
  man.set("y0", real(y0));
  man.set("s_star", real(sr.s_star));
  write_manifest(man, c, {f, fsvg});
  return 0;
}

std::map<int, double> parse_bc(const std::string& bc) {
  std::map<int, double> out;
  std::stringstream ss(bc);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--bc", "expected arc:value pairs");
    out[std::stoi(item.substr(0, colon))] =
        sg::parse_real(item.substr(colon + 1));
  }
  return out;
}

int run_solve(const Common& c, const std::string& in, double h,
              const std::string& bc) {
  sg::AdmissibleDomain dom = sg::load_domain(in);
  double diam = sg::domain_diameter(dom);
  sg::Mesh mesh = sg::make_mesh(dom, h > 0 ? h : diam / 40.0);
  auto bcmap = parse_bc(bc);
  auto bv = sg::boundary_from_arcs(mesh, [&](int id, sg::Point) {
    auto it = bcmap.find(id);
    return it == bcmap.end() ? 0.0 : it->second;
  });
  sg::ScalarField u = sg::solve_dirichlet(mesh, bv, dom.H);
  sg::FluxReport rep = sg::flux_report(mesh, u, dom.H);

  fs::path fmesh = c.outdir() / "mesh.txt";
  sg::save_mesh(mesh, fmesh);
  fs::path ffield = c.outdir() / "field.csv";
  sg::save_field(mesh, u.values, ffield);
  std::vector<sg::CsvRow> rows;
  for (const auto& [id, fx] : rep.flux_per_arc)
    rows.push_back({std::to_string(id), real(fx),
                    real(rep.length_per_arc.at(id))});
  rows.push_back({"total_2HI", real(rep.weighted_area),
                  real(rep.balance_residual)});
  fs::path fflux = c.outdir() / "flux.csv";
  sg::emit_csv({"arc", "flux", "length"}, rows, fflux);
  sg::Manifest man;
  manifest_start(man, c, "solve");
  man.set("input", in);
  man.set("h", real(mesh.h));
  man.set("bc", bc);
  write_manifest(man, c, {fmesh, ffield, fflux});
  return 0;
}

int run_flux(const Common& c, const std::string& meshfile,
             const std::string& fieldfile, double H) {
  sg::Mesh mesh = sg::load_mesh(meshfile);
  std::ifstream in(fieldfile);
  if (!in) throw sg::IoError("cannot open " + fieldfile);
  std::string line;
  std::getline(in, line);  // header
  sg::ScalarField u;
  u.values.assign(mesh.nodes.size(), 0.0);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (parts.size() == 4)
      u.values.at(std::stoul(parts[0])) = sg::parse_real(parts[3]);
  }
  sg::FluxReport rep = sg::flux_report(mesh, u, H);
  std::vector<sg::CsvRow> rows;
  for (const auto& [id, fx] : rep.flux_per_arc)
    rows.push_back({std::to_string(id), real(fx),
                    real(rep.length_per_arc.at(id))});
  rows.push_back({"total_2HI", real(rep.weighted_area),
                  real(rep.balance_residual)});
  fs::path f = c.outdir() / "flux.csv";
  sg::emit_csv({"arc", "flux", "length"}, rows, f);
  sg::Manifest man;
  manifest_start(man, c, "flux");
  man.set("mesh", meshfile);
  man.set("field", fieldfile);
  man.set("H", real(H));
  write_manifest(man, c, {f});
  return 0;
}

int run_exhaust(const Common& c, const std::string& in, double h,
                const std::string& nlist, const std::string& mode,
                const std::string& bc, double cutoff_frac) {
  sg::AdmissibleDomain dom = sg::load_domain(in);
  sg::ExhaustionMode m = mode == "b-empty" ? sg::ExhaustionMode::BEmpty
                         : mode == "a-empty" ? sg::ExhaustionMode::AEmpty
                                             : sg::ExhaustionMode::CEmpty;
  sg::AdmissibleDomain solve_dom =
      m == sg::ExhaustionMode::BEmpty ? dom : sg::domain_star(dom);
  double diam = sg::domain_diameter(solve_dom);
  sg::Mesh mesh = sg::make_mesh(solve_dom, h > 0 ? h : diam / 40.0);

  std::vector<double> ns;
  std::stringstream ss(nlist);
  std::string item;
  while (std::getline(ss, item, ',')) ns.push_back(sg::parse_real(item));
  auto rep = sg::solve_exhaustion(dom, mesh, ns, m,
                                  bc.empty() ? std::map<int, double>{}
                                             : parse_bc(bc));

  std::vector<sg::CsvRow> rows;
  for (const auto& st : rep.steps) {
    double pmin = 1e300, pmax = -1e300;
    for (double v : st.probe_values) {
      pmin = std::min(pmin, v);
      pmax = std::max(pmax, v);
    }
    sg::CsvRow row{real(st.n), real(pmin), real(pmax), real(st.mu)};
    for (const auto& [id, fx] : st.flux_per_arc) row.push_back(real(fx));
    rows.push_back(row);
  }
  std::vector<std::string> header{"n", "probe_min", "probe_max", "mu"};
  if (!rep.steps.empty())
    for (const auto& [id, fx] : rep.steps.front().flux_per_arc)
      header.push_back("flux_arc" + std::to_string(id));
  fs::path f = c.outdir() / "exhaustion.csv";
  sg::emit_csv(header, rows, f);

  std::vector<fs::path> files{f};
  if (!rep.steps.empty()) {
    auto mask = sg::divergence_mask(rep, cutoff_frac * ns.back());
    std::vector<sg::SvgPolyline> lines;
    for (const auto& a : solve_dom.arcs)
      lines.push_back({sg::sample_path(a.geometry, 512), "domain"});
    sg::SvgPolyline mk;
    mk.cls = "mask";
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) mk.pts.push_back(mesh.nodes[i]);
    if (mk.pts.size() >= 2) lines.push_back(mk);
    fs::path fsvg = c.outdir() / "divergence.svg";
    sg::emit_svg(lines, {}, fsvg);
    files.push_back(fsvg);
  }
  sg::Manifest man;
  manifest_start(man, c, "exhaust");
  man.set("input", in);
  man.set("mode", mode);
  man.set("n", nlist);
  man.set("monotone", rep.monotone ? "1" : "0");
  write_manifest(man, c, files);
  return rep.truncated ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMC graph toolkit for the warped half-plane model"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out", common.out, "output directory");
  app.add_option("--seed", common.seed, "seed echoed into the manifest");
  app.add_option("--tol-slack", common.tol_slack, "slack tolerance");
  app.add_option("--tol-eq", common.tol_eq, "equality tolerance");

  double H = 1.0, y0 = 1.0, s = 0.2, z = 1.0, h = 0.0, size = 0.0, eps = 0.0,
         pparam = 0.0, cutoff = 0.9;
  int samples = 2000;
  std::string in, mode = "b-empty", nlist = "1,2,4,8", bc, type = "b-empty",
              meshfile, fieldfile;

  auto* c_const = app.add_subcommand("constants", "curve constants L, M, T, K");
  c_const->add_option("--H", H);

  auto* c_curve = app.add_subcommand("curve", "sample one curve period");
  c_curve->add_option("--H", H);
  c_curve->add_option("--z", z);
  c_curve->add_option("--samples", samples);

  auto* c_build = app.add_subcommand("domain-build", "construct a domain");
  c_build->add_option("--type", type,
                      "b-empty|a-empty-generic|a-empty-vertical|"
                      "a-empty-horizontal|omega-s");
  c_build->add_option("--H", H);
  c_build->add_option("--y0", y0);
  c_build->add_option("--s", s);
  c_build->add_option("--size", size);
  c_build->add_option("--eps", eps);
  c_build->add_option("--p-param", pparam);

  auto* c_check = app.add_subcommand("domain-check", "solvability conditions");
  c_check->add_option("--in", in)->required();
  c_check->add_option("--mode", mode, "b-empty|a-empty|c-empty|general");

  auto* c_om = app.add_subcommand("omega-s", "family table and s0, s*");
  c_om->add_option("--H", H);
  c_om->add_option("--y0", y0);

  auto* c_solve = app.add_subcommand("solve", "Dirichlet solve on a domain");
  c_solve->add_option("--in", in)->required();
  c_solve->add_option("--h", h);
  c_solve->add_option("--bc", bc, "arc:value,... boundary data");

  auto* c_ex = app.add_subcommand("exhaust", "exhaustion sequence");
  c_ex->add_option("--in", in)->required();
  c_ex->add_option("--h", h);
  c_ex->add_option("--n", nlist);
  c_ex->add_option("--mode", mode);
  c_ex->add_option("--bc", bc);
  c_ex->add_option("--cutoff", cutoff);

  auto* c_flux = app.add_subcommand("flux", "flux report for a saved field");
  c_flux->add_option("--mesh", meshfile)->required();
  c_flux->add_option("--field", fieldfile)->required();
  c_flux->add_option("--H", H);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_const->parsed()) return run_constants(common, H);
    if (c_curve->parsed()) return run_curve(common, H, z, samples);
    if (c_build->parsed())
      return run_domain_build(common, type, H, y0, s, size, eps, pparam);
    if (c_check->parsed()) return run_domain_check(common, in, mode);
    if (c_om->parsed()) return run_omega_s(common, H, y0);
    if (c_solve->parsed()) return run_solve(common, in, h, bc);
    if (c_ex->parsed())
      return run_exhaust(common, in, h, nlist, mode, bc, cutoff);
    if (c_flux->parsed()) return run_flux(common, meshfile, fieldfile, H);
  } catch (const solgraph::Error& e) {
    std::ofstream diag(common.outdir() / "error.txt");
    diag << e.what() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
