#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "solgraph/constructions.hpp"
#include "solgraph/io.hpp"
#include "solgraph/mesh.hpp"

using namespace solgraph;
namespace fs = std::filesystem;

namespace {
fs::path tmpdir() {
  fs::path p = fs::temp_directory_path() / "solgraph_io_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("reals round trip through their decimal form") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double v = uni(rng) * std::pow(10.0, int(rng() % 17) - 8);
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("empty csv keeps its header") {
  fs::path f = tmpdir() / "empty.csv";
  emit_csv({"a", "b"}, {}, f);
  CHECK(slurp(f) == "a,b\n");
}

TEST_CASE("csv values re-parse bit exactly") {
  fs::path f = tmpdir() / "vals.csv";
  std::vector<double> vals{1.0 / 3.0, kPi, 6.02e23, -1e-308};
  std::vector<CsvRow> rows;
  for (double v : vals) rows.push_back({format_real(v)});
  emit_csv({"v"}, rows, f);
  std::ifstream in(f);
  std::string line;
  std::getline(in, line);
  for (double v : vals) {
    std::getline(in, line);
    CHECK(std::stod(line) == v);
  }
}

TEST_CASE("domain files round trip bit exactly") {
  AdmissibleDomain dom = build_b_empty({0.37, 9.41}, 1.7, 0.043, 1.25);
  fs::path f = tmpdir() / "domain.json";
  save_domain(dom, f);
  AdmissibleDomain back = load_domain(f);
  REQUIRE(back.arcs.size() == dom.arcs.size());
  CHECK(back.H == dom.H);
  for (std::size_t i = 0; i < dom.arcs.size(); ++i) {
    CHECK(back.arcs[i].kind == dom.arcs[i].kind);
    CHECK(back.arcs[i].orientation == dom.arcs[i].orientation);
    if (const auto* arc = std::get_if<ArcOnCurve>(&dom.arcs[i].geometry)) {
      const auto& b = std::get<ArcOnCurve>(back.arcs[i].geometry);
      CHECK(b.curve.w == arc->curve.w);
      CHECK(b.curve.z == arc->curve.z);
      CHECK(b.t_lo == arc->t_lo);
      CHECK(b.t_hi == arc->t_hi);
    } else {
      const auto& c0 = std::get<CircleArc>(dom.arcs[i].geometry);
      const auto& c1 = std::get<CircleArc>(back.arcs[i].geometry);
      CHECK(c1.center.x == c0.center.x);
      CHECK(c1.center.y == c0.center.y);
      CHECK(c1.radius == c0.radius);
      CHECK(c1.angle_lo == c0.angle_lo);
      CHECK(c1.angle_hi == c0.angle_hi);
    }
  }
  // saving the reloaded domain reproduces the file byte for byte
  fs::path f2 = tmpdir() / "domain2.json";
  save_domain(back, f2);
  CHECK(slurp(f) == slurp(f2));
}

TEST_CASE("mesh files round trip") {
  AdmissibleDomain dom = build_b_empty({0.0, 10.0}, 2.0, 0.05, 1.0);
  Mesh m = make_mesh(dom, domain_diameter(dom) / 12.0);
  fs::path f = tmpdir() / "mesh.txt";
  save_mesh(m, f);
  Mesh back = load_mesh(f);
  REQUIRE(back.nodes.size() == m.nodes.size());
  REQUIRE(back.triangles.size() == m.triangles.size());
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    CHECK(back.nodes[i].x == m.nodes[i].x);
    CHECK(back.nodes[i].y == m.nodes[i].y);
  }
  CHECK(back.boundary_edges.size() == m.boundary_edges.size());
}

TEST_CASE("svg emitter writes well-formed minimal documents") {
  fs::path f = tmpdir() / "line.svg";
  emit_svg({{{{0, 1}, {1, 2}}, "curve"}}, {{{0.5, 1.5}, "label"}}, f);
  std::string s = slurp(f);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("polyline") != std::string::npos);
  CHECK(s.find("label") != std::string::npos);
  CHECK(s.find("viewBox") != std::string::npos);
}

TEST_CASE("manifest is deterministic") {
  fs::path f = tmpdir() / "payload.csv";
  emit_csv({"x"}, {{format_real(kPi)}}, f);
  fs::path m1 = tmpdir() / "m1.csv", m2 = tmpdir() / "m2.csv";
  for (const fs::path& out : {m1, m2}) {
    Manifest man;
    man.set("version", "test");
    man.set("H", format_real(1.0));
    man.add_file(f);
    man.write(out);
  }
  CHECK(slurp(m1) == slurp(m2));
}
