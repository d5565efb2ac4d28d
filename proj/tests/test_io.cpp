#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mos/io.hpp"

using namespace mos;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mos_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool bit_equal(const ScalarField& a, const ScalarField& b) {
  return a.grid() == b.grid() &&
         std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

// skips flagged nodes, which are written as 0
bool bit_equal_valid(const ScalarField& a, const ScalarField& b, const NodeMask& m) {
  if (!(a.grid() == b.grid())) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (m.valid(k) && std::memcmp(&a.values()[k], &b.values()[k], sizeof(double)) != 0)
      return false;
  return true;
}

io::FieldFile liouville_file() {
  SeedSpec s;
  s.family = Family::Liouville;
  s.c1 = -0.35;
  s.qn = 0.7;
  s.grid = Grid2D::from_domain(0.1, 0.9, -0.3, 0.6, 23, 17);
  io::FieldFile f;
  f.fields = make_seed(s);
  f.seed = s;
  return f;
}

ErrorKind parse_failure(const std::string& text, std::string* what = nullptr) {
  try {
    io::parse(text);
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.kind();
  }
  FAIL("parse accepted invalid text");
  return ErrorKind::Usage;
}

std::string replace_first(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("round trip is bit-exact, provenance included") {
  io::FieldFile f = liouville_file();
  io::BacklundSource b;
  b.m = 0.5;
  b.init = admissible_initial(0.5, 0.7, 0.1, 1.3, 0.3);
  f.backlund = b;
  f.fields.mask = NodeMask(f.fields.grid().size());
  f.fields.mask.flag(5, f.fields.grid().size());

  const fs::path p = scratch("roundtrip.json");
  io::write_field_file(p, f);
  const io::FieldFile r = io::read_field_file(p);
  CHECK(r.fields.kind == Kind::Second);
  CHECK(r.fields.qn == 0.7);
  CHECK(bit_equal_valid(r.fields.alpha, f.fields.alpha, f.fields.mask));
  CHECK(bit_equal_valid(r.fields.h, f.fields.h, f.fields.mask));
  CHECK(r.fields.mask.flagged_count() == 1);
  CHECK(!r.fields.mask.valid(5));
  // masked nodes carry no value
  CHECK(r.fields.xi[5] == 0.0);
  CHECK(r.fields.xi[6] == f.fields.xi[6]);
  REQUIRE(r.seed);
  CHECK(r.seed->family == Family::Liouville);
  CHECK(r.seed->c1 == -0.35);
  REQUIRE(r.backlund);
  CHECK(r.backlund->m == 0.5);
  CHECK((r.backlund->init - b.init).norm() == 0.0);
  CHECK(io::serialize(r) == io::serialize(io::parse(io::serialize(f))));
}

TEST_CASE("values with awkward binary expansions survive") {
  io::FieldFile f = liouville_file();
  const Grid2D& g = f.fields.grid();
  f.fields.alpha = ScalarField::generate(g, [](std::size_t k) {
    return std::nextafter(0.1 * static_cast<double>(k), 1e300) * (k % 2 ? -1e-300 : 1e300);
  });
  const io::FieldFile r = io::parse(io::serialize(f));
  CHECK(bit_equal(r.fields.alpha, f.fields.alpha));
}

TEST_CASE("one grid row per line") {
  const std::string text = io::serialize(liouville_file());
  const auto a = text.find("\"alpha\"");
  const auto b = text.find("\"xi\"");
  const std::string block = text.substr(a, b - a);
  CHECK(std::count(block.begin(), block.end(), '\n') == 17 + 2);
}

TEST_CASE("corrupted payloads name the field and index") {
  const std::string text = io::serialize(liouville_file());
  const std::string first_h = [&] {
    const auto pos = text.find("[", text.find("\"h\"")) + 1;
    const auto start = text.find_first_not_of(" \n", pos);
    return text.substr(start, text.find(',', start) - start);
  }();
  std::string what;
  CHECK(parse_failure(replace_first(text, first_h, "NaN"), &what) == ErrorKind::Parse);
  CHECK(what.find("field 'h' index 0") != std::string::npos);
  CHECK(what.find("line") != std::string::npos);

  CHECK(parse_failure(replace_first(text, first_h, "null"), &what) == ErrorKind::Parse);
  CHECK(what.find("field 'h' index 0") != std::string::npos);

  CHECK(parse_failure(replace_first(text, first_h, "1e999"), &what) == ErrorKind::Parse);
  CHECK(what.find("'h'") != std::string::npos);
}

TEST_CASE("structural errors") {
  const std::string text = io::serialize(liouville_file());
  std::string what;
  CHECK(parse_failure(replace_first(text, "\"1.0\"", "\"9.9\""), &what) == ErrorKind::Parse);
  CHECK(what.find("version") != std::string::npos);
  CHECK(parse_failure(replace_first(text, "\"nx\":23", "\"nx\":24"), &what) == ErrorKind::Parse);
  CHECK(parse_failure(replace_first(text, "\"second\"", "\"third\"")) == ErrorKind::Parse);
  CHECK(parse_failure(text.substr(0, text.size() / 2), &what) == ErrorKind::Parse);
  CHECK(what.find("line") != std::string::npos);
  CHECK(parse_failure("[1, 2]") == ErrorKind::Parse);
  CHECK_THROWS_AS(io::read_field_file(scratch("does-not-exist.json")), Error);
}

TEST_CASE("obj export: two triangles per cell, flagged cells skipped") {
  const Grid2D g = Grid2D::from_domain(0, 1, 0, 1, 6, 5);
  std::vector<Vec3> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = Vec3(double(k % 6), double(k / 6), 0.0);
  const Vec3Field f(g, v);
  const fs::path p = scratch("plane.obj");
  CHECK(io::write_obj(p, f) == 2 * 5 * 4);
  const std::string text = slurp(p);
  CHECK(std::count(text.begin(), text.end(), 'v') >= 30);

  NodeMask m(g.size());
  m.flag(g.index(2, 2), g.size());
  CHECK(io::write_obj(p, f, m) == 2 * 5 * 4 - 8);

  NodeMask all(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) all.flag(k, g.size());
  try {
    io::write_obj(scratch("empty.obj"), f, all);
    FAIL("empty mesh written");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Numerical);
  }
}

TEST_CASE("table export columns") {
  io::FieldFile f = liouville_file();
  const CoefficientFields c = coefficients_from_governing(f.fields);
  const FrameGrid fr = integrate_frame(c, Mat3::Identity());
  const Reconstruction rec = reconstruct_surfaces(fr, c, {Vec3(0, 0, 1), Vec3::Zero(), Vec3::Zero()});
  const fs::path p = scratch("table.csv");
  io::write_table(p, rec.surfaces, c, stresses(f.fields));
  std::ifstream in(p);
  std::string header;
  std::getline(in, header);
  for (const char* col : {"x", "y", "r_x", "N_z", "rbar_y", "A1", "A2", "Ho", "Ko", "T1", "T2"})
    CHECK(header.find(col) != std::string::npos);
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == f.fields.grid().size());
}
