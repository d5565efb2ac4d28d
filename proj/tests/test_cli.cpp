#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mos/cli.hpp"
#include "mos/io.hpp"
#include "mos/membrane.hpp"

using namespace mos;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mos_test_cli";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json report(const std::string& p) { return nlohmann::json::parse(slurp(p)); }

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size()));
}

const std::string& cmc201() {
  static const std::string p = [] {
    const std::string f = path("cmc201.json");
    REQUIRE(run({"seed", "--family", "cmc", "--alpha0", "1.0", "--qn", "1.0", "--domain", "0:2:0:2",
                 "--nx", "201", "--ny", "201", "-o", f})
                .code == 0);
    return f;
  }();
  return p;
}

}  // namespace

TEST_CASE("seed: the three families") {
  const Run r = run({"seed", "--family", "cmc", "--alpha0", "1.0", "--domain", "0:2:0:2", "--nx", "21",
                     "--ny", "21", "-o", path("c.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("family=cmc") != std::string::npos);
  CHECK(r.out.find("kind=first") != std::string::npos);
  CHECK(r.out.find("grid=21x21") != std::string::npos);
  const io::FieldFile c = io::read_field_file(path("c.json"));
  CHECK(c.fields.kind == Kind::First);
  CHECK(norms(c.fields.h - ScalarField(c.fields.grid(), 1.0)).linf == 0.0);

  CHECK(run({"seed", "--family", "pseudospherical", "--v", "0.3", "--domain=-3:3:-3:3", "--nx", "201",
             "--ny", "201", "-o", path("p.json")})
            .code == 0);
  const io::FieldFile p = io::read_field_file(path("p.json"));
  CHECK(p.fields.kind == Kind::Second);
  CHECK(norms(p.fields.xi).linf == 0.0);

  CHECK(run({"seed", "--family", "liouville", "--a", "0.353553", "--c1", "0", "--domain=-1:1:-1:1", "--nx",
             "101", "--ny", "101", "-o", path("l.json")})
            .code == 0);
  const io::FieldFile l = io::read_field_file(path("l.json"));
  CHECK(norms(l.fields.alpha - ScalarField(l.fields.grid(), std::atan(1.0))).linf == 0.0);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"seed", "--family", "cmc", "-o", path("x.json")}).code == 1);  // no domain
  CHECK(run({"seed", "--family", "cmc", "--domain", "0:1:0", "-o", path("x.json")}).code == 1);
  CHECK(run({"seed", "--family", "torus", "--domain", "0:1:0:1", "-o", path("x.json")}).code == 1);
  CHECK(run({"seed", "--family", "pseudospherical", "--v", "2", "--domain", "0:1:0:1", "-o", path("x.json")})
            .code == 1);
  CHECK(run({"seed", "--family", "cmc", "--domain", "0:1:0:1", "--nx", "2", "-o", path("x.json")}).code == 1);
  CHECK(run({"verify"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify: full registry, exact out-of-plane equilibrium, refinement orders") {
  const std::string rep = path("verify.json");
  const Run r = run({"verify", cmc201(), "--refine", "1", "--report", rep});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify: PASS") != std::string::npos);
  const auto j = report(rep);
  const auto& eq = j["residuals"]["equations"];
  for (std::string_view id : kEquationRegistry) CHECK(eq.contains(std::string(id)));
  CHECK(eq.contains("omega-1"));
  CHECK(eq["equilibrium-3"]["linf"][1].get<double>() < 1e-12);
  CHECK(eq["governing-3"]["order"][0].get<double>() == doctest::Approx(2.0).epsilon(0.1));
  CHECK(j["residuals"]["grids"].size() == 2);
}

TEST_CASE("verify: an impossible tolerance fails the gate with status 2") {
  CHECK(run({"verify", cmc201(), "--tol", "1e-3"}).code == 2);
}

TEST_CASE("verify: corrupted payload is a parse error naming the field") {
  std::string text = slurp(cmc201());
  const auto pos = text.find("0.99");
  text.replace(pos, 4, "NaN9");
  const std::string bad = path("bad.json");
  std::ofstream(bad) << text;
  const Run r = run({"verify", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("field 'alpha' index") != std::string::npos);
}

TEST_CASE("reconstruct: meshes, table, mean curvature line, unit Gauss map") {
  const std::string prefix = path("cmc");
  const std::string rep = path("recon.json");
  const Run r = run({"reconstruct", cmc201(), "-o", prefix, "--report", rep, "--refine", "1"});
  REQUIRE(r.code == 0);
  CHECK(std::fabs(value_after(r.out, "mean curvature: mean=") + 0.5) < 1e-3);
  CHECK(std::fabs(value_after(r.out, "min=") + 0.5) < 1e-3);
  CHECK(std::fabs(value_after(r.out, "max=") + 0.5) < 1e-3);
  for (const char* suffix : {"_r.obj", "_rbar.obj", "_N.obj", "_table.csv"}) CHECK(fs::exists(prefix + suffix));

  std::ifstream n(prefix + "_N.obj");
  double worst = 0.0;
  std::size_t vertices = 0;
  for (std::string line; std::getline(n, line);) {
    if (line.rfind("v ", 0) != 0) continue;
    std::istringstream in(line.substr(2));
    double x, y, z;
    in >> x >> y >> z;
    worst = std::fmax(worst, std::fabs(std::sqrt(x * x + y * y + z * z) - 1.0));
    ++vertices;
  }
  CHECK(vertices == 201u * 201u);
  CHECK(worst < 1e-6);

  const auto j = report(rep);
  CHECK(j["frame"]["orthonormality_drift"].get<double>() < 1e-6);
  CHECK(j["frame"]["path_independence_order"][0].get<double>() >= 1.9);
}

TEST_CASE("reconstruct: nothing left to mesh is an error, not an empty file") {
  io::FieldFile f = io::read_field_file(cmc201());
  f.fields.mask = NodeMask(f.fields.grid().size());
  for (std::size_t k = 0; k < f.fields.grid().size(); ++k)
    if (k % 2) f.fields.mask.flag(k, f.fields.grid().size());
  const std::string masked = path("masked.json");
  io::write_field_file(masked, f);
  const Run r = run({"reconstruct", masked, "-o", path("masked")});
  CHECK(r.code != 0);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("stress: cmc T1 = T2 = q_n") {
  const Run r = run({"stress", cmc201(), "-o", path("stress.csv")});
  CHECK(r.code == 0);
  CHECK(value_after(r.out, "T1: mean=") == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fs::exists(path("stress.csv")));
}

TEST_CASE("backlund: Bianchi-Darboux report lines and re-verification of the output") {
  const std::string out = path("bd.json");
  const std::string rep = path("bd_report.json");
  const Run r = run({"backlund", cmc201(), "--bianchi-darboux", "--m", "2", "--init", "1,1", "-o", out,
                     "--report", rep, "--mesh", path("bd")});
  REQUIRE(r.code == 0);
  CHECK(value_after(r.out, "e_xi_prime_max_dev ") < 1e-6);
  CHECK(value_after(r.out, "h_prime_max_dev ") < 1e-6);
  CHECK(std::fabs(value_after(r.out, "primed mean curvature: mean=") + 0.5) < 1e-2);
  const auto j = report(rep);
  CHECK(j["constraint_drift"].get<double>() < 1e-6);
  CHECK(j["coefficient_crosscheck"].get<double>() < 1e-8);

  const Run v = run({"verify", out, "--refine", "1"});
  CHECK(v.code == 0);
  CHECK(v.out.find("verify: PASS") != std::string::npos);
}

TEST_CASE("backlund: general transform, parameter errors") {
  const std::string seed = path("cmc_unit.json");
  REQUIRE(run({"seed", "--family", "cmc", "--domain", "0:1:0:1", "--nx", "101", "--ny", "101", "-o", seed}).code ==
          0);
  CHECK(run({"backlund", seed, "--m", "0.5", "--init", "0,1,0.3", "-o", path("g.json")}).code == 0);
  CHECK(run({"verify", path("g.json"), "--refine", "1"}).code == 0);

  const Run zero = run({"backlund", seed, "--m", "0", "--init", "0,1,0.3", "-o", path("z.json")});
  CHECK(zero.code == 1);
  CHECK(zero.err.find("usage") != std::string::npos);
  CHECK(run({"backlund", seed, "--m", "1", "--init", "0,1", "-o", path("z.json")}).code == 1);
  CHECK(run({"backlund", seed, "--m", "1", "--init", "0,0,1", "-o", path("z.json")}).code == 1);
}

TEST_CASE("omega: report lines") {
  const std::string rep = path("omega.json");
  const Run r = run({"omega", cmc201(), "--report", rep});
  CHECK(r.code == 0);
  CHECK(r.out.find("membrane_vs_appendix_max_diff 0.000000e+00 differing_nodes 0") != std::string::npos);
  CHECK(r.out.find("umbilic_nodes 0") != std::string::npos);
  const auto j = report(rep);
  CHECK(j["membrane_vs_appendix_max_diff"].get<double>() == 0.0);
  CHECK(j["residuals"]["equations"]["omega-1"]["pass"].get<bool>());
}

TEST_CASE("commands are deterministic") {
  const std::string a = path("det_a.json"), b = path("det_b.json");
  for (const std::string& f : {a, b})
    REQUIRE(run({"backlund", cmc201(), "--m", "0.5", "--init", "0,1,0.3", "-o", f}).code != 1);
  CHECK(slurp(a) == slurp(b));
  const Run r1 = run({"verify", cmc201()}), r2 = run({"verify", cmc201()});
  CHECK(r1.out == r2.out);
}

TEST_CASE("grid flags on a file command rebuild it from provenance") {
  const std::string rep = path("override_report.json");
  const Run r = run({"verify", cmc201(), "--nx", "51", "--ny", "41", "--report", rep});
  CHECK(r.code == 0);
  const auto j = report(rep);
  CHECK(j["grid"]["nx"] == 51);
  CHECK(j["grid"]["ny"] == 41);
  CHECK(j["grid"]["x1"].get<double>() == 2.0);

  const std::string prime = path("override_prime.json");
  CHECK(run({"backlund", cmc201(), "--m", "0.5", "--init", "0,1,0.3", "--domain", "0:1:0:1",
             "--nx", "101", "--ny", "101", "-o", prime})
            .code == 0);
  CHECK(run({"verify", prime}).code == 0);
}

TEST_CASE("grid flags without seed provenance are a usage error") {
  const std::string f = path("no_provenance.json");
  REQUIRE(run({"seed", "--family", "cmc", "--domain", "0:1:0:1", "--nx", "21", "--ny", "21", "-o", f})
              .code == 0);
  std::string text = slurp(f);
  const auto pos = text.find("\"seed\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 6, "\"other\"");
  std::ofstream(f) << text;
  REQUIRE(run({"verify", f}).code == 0);
  const Run r = run({"verify", f, "--nx", "31"});
  CHECK(r.code == 1);
  CHECK(r.err.find("provenance") != std::string::npos);
}
