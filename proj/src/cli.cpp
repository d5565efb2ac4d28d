#include "mos/cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mos/backlund.hpp"
#include "mos/frame.hpp"
#include "mos/gates.hpp"
#include "mos/io.hpp"
#include "mos/omega.hpp"
#include "mos/seeds.hpp"

namespace mos::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct Common {
  std::string domain;
  std::size_t nx = 101;
  std::size_t ny = 101;
  double qn = 1.0;
  std::string out;
  std::string report;
  int refine = 0;
  std::optional<double> tol;
  std::vector<CLI::Option*> grid_opts;

  bool grid_given() const {
    for (const CLI::Option* o : grid_opts)
      if (o->count()) return true;
    return false;
  }
};

void add_common(CLI::App* app, Common& c) {
  c.grid_opts.push_back(app->add_option("--domain", c.domain, "x0:x1:y0:y1"));
  c.grid_opts.push_back(
      app->add_option("--nx", c.nx, "nodes in x")->check(CLI::PositiveNumber));
  c.grid_opts.push_back(
      app->add_option("--ny", c.ny, "nodes in y")->check(CLI::PositiveNumber));
  c.grid_opts.push_back(app->add_option("--qn", c.qn, "normal load q_n"));
  app->add_option("-o,--out", c.out, "output path or prefix");
  app->add_option("--report", c.report, "JSON report path");
  app->add_option("--refine", c.refine, "re-run on k successively halved grids")
      ->check(CLI::Range(0, 6));
  app->add_option("--tol", c.tol, "constant C of the C h^2 residual gate");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Grid2D grid_from(const Common& c) {
  if (c.domain.empty()) fail(ErrorKind::Usage, "--domain x0:x1:y0:y1 is required");
  double v[4];
  std::istringstream in(c.domain);
  std::string part;
  int n = 0;
  while (std::getline(in, part, ':')) {
    if (n == 4) fail(ErrorKind::Usage, "--domain takes four values x0:x1:y0:y1");
    try {
      std::size_t used = 0;
      v[n] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      fail(ErrorKind::Usage, "--domain: '" + part + "' is not a number");
    }
    ++n;
  }
  if (n != 4) fail(ErrorKind::Usage, "--domain takes four values x0:x1:y0:y1");
  return Grid2D::from_domain(v[0], v[1], v[2], v[3], c.nx, c.ny);
}

ojson grid_json(const Grid2D& g) {
  ojson j;
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["x0"] = g.x0;
  j["x1"] = g.x1();
  j["y0"] = g.y0;
  j["y1"] = g.y1();
  j["h"] = g.h();
  return j;
}

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson gated_json(const GatedReport& r) {
  ojson j;
  j["grids"] = ojson::array();
  for (const Grid2D& g : r.grids) j["grids"].push_back(grid_json(g));
  ojson eq = ojson::object();
  for (const auto& [id, e] : r.entries) {
    ojson x;
    x["algebraic"] = e.ladder.front().algebraic;
    x["linf"] = ojson::array();
    x["l2"] = ojson::array();
    x["excluded"] = ojson::array();
    x["bound"] = ojson::array();
    for (std::size_t s = 0; s < e.ladder.size(); ++s) {
      x["linf"].push_back(e.ladder[s].linf);
      x["l2"].push_back(e.ladder[s].l2);
      x["excluded"].push_back(e.ladder[s].excluded);
      x["bound"].push_back(e.bounds[s]);
    }
    if (!e.orders.empty()) {
      x["order"] = ojson::array();
      for (const auto& o : e.orders) x["order"].push_back(o ? finite_or_null(*o) : ojson(nullptr));
    }
    x["pass"] = e.pass();
    eq[id] = x;
  }
  j["equations"] = eq;
  j["pass"] = r.pass();
  return j;
}

void print_gated(std::ostream& out, const GatedReport& r) {
  for (const auto& [id, e] : r.entries) {
    out << id << " linf=" << fmt(e.ladder.back().linf) << " bound=" << fmt(e.bounds.back());
    if (!e.orders.empty() && e.orders.back()) out << " order=" << fmt(*e.orders.back());
    if (e.ladder.back().excluded) out << " excluded=" << e.ladder.back().excluded;
    out << (e.pass() ? " PASS" : " FAIL") << '\n';
  }
}

void emit_report(const Common& c, const ojson& j) {
  if (!c.report.empty()) io::write_text(c.report, j.dump(2) + "\n");
}

GatePolicy policy_for(const io::FieldFile& f, const Common& c) {
  GatePolicy p;
  if (f.backlund) {
    p.C = kPrimedResidualConstant;
    p.algebraic_tol = kPrimedAlgebraicTol;
  } else if (f.seed) {
    p.C = residual_constant(f.seed->family);
  }
  if (c.tol) p.C = *c.tol;
  return p;
}

BacklundResult run_backlund(const GoverningFields& g, const io::BacklundSource& b,
                            BianchiDarbouxResult* bd_out = nullptr) {
  if (b.bianchi_darboux) {
    BianchiDarbouxResult bd = bianchi_darboux(g, b.m * g.qn / 2.0, b.omega0, b.phi0);
    BacklundResult r = bd.result;
    if (bd_out) *bd_out = std::move(bd);
    return r;
  }
  return backlund(g, b.m, b.init);
}

/// Rebuilds the file's fields on another grid from its provenance.
GoverningFields regenerate(const io::FieldFile& f, const Grid2D& grid) {
  if (!f.seed) fail(ErrorKind::Usage, "--refine needs a field file with seed provenance");
  SeedSpec s = *f.seed;
  s.grid = grid;
  GoverningFields g = make_seed(s);
  if (f.backlund) g = run_backlund(g, *f.backlund).primed_governing;
  return g;
}

/// Reads a field file. Explicit --domain/--nx/--ny/--qn rebuild it from its
/// provenance on that grid; unset ones keep the file's values.
io::FieldFile load_input(const std::string& input, const Common& c) {
  io::FieldFile f = io::read_field_file(input);
  if (!c.grid_given()) return f;
  if (!f.seed) fail(ErrorKind::Usage, "grid flags need a field file with seed provenance");
  const Grid2D& old = f.fields.grid();
  auto given = [&](const std::string& name) {
    for (const CLI::Option* o : c.grid_opts)
      if (o->count() && o->check_name(name)) return true;
    return false;
  };
  Common k = c;
  if (!given("--domain"))
    k.domain = fmt_exact(old.x0) + ":" + fmt_exact(old.x1()) + ":" + fmt_exact(old.y0) + ":" +
               fmt_exact(old.y1());
  if (!given("--nx")) k.nx = old.nx;
  if (!given("--ny")) k.ny = old.ny;
  if (!given("--qn")) k.qn = f.seed->qn;
  f.seed->qn = k.qn;
  f.seed->grid = grid_from(k);
  f.fields = regenerate(f, f.seed->grid);
  return f;
}

template <class Fn>
std::vector<ResidualReport> ladder(const io::FieldFile& f, int refine, Fn&& fn) {
  std::vector<ResidualReport> out{fn(f.fields)};
  Grid2D g = f.fields.grid();
  for (int s = 0; s < refine; ++s) {
    g = g.refined();
    out.push_back(fn(regenerate(f, g)));
  }
  return out;
}

ResidualReport full_report(const GoverningFields& g) {
  ResidualReport r = membrane_report(g);
  const CoefficientFields c = coefficients_from_governing(g);
  r.merge(omega_ratios(c, g));
  return r;
}

ojson header(const char* command, const std::string& input, const GoverningFields& g) {
  ojson j;
  j["command"] = command;
  if (!input.empty()) j["input"] = input;
  j["kind"] = std::string(to_string(g.kind));
  j["qn"] = g.qn;
  j["grid"] = grid_json(g.grid());
  j["masked_nodes"] = g.mask.flagged_count();
  return j;
}

struct Stats {
  double mean = 0.0, min = 0.0, max = 0.0;
  std::size_t count = 0;
};

Stats stats(const ScalarField& f, const NodeMask& flags) {
  Stats s;
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!flags.valid(k) || !std::isfinite(f[k])) continue;
    if (s.count == 0) s.min = s.max = f[k];
    s.min = std::fmin(s.min, f[k]);
    s.max = std::fmax(s.max, f[k]);
    sum += f[k];
    ++s.count;
  }
  if (s.count) s.mean = sum / static_cast<double>(s.count);
  return s;
}

ojson stats_json(const Stats& s) {
  ojson j;
  j["mean"] = s.mean;
  j["min"] = s.min;
  j["max"] = s.max;
  j["nodes"] = s.count;
  return j;
}

void print_stats(std::ostream& out, const char* label, const Stats& s) {
  out << label << ": mean=" << fmt(s.mean) << " min=" << fmt(s.min) << " max=" << fmt(s.max)
      << " nodes=" << s.count << '\n';
}

struct Surfaces {
  CoefficientFields coefficients;
  FrameGrid frame;
  Reconstruction recon;
  NodeMask flags;
};

Surfaces reconstruct(const GoverningFields& g) {
  Surfaces s;
  s.coefficients = coefficients_from_governing(g);
  s.frame = integrate_frame(s.coefficients, Mat3::Identity());
  s.recon = reconstruct_surfaces(s.frame, s.coefficients,
                                 {Vec3(0.0, 0.0, 1.0), Vec3::Zero(), Vec3::Zero()});
  s.flags = s.coefficients.flags;
  s.flags.merge(s.recon.degenerate, g.grid().size());
  return s;
}

// ---------------------------------------------------------------- commands

int cmd_seed(const Common& c, const std::string& family, const SeedSpec& params,
             std::ostream& out) {
  SeedSpec s = params;
  s.family = parse_family(family);
  s.qn = c.qn;
  s.grid = grid_from(c);
  if (c.out.empty()) fail(ErrorKind::Usage, "seed needs -o/--out");
  io::FieldFile f;
  f.fields = make_seed(s);
  f.seed = s;
  io::write_field_file(c.out, f);
  const Grid2D& g = s.grid;
  out << "seed family=" << to_string(s.family) << " kind=" << to_string(kind_of(s.family))
      << " qn=" << s.qn << " grid=" << g.nx << "x" << g.ny << " domain=[" << g.x0 << ","
      << g.x1() << "]x[" << g.y0 << "," << g.y1() << "]\n";
  if (!c.report.empty()) {
    const GatedReport r = gate(ladder(f, c.refine, full_report), policy_for(f, c));
    ojson j = header("seed", "", f.fields);
    j["residuals"] = gated_json(r);
    emit_report(c, j);
  }
  return 0;
}

int cmd_verify(const Common& c, const std::string& input, std::ostream& out) {
  const io::FieldFile f = load_input(input, c);
  const GatedReport r = gate(ladder(f, c.refine, full_report), policy_for(f, c));
  ojson j = header("verify", input, f.fields);
  j["residuals"] = gated_json(r);
  emit_report(c, j);
  print_gated(out, r);
  out << (r.pass() ? "verify: PASS\n" : "verify: FAIL\n");
  return r.pass() ? 0 : 2;
}

int cmd_reconstruct(const Common& c, const std::string& input, std::ostream& out,
                    std::ostream& err) {
  const io::FieldFile f = load_input(input, c);
  if (c.out.empty()) fail(ErrorKind::Usage, "reconstruct needs -o/--out prefix");
  const GoverningFields& g = f.fields;
  const std::size_t n = g.grid().size();
  const Surfaces s = reconstruct(g);
  if (s.flags.flagged_count() * 2 > n)
    err << "warning: " << s.flags.flagged_count() << " of " << n << " nodes flagged\n";

  const std::size_t faces_r = io::write_obj(c.out + "_r.obj", s.recon.surfaces.r, s.flags);
  const std::size_t faces_rb = io::write_obj(c.out + "_rbar.obj", s.recon.surfaces.rbar, s.flags);
  const std::size_t faces_n = io::write_obj(c.out + "_N.obj", s.recon.surfaces.N, s.flags);
  io::write_table(c.out + "_table.csv", s.recon.surfaces, s.coefficients, stresses(g));

  const MeshCurvatures mc = mesh_curvatures(s.recon.surfaces.r, 1e-6, s.flags);
  const Stats H = stats(mc.meanH, mc.flags), K = stats(mc.gaussK, mc.flags);
  double n_dev = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    n_dev = std::fmax(n_dev, std::fabs(s.recon.surfaces.N[k].norm() - 1.0));

  std::vector<double> path;
  std::vector<Grid2D> grids{g.grid()};
  const PathIndependence pi = path_independence(s.coefficients, Mat3::Identity());
  path.push_back(pi.max_error);
  for (int r = 0; r < c.refine; ++r) {
    grids.push_back(grids.back().refined());
    path.push_back(path_independence_error(coefficients_from_governing(regenerate(f, grids.back())),
                                           Mat3::Identity()));
  }

  ojson j = header("reconstruct", input, g);
  ojson fr;
  fr["orthonormality_drift"] = orthonormality_drift(s.frame);
  fr["path_independence_error"] = path;
  if (path.size() > 1) {
    fr["path_independence_order"] = ojson::array();
    for (std::size_t i = 1; i < path.size(); ++i)
      fr["path_independence_order"].push_back(finite_or_null(std::log2(path[i - 1] / path[i])));
  }
  fr["zero_curvature_linf"] = norms(pi.zero_curvature).linf;
  j["frame"] = fr;
  ojson sj;
  sj["gauss_map_mismatch"] = s.recon.gauss_map_mismatch;
  sj["N_norm_max_dev"] = n_dev;
  sj["flagged_nodes"] = s.flags.flagged_count();
  sj["faces"] = {{"r", faces_r}, {"rbar", faces_rb}, {"N", faces_n}};
  j["surfaces"] = sj;
  j["curvature"] = {{"mean_H", stats_json(H)}, {"gauss_K", stats_json(K)},
                    {"flagged_nodes", mc.flags.flagged_count()}};
  emit_report(c, j);

  out << "orthonormality_drift " << fmt(orthonormality_drift(s.frame)) << '\n';
  out << "path_independence_error " << fmt(path.back()) << '\n';
  out << "N_norm_max_dev " << fmt(n_dev) << '\n';
  print_stats(out, "mean curvature", H);
  print_stats(out, "gauss curvature", K);
  return 0;
}

int cmd_stress(const Common& c, const std::string& input, std::ostream& out) {
  const io::FieldFile f = load_input(input, c);
  const GoverningFields& g = f.fields;
  const StressFields t = stresses(g);
  const CoefficientFields co = coefficients_from_governing(g);
  auto eq = [](const GoverningFields& x) {
    return equilibrium_residuals(coefficients_from_governing(x), stresses(x), x.qn);
  };
  const GatedReport r = gate(ladder(f, c.refine, eq), policy_for(f, c));
  if (!c.out.empty()) {
    std::string csv = "x,y,T1,T2\n";
    char buf[128];
    const Grid2D& grid = g.grid();
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (std::size_t i = 0; i < grid.nx; ++i) {
        const std::size_t k = grid.index(i, j);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid.x(i), grid.y(j), t.T1[k],
                      t.T2[k]);
        csv += buf;
      }
    io::write_text(c.out, csv);
  }
  const Stats s1 = stats(t.T1, t.flags), s2 = stats(t.T2, t.flags);
  ojson j = header("stress", input, g);
  j["T1"] = stats_json(s1);
  j["T2"] = stats_json(s2);
  j["stress_flagged_nodes"] = t.flags.flagged_count();
  j["residuals"] = gated_json(r);
  emit_report(c, j);
  print_stats(out, "T1", s1);
  print_stats(out, "T2", s2);
  print_gated(out, r);
  return r.pass() ? 0 : 2;
}

struct BacklundArgs {
  double m = 0.0;
  std::vector<double> init;
  bool bianchi_darboux = false;
  std::string mesh;
};

int cmd_backlund(const Common& c, const std::string& input, const BacklundArgs& a,
                 std::ostream& out) {
  if (a.m == 0.0 || !std::isfinite(a.m)) fail(ErrorKind::Usage, "--m must be finite and nonzero");
  if (c.out.empty()) fail(ErrorKind::Usage, "backlund needs -o/--out");
  const std::size_t want = a.bianchi_darboux ? 2 : 3;
  if (a.init.size() != want)
    fail(ErrorKind::Usage, a.bianchi_darboux ? "--init takes omega0,phi0 with --bianchi-darboux"
                                             : "--init takes lambda0,omega0,phi0");
  const io::FieldFile f = load_input(input, c);
  const GoverningFields& g = f.fields;
  if (!g.mask.empty() && g.mask.flagged_count())
    fail(ErrorKind::InvalidInput, "Backlund input must be defined at every node");

  io::BacklundSource src;
  src.m = a.m;
  src.bianchi_darboux = a.bianchi_darboux;
  if (a.bianchi_darboux) {
    src.omega0 = a.init[0];
    src.phi0 = a.init[1];
  } else {
    if (a.init[1] == 0.0) fail(ErrorKind::Usage, "omega0 must be nonzero");
    src.init = admissible_initial(a.m, g.qn, a.init[0], a.init[1], a.init[2]);
  }
  BianchiDarbouxResult bd;
  const BacklundResult res = run_backlund(g, src, &bd);

  io::FieldFile primed;
  primed.fields = res.primed_governing;
  primed.seed = f.seed;
  primed.backlund = src;
  io::write_field_file(c.out, primed);

  io::FieldFile with_source = f;
  with_source.backlund = src;
  std::vector<ResidualReport> steps{res.primed_report};
  Grid2D grid = g.grid();
  for (int s = 0; s < c.refine; ++s) {
    grid = grid.refined();
    if (!f.seed) fail(ErrorKind::Usage, "--refine needs a field file with seed provenance");
    SeedSpec spec = *f.seed;
    spec.grid = grid;
    steps.push_back(run_backlund(make_seed(spec), src).primed_report);
  }
  const GatedReport r = gate(steps, policy_for(with_source, c));

  const std::size_t singular = res.lax.singular.flagged_count();
  const std::size_t flagged = res.primed_governing.mask.flagged_count();
  ojson j = header("backlund", input, g);
  j["m"] = a.m;
  j["init"] = {src.init[0], src.init[1], src.init[2], src.init[3], src.init[4]};
  j["constraint_drift"] = res.lax.constraint_drift;
  j["lax_path_error"] = res.lax.path_error;
  j["singular_nodes"] = singular;
  j["branch_invalid_nodes"] = flagged - singular;
  j["flagged_nodes"] = flagged;
  j["coefficient_crosscheck"] = res.coefficient_crosscheck;
  j["ho_crosscheck"] = res.ho_crosscheck;
  if (a.bianchi_darboux) {
    const Vec5 s0 = res.lax.state(0);
    j["init"] = {s0[0], s0[1], s0[2], s0[3], s0[4]};
    j["mbar"] = a.m * g.qn / 2.0;
    j["e_xi_prime_max_dev"] = bd.e_xi_prime_max_dev;
    j["h_prime_max_dev"] = bd.h_prime_max_dev;
    j["e_alpha_prime_max_dev"] = bd.e_alpha_prime_max_dev;
    j["reduced_vs_general"] = bd.reduced_vs_general;
  }
  j["primed_residuals"] = gated_json(r);

  out << "constraint_drift " << fmt(res.lax.constraint_drift) << '\n';
  out << "lax_path_error " << fmt(res.lax.path_error) << '\n';
  out << "flagged_nodes " << flagged << " (singular " << singular << ")\n";
  out << "coefficient_crosscheck " << fmt(res.coefficient_crosscheck) << '\n';
  if (a.bianchi_darboux) {
    out << "e_xi_prime_max_dev " << fmt(bd.e_xi_prime_max_dev) << '\n';
    out << "h_prime_max_dev " << fmt(bd.h_prime_max_dev) << '\n';
    out << "e_alpha_prime_max_dev " << fmt(bd.e_alpha_prime_max_dev) << '\n';
    out << "reduced_vs_general " << fmt(bd.reduced_vs_general) << '\n';
  }
  print_gated(out, r);

  if (!a.mesh.empty()) {
    const Surfaces s = reconstruct(g);
    const SurfaceTriple moved = backlund_surface(s.recon.surfaces, s.frame, res.lax);
    NodeMask flags = res.primed_governing.mask;
    flags.merge(s.flags, g.grid().size());
    io::write_obj(a.mesh + "_r.obj", moved.r, flags);
    const MeshCurvatures mc = mesh_curvatures(moved.r, 1e-6, flags);
    const Stats H = stats(mc.meanH, mc.flags), K = stats(mc.gaussK, mc.flags);
    j["primed_curvature"] = {{"mean_H", stats_json(H)}, {"gauss_K", stats_json(K)}};
    print_stats(out, "primed mean curvature", H);
  }
  emit_report(c, j);
  return r.pass() ? 0 : 2;
}

int cmd_omega(const Common& c, const std::string& input, std::ostream& out) {
  const io::FieldFile f = load_input(input, c);
  const GoverningFields& g = f.fields;
  auto om = [](const GoverningFields& x) {
    const CoefficientFields co = coefficients_from_governing(x);
    ResidualReport r = omega_ratios(co, x);
    r.merge(omega_general_check(membrane_quad(co, x.qn)));
    return r;
  };
  const GatedReport r = gate(ladder(f, c.refine, om), policy_for(f, c));
  const CoefficientFields co = coefficients_from_governing(g);
  const ScalarField a = omega_general_field(membrane_quad(co, g.qn));
  const ScalarField b = orthogonality_field(co, g.qn);
  std::size_t differing = 0;
  double max_diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const bool same = a[k] == b[k] || (std::isnan(a[k]) && std::isnan(b[k]));
    if (!same) {
      ++differing;
      max_diff = std::fmax(max_diff, std::fabs(a[k] - b[k]));
    }
  }
  const std::size_t umbilic = omega_ratio_fields(co).umbilic.flagged_count();
  ojson j = header("omega", input, g);
  j["umbilic_nodes"] = umbilic;
  j["membrane_vs_appendix_max_diff"] = finite_or_null(max_diff);
  j["membrane_vs_appendix_differing_nodes"] = differing;
  j["residuals"] = gated_json(r);
  emit_report(c, j);
  out << "umbilic_nodes " << umbilic << '\n';
  out << "membrane_vs_appendix_max_diff " << fmt(max_diff) << " differing_nodes " << differing
      << '\n';
  print_gated(out, r);
  return r.pass() && differing == 0 ? 0 : 2;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::InvalidParameter:
    case ErrorKind::GridTooSmall:
    case ErrorKind::DegenerateSeed:
      return 1;
    case ErrorKind::InvalidInput:
    case ErrorKind::Parse:
      return 2;
    case ErrorKind::Numerical:
      return 3;
  }
  return 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Membrane O surfaces: seeds, residual checks, reconstruction, Backlund transforms"};
  app.require_subcommand(1);
  Common common;
  std::string input, family = "cmc";
  SeedSpec seed_params;
  BacklundArgs bl;

  CLI::App* seed = app.add_subcommand("seed", "write a seed field file");
  seed->add_option("--family", family, "cmc | pseudospherical | liouville")->required();
  seed->add_option("--alpha0", seed_params.alpha0, "cmc: alpha at x0");
  seed->add_option("--v", seed_params.v, "pseudospherical: kink velocity");
  seed->add_option("--a", seed_params.a, "liouville: a > 0");
  seed->add_option("--c1", seed_params.c1, "liouville: h-branch constant");
  add_common(seed, common);

  CLI::App* verify = app.add_subcommand("verify", "residual report with gates");
  CLI::App* recon = app.add_subcommand("reconstruct", "frame integration, meshes and table");
  CLI::App* stress = app.add_subcommand("stress", "stress resultants and equilibrium");
  CLI::App* back = app.add_subcommand("backlund", "Backlund transform");
  CLI::App* omega = app.add_subcommand("omega", "Omega-surface checks");
  for (CLI::App* sub : {verify, recon, stress, back, omega}) {
    sub->add_option("input", input, "field file")->required();
    add_common(sub, common);
  }
  back->add_option("--m", bl.m, "Backlund parameter m")->required();
  back->add_option("--init", bl.init, "lambda0,omega0,phi0 (omega0,phi0 with --bianchi-darboux)")
      ->delimiter(',')
      ->required();
  back->add_flag("--bianchi-darboux", bl.bianchi_darboux, "reduced CMC system");
  back->add_option("--mesh", bl.mesh, "also write the transformed surface mesh with this prefix");

  std::vector<std::string> argv_store{"mos"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (seed->parsed()) return cmd_seed(common, family, seed_params, out);
    if (verify->parsed()) return cmd_verify(common, input, out);
    if (recon->parsed()) return cmd_reconstruct(common, input, out, err);
    if (stress->parsed()) return cmd_stress(common, input, out);
    if (back->parsed()) return cmd_backlund(common, input, bl, out);
    if (omega->parsed()) return cmd_omega(common, input, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace mos::cli
