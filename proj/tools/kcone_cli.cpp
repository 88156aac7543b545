// kcone: command-line front end for cone geometry computations.
//
// Every command prints one JSON report on stdout. Exit codes: 0 success,
// 1 usage or input error, 2 inadmissible point, 3 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kcone/catalog.hpp"
#include "kcone/cone_geometry.hpp"
#include "kcone/errors.hpp"
#include "kcone/fd_oracle.hpp"
#include "kcone/product_algebra.hpp"
#include "kcone/report.hpp"
#include "kcone/verify.hpp"

using namespace kcone;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInadmissible = 2;
constexpr int kExitVerify = 3;

struct UsageError : Error {
  using Error::Error;
};

struct LoadedForm {
  std::shared_ptr<const IntersectionForm> form;
  CohClass default_omega;
};

LoadedForm load_form(const std::string& name_or_path) {
  if (auto entry = find_catalog(name_or_path)) return {entry->form, entry->default_omega};
  std::ifstream in(name_or_path);
  if (!in) throw UsageError("unknown form '" + name_or_path + "' (not a catalog name or readable file)");
  std::stringstream text;
  text << in.rdbuf();
  auto form = std::make_shared<const IntersectionForm>(parse_manifold(text.str()));
  return {form, CohClass::Ones(form->rank())};
}

CohClass parse_class(const std::string& text, int m) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(parse_rational(item));
  if (static_cast<int>(values.size()) != m)
    throw UsageError("class '" + text + "' has " + std::to_string(values.size()) +
                     " coordinates, expected " + std::to_string(m));
  return Eigen::Map<CohClass>(values.data(), m);
}

Matrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream in(text);
  std::string row;
  while (std::getline(in, row, ';')) {
    std::vector<double> r;
    std::stringstream rs(row);
    std::string item;
    while (std::getline(rs, item, ',')) r.push_back(parse_rational(item));
    if (!rows.empty() && r.size() != rows.front().size())
      throw UsageError("matrix rows have different lengths");
    rows.push_back(std::move(r));
  }
  if (rows.empty() || rows.front().empty()) throw UsageError("empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

CohClass point_arg(const LoadedForm& f, const std::string& at) {
  return at.empty() ? f.default_omega : parse_class(at, f.form->rank());
}

Json tensor_json(const CurvatureTensor& r) {
  const int m = r.rank();
  Json a = Json::array();
  for (int i = 0; i < m; ++i) {
    Json b = Json::array();
    for (int j = 0; j < m; ++j) {
      Json c = Json::array();
      for (int k = 0; k < m; ++k) {
        Json d = Json::array();
        for (int l = 0; l < m; ++l) d.push_back(r(i, j, k, l));
        c.push_back(std::move(d));
      }
      b.push_back(std::move(c));
    }
    a.push_back(std::move(b));
  }
  return a;
}

Json symmetry_json(const SymmetryReport& s) {
  Json j;
  j["antisym_first"] = s.antisym_first;
  j["antisym_second"] = s.antisym_second;
  j["pair"] = s.pair;
  j["bianchi"] = s.bianchi;
  return j;
}

Json criterion_json(const Criterion& c) {
  Json j;
  j["id"] = c.id;
  j["title"] = c.title;
  j["pass"] = c.pass();
  j["notes"] = c.notes;
  return j;
}

// Options shared by the subcommands, bound by CLI11.
struct Options {
  std::string form, form_x, at, z, u, v, alpha, omega, matrix, csv;
  std::vector<std::string> sectional, forms;
  bool ricci = false, scalar = false, derivations = false, kn = false, constant = false;
  double T = 1.0, t_max = 1.0, t_min = 1e-4, degree = 1.0;
  int steps = 1000, halvings = 20;
};

int cmd_info(const Options& o) {
  if (o.form.empty()) {
    Json names = Json::array();
    for (const auto& e : catalog()) names.push_back(e.form->name());
    Json out;
    out["catalog"] = names;
    std::cout << dump_report(make_report("info", "", {}, out, {}));
    return 0;
  }
  const LoadedForm f = load_form(o.form);
  Json out;
  out["manifold"] = Json::parse(serialize_manifold(*f.form));
  out["default_omega"] = to_json(f.default_omega);
  out["volume_at_default"] = volume(*f.form, f.default_omega);
  out["admissible_default"] = admissible(f.form, f.default_omega);
  std::cout << dump_report(make_report("info", f.form->name(), {}, out, {}));
  return 0;
}

int cmd_metric(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const ConePoint p(f.form, point_arg(f, o.at));
  const int m = p.rank();
  CohClass lam(m);
  for (int i = 0; i < m; ++i) lam[i] = lambda1(p, basis_class(m, i));
  Json in;
  in["at"] = to_json(p.omega());
  Json out;
  out["vol"] = p.vol();
  out["gram"] = to_json(p.gram());
  out["gram_inv"] = to_json(p.gram_inv());
  out["lambda"] = to_json(lam);
  std::vector<Check> checks{
      make_check("gram symmetric", (p.gram() - p.gram().transpose()).cwiseAbs().maxCoeff(), 1e-12),
      make_check("g(omega,omega) = n", std::abs(inner(p, p.omega(), p.omega()) - p.dim()), 1e-10),
      make_check("hessian of -log Vol", check_hessian_metric(p).rel(), 1e-6)};
  std::cout << dump_report(make_report("metric", f.form->name(), in, out, checks));
  return 0;
}

int cmd_curvature(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const ConePoint p(f.form, point_arg(f, o.at));
  const CurvatureTensor r = riemann_tensor(p);
  const SymmetryReport sym = symmetry_deviation(r);
  Json in;
  in["at"] = to_json(p.omega());
  Json out;
  out["riemann"] = tensor_json(r);
  out["symmetries"] = symmetry_json(sym);
  if (!o.sectional.empty()) {
    if (o.sectional.size() != 2) throw UsageError("--sectional takes two classes");
    const CohClass u = parse_class(o.sectional[0], p.rank());
    const CohClass v = parse_class(o.sectional[1], p.rank());
    in["sectional"] = {to_json(u), to_json(v)};
    out["sectional"] = sectional(r, u, v);
  }
  if (o.ricci || o.scalar) {
    const DerivedCurvatures d = derived_curvatures(r);
    if (o.ricci) out["ricci"] = to_json(d.ricci);
    if (o.scalar) out["scalar"] = d.scalar;
  }
  std::vector<Check> checks{make_check("curvature symmetries", sym.max(), 1e-12)};
  std::cout << dump_report(make_report("curvature", f.form->name(), in, out, checks));
  return 0;
}

int cmd_connection(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const ConePoint p(f.form, point_arg(f, o.at));
  const CohClass z = parse_class(o.z, p.rank());
  const CohClass u = parse_class(o.u, p.rank());
  const CohClass g = christoffel(p, z, u);
  Json in;
  in["at"] = to_json(p.omega());
  in["z"] = to_json(z);
  in["u"] = to_json(u);
  Json out;
  out["nabla_z_u"] = to_json(g);
  out["lambda_of_result"] = lambda1(p, g);
  std::vector<Check> checks{
      make_check("torsion", (g - christoffel(p, u, z)).cwiseAbs().maxCoeff(), 0.0)};
  std::cout << dump_report(make_report("connection", f.form->name(), in, out, checks));
  return 0;
}

int cmd_geodesic(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const ConePoint p(f.form, point_arg(f, o.at));
  const CohClass v0 = parse_class(o.v, p.rank());
  const GeodesicPath path = integrate_geodesic(p, v0, o.T, o.steps);
  Json in;
  in["at"] = to_json(p.omega());
  in["v"] = to_json(v0);
  in["T"] = o.T;
  in["steps"] = o.steps;
  Json samples = Json::array();
  for (const auto& s : path.samples) {
    Json row;
    row["t"] = s.t;
    row["point"] = to_json(s.point);
    row["velocity"] = to_json(s.velocity);
    row["speed"] = std::sqrt(s.speed2);
    samples.push_back(std::move(row));
  }
  Json out;
  out["final_point"] = to_json(path.samples.back().point);
  out["final_velocity"] = to_json(path.samples.back().velocity);
  out["speed_drift"] = path.speed_drift;
  out["samples"] = std::move(samples);
  if (!o.csv.empty()) {
    std::ofstream csv(o.csv);
    if (!csv) throw UsageError("cannot write " + o.csv);
    csv.precision(17);
    csv << "t";
    for (int i = 0; i < p.rank(); ++i) csv << ",x" << i + 1;
    csv << ",speed\n";
    for (const auto& s : path.samples) {
      csv << s.t;
      for (int i = 0; i < p.rank(); ++i) csv << ',' << s.point[i];
      csv << ',' << std::sqrt(s.speed2) << '\n';
    }
    in["csv"] = o.csv;
  }
  std::vector<Check> checks{make_check("speed drift", path.speed_drift, 1e-8)};
  std::cout << dump_report(make_report("geodesic", f.form->name(), in, out, checks));
  return 0;
}

int cmd_probe(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const CohClass alpha = parse_class(o.alpha, f.form->rank());
  const CohClass omega = point_arg(f, o.omega);
  const auto schedule = halving_schedule(o.t_max, o.t_min, o.halvings);
  const ProbeReport r = boundary_probe(f.form, alpha, omega, schedule);
  Json in;
  in["alpha"] = to_json(alpha);
  in["omega"] = to_json(omega);
  in["t_max"] = o.t_max;
  in["t_min"] = o.t_min;
  in["halvings"] = o.halvings;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j;
    j["t"] = row.t;
    j["vol"] = row.vol;
    j["length"] = row.length;
    j["increment"] = row.increment;
    rows.push_back(std::move(j));
  }
  Json out;
  out["verdict"] = to_string(r.verdict);
  out["divergence_threshold"] = r.divergence_threshold;
  out["min_recent_growth"] = r.min_recent_growth;
  out["tail_variation"] = r.tail_variation;
  out["rows"] = std::move(rows);
  std::cout << dump_report(make_report("probe", f.form->name(), in, out, {}));
  return 0;
}

int cmd_algebra(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const AlgebraAtPoint a(ConePoint(f.form, point_arg(f, o.at)));
  const int m = a.rank();
  Json in;
  in["at"] = to_json(a.base().omega());
  Json structure = Json::array();
  for (int i = 0; i < m; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m; ++j) row.push_back(to_json(CohClass(a.structure().col(i * m + j))));
    structure.push_back(std::move(row));
  }
  Json out;
  out["products"] = std::move(structure);
  const auto ids = algebra_identities(a);
  std::vector<Check> checks{make_check("x.omega identity", ids.x_omega, 1e-10),
                            make_check("omega.omega identity", ids.omega_omega, 1e-10),
                            make_check("commutativity", ids.commutativity, 1e-12)};
  if (o.derivations) {
    const auto d = derivations(a);
    Json gens = Json::array();
    for (const auto& g : d.generators) gens.push_back(to_json(g));
    out["derivations"] = std::move(gens);
    checks.push_back(make_check("derivation system residual", d.max_system_residual, 1e-8));
    checks.push_back(make_check("derivations kill omega", d.max_omega, 1e-8));
    checks.push_back(make_check("derivations land in primitive classes", d.max_lambda, 1e-8));
    checks.push_back(make_check("derivations are skew", d.max_skew, 1e-8));
  }
  if (o.kn) {
    const auto set = kn_decompose(a);
    const auto res = kn_residuals(a, set);
    Json forms = Json::array();
    for (const auto& b : set.forms) forms.push_back(to_json(b));
    out["kn_basis"] = to_json(set.basis);
    out["kn_forms"] = std::move(forms);
    checks.push_back(make_check("product reconstruction", res.reconstruction, 1e-10));
    checks.push_back(make_check("R_alg = -sum b_l ^ b_l", res.curvature, 1e-10));
  }
  if (o.constant) {
    for (auto [sub, name] : {std::pair{Subspace::full, "full"}, std::pair{Subspace::primitive, "primitive"}}) {
      const auto cc = constant_curvature_test(a, sub);
      Json j;
      j["dim"] = cc.dim;
      j["lambda"] = cc.lambda;
      j["residual"] = cc.residual;
      j["tol"] = cc.tol;
      j["constant"] = cc.constant();
      out[std::string("constant_curvature_") + name] = std::move(j);
    }
  }
  std::cout << dump_report(make_report("algebra", f.form->name(), in, out, checks));
  return 0;
}

int cmd_split(const Options& o) {
  const LoadedForm f = load_form(o.form);
  const ConePoint p(f.form, point_arg(f, o.at));
  const Split s = split(p);
  const SplitMetricReport r = split_metric_report(p);
  Json in;
  in["at"] = to_json(p.omega());
  Json out;
  out["t"] = s.t;
  out["omega1"] = to_json(s.omega1);
  out["dt2_coefficient"] = r.dt2;
  out["expected_dt2"] = 1.0 / p.dim();
  out["max_mixed"] = r.max_mixed;
  out["max_slice_dev"] = r.max_slice_dev;
  std::vector<Check> checks{make_check("round trip", r.round_trip_error, 1e-12),
                            make_check("dt2 = 1/n", std::abs(r.dt2 - 1.0 / p.dim()), 1e-8),
                            make_check("block diagonal", r.max_mixed, 1e-10),
                            make_check("slice metric", r.max_slice_dev, 1e-8)};
  std::cout << dump_report(make_report("split", f.form->name(), in, out, checks));
  return 0;
}

int cmd_pullback(const Options& o) {
  const LoadedForm y = load_form(o.form);
  const LoadedForm x = load_form(o.form_x);
  const Matrix map = parse_matrix(o.matrix);
  const CohClass w = point_arg(y, o.at);
  auto rng = seeded_rng(y.form->name() + "/pullback-cli");
  std::vector<CohClass> points{w};
  for (int k = 0; k < 3; ++k) points.push_back(random_admissible_near(y.form, w, 0.2, rng));
  const PullbackReport r = pullback_isometry_check(y.form, x.form, map, o.degree, points);
  Json in;
  in["target"] = x.form->name();
  in["matrix"] = to_json(map);
  in["degree"] = o.degree;
  Json pts = Json::array();
  for (const auto& pt : points) pts.push_back(to_json(pt));
  in["points"] = std::move(pts);
  Json out;
  out["points"] = r.points;
  out["max_vol_dev"] = r.max_vol_dev;
  out["max_gram_dev"] = r.max_gram_dev;
  out["isometric"] = r.isometric();
  std::vector<Check> checks{make_check("volume scales by degree", r.max_vol_dev, 1e-10),
                            make_check("pulled-back gram", r.max_gram_dev, 1e-10)};
  std::cout << dump_report(make_report("pullback", y.form->name(), in, out, checks));
  return r.isometric() ? 0 : kExitVerify;
}

int cmd_verify(const Options& o) {
  std::vector<VerifyTarget> targets;
  std::string label = "catalog";
  if (o.forms.empty()) {
    targets = catalog_targets();
  } else {
    label.clear();
    for (const auto& name : o.forms) {
      const LoadedForm f = load_form(name);
      targets.push_back({f.form, point_arg(f, o.at)});
      label += (label.empty() ? "" : ",") + f.form->name();
      ConePoint check(f.form, targets.back().omega);  // reject inadmissible points early
    }
  }
  const auto criteria = run_verification(targets);
  Json in;
  Json names = Json::array();
  for (const auto& t : targets) names.push_back(t.form->name());
  in["forms"] = std::move(names);
  Json crits = Json::array();
  std::vector<Check> checks;
  bool ok = true;
  for (const auto& c : criteria) {
    crits.push_back(criterion_json(c));
    ok = ok && c.pass();
    for (const auto& ch : c.checks) {
      Check named = ch;
      named.name = std::to_string(c.id) + " " + ch.name;
      checks.push_back(std::move(named));
    }
  }
  Json out;
  out["pass"] = ok;
  out["criteria"] = std::move(crits);
  std::cout << dump_report(make_report("verify", label, in, out, checks));
  return ok ? 0 : kExitVerify;
}

void emit_error(const std::string& command, const std::string& form, const char* kind,
                const std::string& message) {
  Json r = make_report(command, form, {}, {}, {});
  Json err;
  err["kind"] = kind;
  err["message"] = message;
  r["error"] = std::move(err);
  std::cout << dump_report(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian geometry of Kähler cones from intersection forms"};
  app.require_subcommand(1);
  Options o;

  auto* info = app.add_subcommand("info", "Describe a catalog entry or manifold file");
  info->add_option("FORM", o.form, "catalog name or manifold file");

  auto* metric = app.add_subcommand("metric", "Volume and Gram matrix at a point");
  metric->add_option("FORM", o.form)->required();
  metric->add_option("--at", o.at, "point, comma-separated coordinates");

  auto* curvature = app.add_subcommand("curvature", "Riemann tensor and derived curvatures");
  curvature->add_option("FORM", o.form)->required();
  curvature->add_option("--at", o.at);
  curvature->add_option("--sectional", o.sectional, "two classes spanning a plane")->expected(2);
  curvature->add_flag("--ricci", o.ricci);
  curvature->add_flag("--scalar", o.scalar);

  auto* connection = app.add_subcommand("connection", "Levi-Civita connection on constant fields");
  connection->add_option("FORM", o.form)->required();
  connection->add_option("--at", o.at);
  connection->add_option("--z", o.z)->required();
  connection->add_option("--u", o.u)->required();

  auto* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic with RK4");
  geodesic->add_option("FORM", o.form)->required();
  geodesic->add_option("--at", o.at);
  geodesic->add_option("--v", o.v)->required();
  geodesic->add_option("--T", o.T);
  geodesic->add_option("--steps", o.steps);
  geodesic->add_option("--csv", o.csv, "write samples as t,coords...,speed rows");

  auto* probe = app.add_subcommand("probe", "Length of alpha + t omega as t -> 0");
  probe->add_option("FORM", o.form)->required();
  probe->add_option("--alpha", o.alpha)->required();
  probe->add_option("--omega", o.omega);
  probe->add_option("--t-max", o.t_max);
  probe->add_option("--t-min", o.t_min);
  probe->add_option("--halvings", o.halvings);

  auto* algebra = app.add_subcommand("algebra", "The product x.y = Lambda(x y)/2");
  algebra->add_option("FORM", o.form)->required();
  algebra->add_option("--at", o.at);
  algebra->add_flag("--derivations", o.derivations);
  algebra->add_flag("--kn", o.kn);
  algebra->add_flag("--constant-curvature", o.constant);

  auto* split_cmd = app.add_subcommand("split", "Radial splitting (t, unit-volume class)");
  split_cmd->add_option("FORM", o.form)->required();
  split_cmd->add_option("--at", o.at);

  auto* pullback = app.add_subcommand("pullback", "Check that a pullback map is an isometry");
  pullback->add_option("FORM_Y", o.form)->required();
  pullback->add_option("FORM_X", o.form_x)->required();
  pullback->add_option("--matrix", o.matrix, "rows separated by ';', entries by ','")->required();
  pullback->add_option("--degree", o.degree);
  pullback->add_option("--at", o.at, "base point on FORM_Y");

  auto* verify = app.add_subcommand("verify", "Run the full verification suite");
  verify->add_option("FORM", o.forms, "catalog names or manifold files (default: whole catalog)");
  verify->add_option("--at", o.at, "point used for every listed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "info") return cmd_info(o);
    if (command == "metric") return cmd_metric(o);
    if (command == "curvature") return cmd_curvature(o);
    if (command == "connection") return cmd_connection(o);
    if (command == "geodesic") return cmd_geodesic(o);
    if (command == "probe") return cmd_probe(o);
    if (command == "algebra") return cmd_algebra(o);
    if (command == "split") return cmd_split(o);
    if (command == "pullback") return cmd_pullback(o);
    if (command == "verify") return cmd_verify(o);
  } catch (const InadmissiblePoint& e) {
    emit_error(command, o.form, e.kind(), e.what());
    return kExitInadmissible;
  } catch (const Error& e) {
    emit_error(command, o.form, e.kind(), e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
