#include "fisher/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fisher/charpoly.hpp"
#include "fisher/io.hpp"
#include "fisher/ising.hpp"
#include "fisher/kasteleyn.hpp"
#include "fisher/measure.hpp"
#include "fisher/oracle.hpp"
#include "fisher/spectral.hpp"

namespace fisher::cli {

namespace {

using io::json;

// Raised for verdict failures that should exit with 1 after the report is out.
struct Violation {};

struct Common {
  std::uint64_t seed = 0;
  double coeff_tol = 1e-9;
  double zero_tol = 1e-6;
  int grid = 0;  // 0: pick from the polynomial size
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Seed, recorded in the report");
  app->add_option("--coeff-tol", c.coeff_tol, "Relative coefficient cleanup threshold")->check(CLI::PositiveNumber);
  app->add_option("--zero-tol", c.zero_tol, "Relative threshold for declaring a zero")->check(CLI::PositiveNumber);
  app->add_option("--grid", c.grid, "Sampling grid size")->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "Output file (stdout if omitted)");
}

void emit(const Common& c, json j) {
  j["seed"] = c.seed;
  if (c.out.empty())
    std::cout << io::dump(j) << "\n";
  else
    io::write_json(c.out, j);
}

std::vector<double> parse_list(const std::string& s, std::size_t want, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("bad number in ") + what + ": " + item);
    }
  }
  if (want && v.size() != want) throw std::invalid_argument(std::string(what) + " needs " + std::to_string(want) + " comma-separated numbers");
  return v;
}

std::string csv_path(const std::string& json_path, const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (json_path.empty()) return "";
  auto dot = json_path.rfind('.');
  return (dot == std::string::npos ? json_path : json_path.substr(0, dot)) + ".csv";
}

json report_json(const SpectralReport& r) {
  json j;
  j["mode"] = r.mode;
  j["verdict"] = r.verdict;
  j["intersects"] = r.intersects;
  j["location"] = r.location;
  json z = json::array(), s = json::array();
  for (const auto& a : r.zeros) z.push_back({a[0], a[1]});
  for (const auto& a : r.suspicious) s.push_back({a[0], a[1]});
  j["zeros"] = z;
  j["suspicious"] = s;
  j["min_value"] = r.min_value;
  j["max_value"] = r.max_value;
  j["min_offcritical"] = r.min_offcritical;
  j["negative_violation"] = r.negative_violation;
  if (r.evidence) {
    const NodeEvidence& e = *r.evidence;
    j["evidence"] = {{"p", e.p},
                     {"grad", {e.grad[0], e.grad[1]}},
                     {"hess", {{e.hess[0][0], e.hess[0][1]}, {e.hess[1][0], e.hess[1][1]}}},
                     {"stationary", e.stationary},
                     {"double_node", e.double_node}};
  } else {
    j["evidence"] = nullptr;
  }
  return j;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_lattice_build(int m, int n, const std::string& topo, const std::string& weights, const Common& c) {
  json g = {{"m", m}, {"n", n}, {"topology", topo}};
  if (!weights.empty()) {
    json w = io::read_json(weights);
    g["weights"] = w.is_array() ? w : w.at("weights");
  }
  FisherGraph fg = io::graph_from_json(g);
  json out = io::graph_to_json(fg);
  out["num_vertices"] = fg.num_vertices();
  out["num_edges"] = fg.num_edges();
  emit(c, out);
  return 0;
}

int cmd_kasteleyn_z(const std::string& graph, int theta, int tau, const std::string& at, const std::string& angle,
                    const Common& c) {
  FisherGraph g = io::read_graph(graph);
  if ((theta != 0 && theta != 1) || (tau != 0 && tau != 1)) throw std::invalid_argument("--theta and --tau must be 0 or 1");
  cplx z = 1.0, w = 1.0;
  if (!angle.empty()) {
    auto a = parse_list(angle, 2, "--at-angle");
    z = std::polar(1.0, a[0]);
    w = std::polar(1.0, a[1]);
  } else if (!at.empty()) {
    auto a = parse_list(at, 0, "--at");
    if (a.empty() || a.size() > 2) throw std::invalid_argument("--at needs z or z,w");
    z = a[0];
    w = a.size() > 1 ? a[1] : 1.0;
  }
  KasteleynOperator K = assemble(g, canonical_orientation(g), theta, tau);
  cplx det = determinant(evaluate(K, z, w));
  json j = {{"det_re", det.real()}, {"det_im", det.imag()}, {"theta", theta}, {"tau", tau},
            {"z", {z.real(), z.imag()}}, {"w", {w.real(), w.imag()}}};
  // K is real antisymmetric only at z, w in {+1, -1}.
  auto sign_of = [](cplx v) { return std::abs(v - 1.0) < 1e-15 ? 1 : std::abs(v + 1.0) < 1e-15 ? -1 : 0; };
  int zs = sign_of(z), ws = g.topology() == Topology::Cylinder ? 1 : sign_of(w);
  if (zs && ws)
    j["pf"] = pfaffian(evaluate_real(K, zs, ws));
  else
    j["pf"] = nullptr;
  emit(c, j);
  return 0;
}

int cmd_charpoly(const std::string& graph, const std::string& csv, const Common& c) {
  FisherGraph g = io::read_graph(graph);
  Orientation o = canonical_orientation(g);
  json j;
  std::vector<std::vector<double>> rows;
  if (g.topology() == Topology::Torus) {
    LaurentPoly2 p = charpoly_torus(g, o, c.coeff_tol);
    j = io::poly_to_json(p, "torus");
    for (const auto& t : p.terms()) rows.push_back({double(t.i), double(t.j), t.c});
  } else {
    LaurentPoly1 p = charpoly_cylinder(g, o, c.coeff_tol);
    j = io::poly_to_json(p);
    for (int i = -p.bound(); i <= p.bound(); ++i)
      if (p.coeff(i) != 0.0) rows.push_back({double(i), 0.0, p.coeff(i)});
  }
  j["coeff_tol"] = c.coeff_tol;
  emit(c, j);
  if (auto path = csv_path(c.out, csv); !path.empty()) io::write_csv(path, {"i", "j", "c"}, rows);
  return 0;
}

int cmd_spectral_scan(const std::string& poly, const std::string& mode, const std::string& csv,
                      const std::string& range, int points, const Common& c) {
  json pj = io::read_json(poly);
  SpectralOptions opt;
  opt.zero_tol = c.zero_tol;
  json j;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  bool violation = false;
  if (mode == "circle" || mode == "jensen") {
    LaurentPoly1 p = io::poly1_from_json(pj);
    if (mode == "circle") {
      const int grid = c.grid ? c.grid : std::max(256, 16 * p.bound());
      SpectralReport r = scan_unit_circle(p, grid, opt);
      JensenProfile jp = jensen_profile(p, {});
      j = report_json(r);
      j["jump"] = jp.jump;
      j["grid"] = grid;
      j["summary"] = r.verdict == "single-real" ? "single real node at " + r.location + ", jump=" + short_number(jp.jump)
                     : r.verdict == "empty"     ? "no zero on the unit circle, jump=" + short_number(jp.jump)
                                                : "violation: " + r.location;
      header = {"theta", "abs_p"};
      for (const auto& s : r.samples) rows.push_back({s[0], s[1]});
      violation = r.verdict == "violation";
    } else {
      const int grid = c.grid ? c.grid : 31;
      std::vector<double> radii;
      for (int k = 0; k < grid; ++k) radii.push_back(0.5 * std::pow(4.0, grid > 1 ? double(k) / (grid - 1) : 0.5));
      JensenProfile jp = jensen_profile(p, radii);
      json v = json::array();
      for (const auto& a : jp.values) {
        v.push_back({a[0], a[1]});
        rows.push_back({a[0], a[1]});
      }
      j = {{"mode", "jensen"}, {"values", v}, {"left", jp.left}, {"right", jp.right}, {"jump", jp.jump},
           {"node_on_circle", jp.node_on_circle}, {"grid", grid}};
      header = {"r", "F"};
    }
  } else if (mode == "torus") {
    LaurentPoly2 p = io::poly_from_json(pj);
    const int grid = c.grid ? c.grid : std::max(64, 8 * std::max(p.mbound(), p.nbound()));
    SpectralReport r = scan_unit_torus(p, grid, opt);
    j = report_json(r);
    j["grid"] = grid;
    header = {"theta", "phi", "p"};
    for (const auto& s : r.samples) rows.push_back({s[0], s[1], s[2]});
    violation = r.verdict == "violation";
  } else if (mode == "harnack") {
    LaurentPoly2 p = io::poly_from_json(pj);
    const int grid = c.grid ? c.grid : std::max(64, 16 * std::max(p.mbound(), p.nbound()));
    auto lim = parse_list(range, 2, "--range");
    if (!(lim[0] > 0) || !(lim[1] >= lim[0]) || points < 1) throw std::invalid_argument("bad harnack range or point count");
    json counts = json::array();
    int worst = 0;
    for (int a = 0; a < points; ++a)
      for (int b = 0; b < points; ++b) {
        double t = points > 1 ? double(a) / (points - 1) : 0.0, u = points > 1 ? double(b) / (points - 1) : 0.0;
        double x = lim[0] + t * (lim[1] - lim[0]), y = lim[0] + u * (lim[1] - lim[0]);
        int k = harnack_count(p, x, y, grid);
        worst = std::max(worst, k);
        counts.push_back({{"x", x}, {"y", y}, {"count", k}});
        rows.push_back({x, y, double(k)});
      }
    j = {{"mode", "harnack"}, {"counts", counts}, {"max_count", worst}, {"grid", grid},
         {"verdict", worst <= 2 ? "ok" : "violation"}};
    header = {"x", "y", "count"};
    violation = worst > 2;
  } else {
    throw std::invalid_argument("--mode must be circle, torus, harnack or jensen");
  }
  j["zero_tol"] = c.zero_tol;
  emit(c, j);
  if (auto path = csv_path(c.out, csv); !path.empty()) io::write_csv(path, header, rows);
  if (violation) throw Violation{};
  return 0;
}

int cmd_measure_correlations(const std::string& graph, const std::string& e1, const std::string& e2, int dmax,
                             const std::string& report, const Common& c) {
  FisherGraph g = io::read_graph(graph);
  Orientation o = canonical_orientation(g);
  EdgeRef a = parse_edge_ref(e1), b = parse_edge_ref(e2);
  if (dmax < 1) throw std::invalid_argument("--dmax must be >= 1");
  CorrelationCurve cc = correlation_curve(g, o, a, b, dmax);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < cc.distances.size(); ++i) rows.push_back({double(cc.distances[i]), cc.covariances[i]});
  if (!c.out.empty()) io::write_csv(c.out, {"d", "covariance"}, rows);
  InverseKernel probe(g, o, {endpoints(g, a).first.s}, 1);
  json j = {{"e1", to_string(a)},
            {"e2", to_string(b)},
            {"dmax", dmax},
            {"p1", cylinder_set_probability(g, o, {a})},
            {"p2", cylinder_set_probability(g, o, {b})},
            {"classification", dmax >= 8 ? to_string(cc.classification) : "too-few-points"},
            {"rate", std::isfinite(cc.rate) ? json(cc.rate) : json(nullptr)},
            {"plateau", cc.plateau},
            {"r2", cc.r2},
            {"at_floor", cc.at_floor},
            {"pv_corrected", probe.has_node()},
            {"covariances", cc.covariances},
            {"seed", c.seed}};
  if (report.empty())
    std::cout << io::dump(j) << "\n";
  else
    io::write_json(report, j);
  return 0;
}

int cmd_measure_probability(const std::string& graph, const std::vector<std::string>& edges, const Common& c) {
  FisherGraph g = io::read_graph(graph);
  std::vector<EdgeRef> es;
  json names = json::array();
  for (const auto& s : edges) {
    es.push_back(parse_edge_ref(s));
    names.push_back(to_string(es.back()));
  }
  double p = cylinder_set_probability(g, canonical_orientation(g), es);
  emit(c, {{"edges", names}, {"probability", p}});
  return 0;
}

int cmd_ising_critical(const std::string& couplings, const std::string& bracket, const Common& c) {
  IsingSpec s = io::couplings_from_json(io::read_json(couplings));
  auto br = parse_list(bracket, 2, "--bracket");
  CriticalResult r = critical_beta(s, br[0], br[1], c.grid ? c.grid : 64);
  auto brief = [](const SpectralReport& x) {
    return json{{"verdict", x.verdict}, {"location", x.location}, {"min_value", x.min_value}, {"max_value", x.max_value}};
  };
  json j = {{"beta_c", r.beta},
            {"node", {r.z_sign, r.w_sign}},
            {"iterations", r.iterations},
            {"validated", r.validated},
            {"at_critical", brief(r.at_critical)},
            {"below", r.beta - 0.05 > 0 ? brief(r.below) : json(nullptr)},
            {"above", brief(r.above)},
            {"m", s.m},
            {"n", s.n}};
  emit(c, j);
  if (!r.validated) throw Violation{};
  return 0;
}

int cmd_oracle_verify(const std::string& graph, const Common& c) {
  FisherGraph g = io::read_graph(graph);
  oracle::VerifyReport r = oracle::verify(g);
  json checks = json::array();
  for (const auto& k : r.checks)
    checks.push_back({{"name", k.name}, {"ok", k.ok}, {"expected", k.expected}, {"got", k.got}, {"detail", k.detail}});
  emit(c, {{"checks", checks}, {"ok", r.all_ok()}});
  if (!r.all_ok()) throw Violation{};
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Kasteleyn operators, spectral curves and dimer measures on periodic Fisher graphs"};
  app.require_subcommand(1);

  Common c;
  int m = 1, n = 1, theta = 0, tau = 0, dmax = 20, points = 5;
  std::string topo = "torus", weights, graph, at, angle, poly, mode, csv, e1, e2, report, couplings, bracket,
              range = "0.5,2";
  std::vector<std::string> edges;

  auto* lattice = app.add_subcommand("lattice", "Build graph fixtures")->require_subcommand(1);
  auto* build = lattice->add_subcommand("build", "Write a graph JSON");
  build->add_option("--m", m, "Period in x")->required()->check(CLI::PositiveNumber);
  build->add_option("--n", n, "Period in y (torus) or height (cylinder)")->required()->check(CLI::PositiveNumber);
  build->add_option("--topology", topo)->check(CLI::IsMember({"torus", "cylinder"}));
  build->add_option("--weights-file", weights, "JSON weights list or graph file");
  add_common(build, c);

  auto* kast = app.add_subcommand("kasteleyn", "Evaluate K(z,w)")->require_subcommand(1);
  auto* kz = kast->add_subcommand("z", "Determinant and Pfaffian at a point");
  kz->add_option("--graph", graph)->required();
  kz->add_option("--theta", theta);
  kz->add_option("--tau", tau);
  kz->add_option("--at", at, "z,w (real)");
  kz->add_option("--at-angle", angle, "theta,phi for z = e^{i theta}, w = e^{i phi}");
  add_common(kz, c);

  auto* cp = app.add_subcommand("charpoly", "Characteristic polynomial coefficients");
  cp->add_option("--graph", graph)->required();
  cp->add_option("--csv", csv, "CSV path (default: --out with .csv)");
  add_common(cp, c);

  auto* spec = app.add_subcommand("spectral", "Spectral curve diagnostics")->require_subcommand(1);
  auto* scan = spec->add_subcommand("scan", "Scan a coefficient table");
  scan->add_option("--poly", poly)->required();
  scan->add_option("--mode", mode)->required()->check(CLI::IsMember({"circle", "torus", "harnack", "jensen"}));
  scan->add_option("--csv", csv);
  scan->add_option("--range", range, "harnack: lo,hi for both |z| and |w|");
  scan->add_option("--points", points, "harnack: points per axis");
  add_common(scan, c);

  auto* meas = app.add_subcommand("measure", "Limiting dimer measure on the infinite cylinder")->require_subcommand(1);
  auto* corr = meas->add_subcommand("correlations", "Covariance curve, written as CSV to --out");
  corr->add_option("--graph", graph)->required();
  corr->add_option("--e1", e1, "kind:x:y or T:x:y:side")->required();
  corr->add_option("--e2", e2)->required();
  corr->add_option("--dmax", dmax);
  corr->add_option("--report", report, "JSON summary path (stdout if omitted)");
  add_common(corr, c);
  auto* prob = meas->add_subcommand("probability", "Cylinder-set probability");
  prob->add_option("--graph", graph)->required();
  prob->add_option("--edges", edges, "Edges, comma separated")->required()->delimiter(',');
  add_common(prob, c);

  auto* ising = app.add_subcommand("ising", "Ising criticality")->require_subcommand(1);
  auto* crit = ising->add_subcommand("critical", "Locate beta_c");
  crit->add_option("--couplings", couplings)->required();
  crit->add_option("--bracket", bracket, "lo,hi")->required();
  add_common(crit, c);

  auto* orc = app.add_subcommand("oracle", "Brute-force cross-checks")->require_subcommand(1);
  auto* ver = orc->add_subcommand("verify", "Run every applicable check");
  ver->add_option("--graph", graph)->required();
  add_common(ver, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*build) return cmd_lattice_build(m, n, topo, weights, c);
    if (*kz) return cmd_kasteleyn_z(graph, theta, tau, at, angle, c);
    if (*cp) return cmd_charpoly(graph, csv, c);
    if (*scan) return cmd_spectral_scan(poly, mode, csv, range, points, c);
    if (*corr) return cmd_measure_correlations(graph, e1, e2, dmax, report, c);
    if (*prob) return cmd_measure_probability(graph, edges, c);
    if (*crit) return cmd_ising_critical(couplings, bracket, c);
    if (*ver) return cmd_oracle_verify(graph, c);
  } catch (const Violation&) {
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InterpolationError& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> all{"fisher_cli"};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : all) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(all.size()), argv.data());
}

}  // namespace fisher::cli
