// thetalab command-line front end.
//
//   thetalab <command> [--config cfg.json] [--grid-n N] [--tol x] [--out dir]
//            [--seed s] [--family f] [--lambda l] [--table path]
//            [--lambda-range a:b:steps]
//
// commands: oracle greens yamabe theta imcf bound sweep props
// exit: 0 all asserted checks pass, 1 computation error or failed check,
//       2 malformed config or usage

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thetalab/experiments.hpp"
#include "thetalab/imcf_hawking.hpp"
#include "thetalab/oracles.hpp"
#include "thetalab/properties.hpp"
#include "thetalab/report.hpp"

using namespace thetalab;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kCommands{"oracle", "greens", "yamabe", "theta", "imcf", "bound", "sweep", "props"};

Json default_config() {
  return {{"family", "pinched"}, {"lambda", 1.0},  {"table", ""},       {"grid_n", 1024}, {"tol", 1e-10},
          {"seed", 42},          {"tau_max", 10.0}, {"samples", 512},    {"factors", 5},
          {"lambda_range", "0:4.5:10"}};
}

// file values over defaults, with type checks; unknown keys are an error
Json merge_config(const Json& file) {
  Json cfg = default_config();
  if (!file.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = file.begin(); it != file.end(); ++it) {
    if (!cfg.contains(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
    const auto& def = cfg[it.key()];
    const bool ok = (def.is_string() && it->is_string()) || (def.is_number_integer() && it->is_number_integer()) ||
                    (def.is_number_float() && it->is_number());
    if (!ok) throw ConfigError("config key '" + it.key() + "' has the wrong type");
    cfg[it.key()] = *it;
  }
  return cfg;
}

std::vector<double> parse_range(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("lambda range must read a:b:steps");
  double a = 0, b = 0;
  int steps = 0;
  try {
    std::size_t k1 = 0, k2 = 0, k3 = 0;
    a = std::stod(parts[0], &k1);
    b = std::stod(parts[1], &k2);
    steps = std::stoi(parts[2], &k3);
    if (k1 != parts[0].size() || k2 != parts[1].size() || k3 != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ConfigError("lambda range must read a:b:steps");
  }
  if (steps < 2 || !(b > a)) throw ConfigError("lambda range needs b > a and steps >= 2");
  std::vector<double> l;
  for (int i = 0; i < steps; ++i) l.push_back(a + (b - a) * i / (steps - 1));
  return l;
}

WarpProfile make_profile(const Json& cfg) {
  const auto fam = cfg["family"].get<std::string>();
  const int n = cfg["grid_n"].get<int>();
  if (fam == "table") return table_profile(cfg["table"].get<std::string>(), n);
  return family_profile(fam, cfg["lambda"].get<double>(), n);
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json theta_json(const ThetaReport& t) {
  return {{"t1", t.t1},
          {"t2", t.t2},
          {"sigma_area", t.sigma_area},
          {"omega_volume", t.omega_volume},
          {"theta", t.theta},
          {"degenerate", t.degenerate},
          {"root_count", t.root_count},
          {"caveats", t.caveats}};
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << s;
}

std::string trace_csv(const FlowTrace& tr) {
  std::ostringstream o;
  o.precision(17);
  o << "tau,t,area,H,hawking\n";
  for (const auto& r : tr.rows) o << r.tau << ',' << r.t << ',' << r.area << ',' << r.H << ',' << r.hawking << '\n';
  return o.str();
}

Json trace_json(const FlowTrace& tr) {
  return {{"direction", to_string(tr.direction)}, {"start", tr.start},       {"complete", tr.complete},
          {"obstruction", tr.obstruction},        {"rows", tr.rows.size()}, {"tau_end", tr.tau_end()},
          {"hawking_start", tr.rows.empty() ? 0.0 : tr.rows.front().hawking},
          {"hawking_end", tr.rows.empty() ? 0.0 : tr.rows.back().hawking},
          {"hawking_monotone", hawking_monotone(tr)}, {"flow_margin", flow_margin(tr)}};
}

struct Checks {
  Json list = Json::array();
  bool ok = true;
  void add(const std::string& name, bool pass, double value) {
    list.push_back({{"name", name}, {"pass", pass}, {"value", num(value)}});
    ok = ok && pass;
  }
};

// runs one command; fills `result`, `checks` and any CSV side files
void run_command(const std::string& cmd, const Json& cfg, const fs::path& out, Json& result, Checks& checks) {
  const int n = cfg["grid_n"].get<int>();
  YamabeOptions yo;
  yo.tol = cfg["tol"].get<double>();
  FlowOptions fo;
  fo.tau_max = cfg["tau_max"].get<double>();
  fo.samples = cfg["samples"].get<int>();

  if (cmd == "oracle") {
    OracleOptions o;
    o.n = n;
    const auto r = run_all(o);
    result = r.to_json();
    for (const auto& c : r.checks) {
      if (c.gating) checks.add(c.name, c.pass, c.abs_error);
    }
    return;
  }
  if (cmd == "sweep") {
    SweepOptions so;
    so.n = n;
    so.yamabe = yo;
    const auto rows = family_sweep(cfg["family"].get<std::string>(), parse_range(cfg["lambda_range"].get<std::string>()), so);
    const auto sum = summarize(rows);
    Json jr = Json::array();
    for (const auto& r : rows) jr.push_back(to_json(r));
    result["rows"] = jr;
    result["summary"] = {{"mu_min", num(sum.mu_min)},
                         {"mu_max", num(sum.mu_max)},
                         {"reduction_factor", num(sum.reduction_factor)},
                         {"theta_monotone", sum.theta_monotone},
                         {"monotone_check", sum.monotone_check}};
    try {
      const auto f = scaling_fit(rows);
      result["scaling_fit"] = {{"exponent", f.exponent}, {"r_squared", f.r_squared}, {"used", f.used}};
    } catch (const Error& e) {
      result["scaling_fit"] = {{"error", to_string(e.kind())}, {"message", e.what()}};
    }
    if (sum.monotone_check == "asserted") checks.add("theta_monotone", sum.theta_monotone, 0.0);
    write_file(out / "sweep.csv", sweep_csv(rows));
    return;
  }

  const auto p = make_profile(cfg);
  result["profile"] = {{"family", p.family_tag()}, {"T", p.T()}, {"n", p.n()}};

  if (cmd == "props") {
    PropertyOptions po;
    po.n = n;
    po.seed = cfg["seed"].get<unsigned>();
    po.factors = cfg["factors"].get<int>();
    const auto r = property_suite(p, po);
    result["properties"] = r.to_json();
    for (const auto& c : r.checks) checks.add(c.name, c.pass, c.abs_error);
    return;
  }
  if (cmd == "yamabe") {
    const auto y = minimize_yamabe_sym(p, yo);
    result["mu_sym"] = y.value;
    result["mu_sigma"] = mu_sigma();
    result["iterations"] = y.iterations;
    result["converged"] = y.converged;
    result["nonpositive"] = y.nonpositive;
    result["residual"] = y.residual;
    checks.add("converged", y.converged, y.residual);
    std::ostringstream o;
    o.precision(17);
    o << "t,u\n";
    for (int i = 0; i <= p.n(); ++i) o << p.grid().node(i) << ',' << y.minimizer[i] << '\n';
    write_file(out / "yamabe.csv", o.str());
    return;
  }

  const auto bm = blowup_two(p);
  if (cmd == "greens") {
    const auto ms = masses(bm);
    result["alpha0_p"] = bm.Gp().alpha0;
    result["alpha0_q"] = bm.Gq().alpha0;
    result["G_p_at_q"] = green_at_opposite(bm.Gp());
    result["G_q_at_p"] = green_at_opposite(bm.Gq());
    result["residual_p"] = green_residual(p, bm.Gp(), p.T() / 4, 3 * p.T() / 4);
    result["paper_mass_p"] = ms.paper_mass_p;
    result["paper_mass_q"] = ms.paper_mass_q;
    result["fit_mass_p"] = ms.fit_mass_p;
    result["fit_mass_q"] = ms.fit_mass_q;
    result["fit_residual"] = ms.fit_residual;
    result["alpha_mean"] = alpha_mean(bm);
    checks.add("green_symmetry", std::abs(green_at_opposite(bm.Gp()) - green_at_opposite(bm.Gq())) <
                                     1e-8 * green_at_opposite(bm.Gp()),
               green_at_opposite(bm.Gp()) - green_at_opposite(bm.Gq()));
    std::ostringstream o;
    o.precision(17);
    o << "t,G_p,G_q,W\n";
    for (int i = 1; i < p.n(); ++i) {
      const double t = p.grid().node(i);
      o << t << ',' << bm.Gp()(t) << ',' << bm.Gq()(t) << ',' << bm.W(t) << '\n';
    }
    write_file(out / "greens.csv", o.str());
    return;
  }

  const auto th = theta(bm);
  result["theta"] = theta_json(th);
  Json roots = Json::array();
  for (const auto& r : find_horizons(bm).roots) roots.push_back({{"t", r.t}, {"kind", to_string(r.kind)}});
  result["roots"] = roots;
  if (cmd == "theta") {
    checks.add("theta_nonnegative", th.theta >= 0.0, th.theta);
    checks.add("degenerate_iff_zero", th.degenerate == (th.theta == 0.0), th.theta);
    return;
  }

  const auto fp = symmetric_imcf(bm, th.t1, Pole::P, fo), fq = symmetric_imcf(bm, th.t2, Pole::Q, fo);
  result["flow_P"] = trace_json(fp);
  result["flow_Q"] = trace_json(fq);
  if (cmd == "imcf") {
    write_file(out / "imcf_P.csv", trace_csv(fp));
    write_file(out / "imcf_Q.csv", trace_csv(fq));
    checks.add("hawking_monotone_P", hawking_monotone(fp), 0.0);
    checks.add("hawking_monotone_Q", hawking_monotone(fq), 0.0);
    const double m = std::min(flow_margin(fp), flow_margin(fq));
    checks.add("flow_inequality", m >= -1e-8, m);
    return;
  }
  if (cmd == "bound") {
    const auto y = minimize_yamabe_sym(p, yo);
    const auto b = bray_neves_bound(bm, th, fp, fq, y.value);
    result["bound"] = {{"a1", b.a1},
                       {"a2", b.a2},
                       {"A1", b.A1},
                       {"A2", b.A2},
                       {"omega_volume", b.omega_volume},
                       {"per_instance_bound", b.per_instance_bound},
                       {"two_route_bound", b.two_route_bound},
                       {"numerator", b.numerator},
                       {"denominator", b.denominator},
                       {"mu_sym", b.mu_estimate},
                       {"theorem_bound_lhs", b.theorem_bound_lhs},
                       {"mu_sigma", b.mu_sigma},
                       {"flow_inequality_margin", b.flow_inequality_margin},
                       {"tau_common", b.tau_common},
                       {"flags", b.flags}};
    checks.add("A1_le_sqrt2", b.A1 <= std::sqrt(2.0) + 1e-12, b.A1);
    checks.add("A2_ge_inv_sqrt2", b.A2 >= 1 / std::sqrt(2.0) - 1e-12, b.A2);
    checks.add("area_sum", b.area_sum_ok, b.a1 + b.a2);
    checks.add("two_routes_agree", std::abs(b.two_route_bound - b.per_instance_bound) <= 1e-10 * b.per_instance_bound,
               b.two_route_bound - b.per_instance_bound);
    return;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thetalab: the Theta invariant of warped metrics on S^3"};
  std::string cmd, config_path, out = "out", family, table, range;
  int grid_n = 0;
  double tol = 0.0, lambda = 0.0;
  unsigned seed = 0;
  app.add_option("command", cmd, "oracle | greens | yamabe | theta | imcf | bound | sweep | props")->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--grid-n", grid_n, "grid intervals (even, >= 64)");
  app.add_option("--tol", tol, "Yamabe minimizer relative tolerance");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for randomized property checks");
  app.add_option("--family", family, "round | pinched | table");
  app.add_option("--lambda", lambda, "family parameter");
  app.add_option("--table", table, "CSV profile with header t,phi");
  app.add_option("--lambda-range", range, "sweep grid a:b:steps");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Json cfg;
  try {
    if (!kCommands.count(cmd)) throw ConfigError("unknown command '" + cmd + "'");
    Json file = Json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config " + config_path);
      try {
        file = Json::parse(f);
      } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    cfg = merge_config(file);
    if (app.count("--grid-n")) cfg["grid_n"] = grid_n;
    if (app.count("--tol")) cfg["tol"] = tol;
    if (app.count("--seed")) cfg["seed"] = seed;
    if (app.count("--family")) cfg["family"] = family;
    if (app.count("--lambda")) cfg["lambda"] = lambda;
    if (app.count("--table")) cfg["table"] = table;
    if (app.count("--lambda-range")) cfg["lambda_range"] = range;
    const auto fam = cfg["family"].get<std::string>();
    if (fam != "round" && fam != "pinched" && fam != "table") throw ConfigError("unknown family '" + fam + "'");
    if (fam == "table" && cfg["table"].get<std::string>().empty()) throw ConfigError("family 'table' needs a table path");
    if (cmd == "sweep") parse_range(cfg["lambda_range"].get<std::string>());
    if (cfg["seed"].get<long long>() < 0) throw ConfigError("seed must be >= 0");
  } catch (const ConfigError& e) {
    std::cerr << "thetalab: " << e.what() << '\n';
    return 2;
  }

  Json report = report_envelope(cmd, cfg);
  Checks checks;
  int rc = 0;
  try {
    fs::create_directories(out);
    Json result = Json::object();
    run_command(cmd, cfg, out, result, checks);
    report["result"] = result;
    report["checks"] = checks.list;
    report["status"] = checks.ok ? "pass" : "fail";
    rc = checks.ok ? 0 : 1;
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    rc = 1;
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = {{"kind", "internal"}, {"message", e.what()}};
    rc = 1;
  }
  try {
    write_file(fs::path(out) / (cmd + ".json"), report.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "thetalab: " << e.what() << '\n';
    return 1;
  }
  std::cout << cmd << ": " << report["status"].get<std::string>() << " (" << (fs::path(out) / (cmd + ".json")).string()
            << ")\n";
  return rc;
}
