#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qlbm/carleman.hpp"
#include "qlbm/chebsolver.hpp"
#include "qlbm/io.hpp"
#include "qlbm/lowering.hpp"
#include "qlbm/oracles.hpp"
#include "qlbm/spectral.hpp"
#include "qlbm/statevec.hpp"
#include "qlbm/timesystem.hpp"

using nlohmann::json;
using namespace qlbm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;

struct RunConfig {
  int nx = 8;
  int ny = 8;
  int nt = 32;
  double h = 0.5;
  double re = 1.0;
  double ma = 0.01;
  int w_idle = 1;
  std::string obstacle = "default";
  std::optional<Obstacle> custom_obstacle;
  std::optional<double> kappa;
  std::optional<int> degree;
  std::optional<double> check_rel_err;
  IndexMode mode = IndexMode::Physical;
  std::string out_dir = "out";
};

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config " + path);
  json j = json::parse(is);
  RunConfig c;
  c.nx = j.value("nx", 8);
  c.ny = j.value("ny", c.nx);
  c.nt = j.value("nt", 32);
  c.h = j.value("h", 0.5);
  c.re = j.value("re", 1.0);
  c.ma = j.value("ma", 0.01);
  c.w_idle = j.value("W", 1);
  if (j.contains("obstacle")) {
    if (j["obstacle"].is_string()) {
      c.obstacle = j["obstacle"].get<std::string>();
      if (c.obstacle != "default" && c.obstacle != "none")
        throw std::invalid_argument("config: obstacle must be default, none, or a rectangle");
    } else {
      c.obstacle = "custom";
      c.custom_obstacle = Obstacle{j["obstacle"].at("x0").get<int>(),
                                   j["obstacle"].at("y0").get<int>(),
                                   j["obstacle"].at("wx").get<int>(),
                                   j["obstacle"].at("wy").get<int>()};
    }
  }
  if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
  if (j.contains("degree")) c.degree = j["degree"].get<int>();
  if (j.contains("check_rel_err")) c.check_rel_err = j["check_rel_err"].get<double>();
  std::string mode = j.value("mode", "physical");
  if (mode == "padded")
    c.mode = IndexMode::Padded;
  else if (mode != "physical")
    throw std::invalid_argument("config: mode must be physical or padded");
  c.out_dir = j.value("out_dir", "out");
  return c;
}

Geometry make_geometry(const RunConfig& c) {
  if (c.obstacle == "none") return Geometry(c.nx, c.ny);
  if (c.obstacle == "default") return Geometry::with_default_obstacle(c.nx, c.ny);
  return Geometry(c.nx, c.ny, c.custom_obstacle);
}

FlowParams make_params(const RunConfig& c, int nt) {
  return FlowParams::derive(c.re, c.ma, c.h, nt, c.w_idle, c.ny);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(std::stoi(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void write_macroscopics(const std::string& path, const Geometry& geom,
                        const std::vector<Field>& traj, double h) {
  CsvWriter w(path, {"t", "x", "y", "rho", "ux", "uy"});
  for (size_t k = 0; k < traj.size(); ++k) {
    Macroscopics m = macroscopics(traj[k]);
    for (int x = 0; x < geom.nx(); ++x)
      for (int y = 0; y < geom.ny(); ++y) {
        size_t n = m.node({x, y});
        w.row({k * h, double(x), double(y), m.rho[n], m.u[n][0], m.u[n][1]});
      }
  }
}

void write_velocity_field(const std::string& path, const Geometry& geom, const Field& f) {
  CsvWriter w(path, {"x", "y", "rho", "ux", "uy"});
  Macroscopics m = macroscopics(f);
  for (int x = 0; x < geom.nx(); ++x)
    for (int y = 0; y < geom.ny(); ++y) {
      size_t n = m.node({x, y});
      w.row({double(x), double(y), m.rho[n], m.u[n][0], m.u[n][1]});
    }
}

int cmd_reference(const RunConfig& cfg) {
  Geometry geom = make_geometry(cfg);
  FlowParams params = make_params(cfg, cfg.nt);
  ensure_directory(cfg.out_dir);

  Field f0 = rest_state(geom);
  auto nonlin = run_nonlinear(f0, geom, params);
  SparseMatrix at = interpolate(build_A(geom, params, IndexMode::Physical), params.h);
  auto lin = run_linear(field_to_vector(f0), at, build_forcing(geom, params), params.nt, params.h);

  write_macroscopics(cfg.out_dir + "/macroscopics_nonlinear.csv", geom, nonlin, params.h);
  std::vector<Field> lin_fields;
  lin_fields.reserve(lin.size());
  for (auto& v : lin) lin_fields.push_back(vector_to_field(geom, v));
  write_macroscopics(cfg.out_dir + "/macroscopics_linear.csv", geom, lin_fields, params.h);

  CsvWriter err(cfg.out_dir + "/error_vs_time.csv", {"t", "rel_err_linear_vs_nonlinear"});
  for (size_t k = 0; k < lin.size(); ++k)
    err.row({k * params.h, relative_error(lin[k], nonlin[k].values)});
  std::cout << "reference: wrote " << lin.size() << " snapshots to " << cfg.out_dir << "\n";
  return 0;
}

int cmd_build_matrix(const RunConfig& cfg) {
  Geometry geom = make_geometry(cfg);
  FlowParams params = make_params(cfg, cfg.nt);
  ensure_directory(cfg.out_dir);
  SparseMatrix a = build_A(geom, params, cfg.mode);
  SparseMatrix at = interpolate(a, params.h);
  SparseMatrix s = build_S(geom, cfg.mode);
  a.write_matrix_market_file(cfg.out_dir + "/A.mtx");
  at.write_matrix_market_file(cfg.out_dir + "/A_tilde.mtx");
  s.write_matrix_market_file(cfg.out_dir + "/S.mtx");
  write_vector_csv(cfg.out_dir + "/b.csv", build_forcing(geom, params, cfg.mode));
  GlobalSystem sys = assemble_system(geom, params, cfg.mode);
  sys.l.write_matrix_market_file(cfg.out_dir + "/L.mtx");
  write_vector_csv(cfg.out_dir + "/b_L.csv", sys.b_l);
  std::cout << "build-matrix: L is " << sys.dim() << " x " << sys.dim() << " with "
            << sys.l.nnz() << " nonzeros\n";
  return 0;
}

int cmd_spectral(const RunConfig& cfg, const std::string& nt_list) {
  std::vector<int> nts = nt_list.empty() ? std::vector<int>{cfg.nt} : parse_int_list(nt_list);
  ensure_directory(cfg.out_dir);
  std::vector<SweepPoint> grid;
  for (int nt : nts) grid.push_back({cfg.nx, nt});
  auto reports = sweep(grid, cfg.re, cfg.ma, cfg.h, cfg.w_idle, cfg.obstacle == "default");
  CsvWriter w(cfg.out_dir + "/spectral.csv",
              {"nx", "ny", "nt", "T", "sigma_min", "sigma_max", "kappa"});
  for (const auto& r : reports) {
    w.row({double(r.nx), double(r.ny), double(r.nt), r.total_time, r.sigma_min, r.sigma_max,
           r.kappa});
    std::cout << "nx=" << r.nx << " nt=" << r.nt << " 1/sigma_min=" << 1.0 / r.sigma_min
              << " kappa=" << r.kappa << "\n";
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg, bool check) {
  if (!cfg.kappa || !cfg.degree)
    throw std::invalid_argument("solve requires kappa and degree in the config");
  Geometry geom = make_geometry(cfg);
  FlowParams params = make_params(cfg, cfg.nt);
  ensure_directory(cfg.out_dir);

  GlobalSystem sys = assemble_system(geom, params, cfg.mode);
  const double alpha = subnorm_alpha_l(params);
  ChebyshevPoly poly = inverse_poly(*cfg.kappa, *cfg.degree);
  std::vector<double> approx = clenshaw_apply(sys, alpha, poly);
  for (double& v : approx) v *= *cfg.kappa / alpha;
  std::vector<double> exact = forward_solve(sys);
  double rel = relative_error(approx, exact);

  json summary;
  summary["kappa"] = *cfg.kappa;
  summary["degree"] = *cfg.degree;
  summary["alpha"] = alpha;
  summary["rel_err_vs_forward_solve"] = rel;
  summary["poly_sup_error"] = poly_sup_error(poly);

  // per-step error curves against both classical references
  Field f0 = rest_state(geom);
  auto nonlin = run_nonlinear(f0, geom, params);
  {
    CsvWriter w(cfg.out_dir + "/error_vs_time.csv",
                {"t", "rel_err_vs_linear", "rel_err_vs_nonlinear"});
    for (int k = 0; k <= params.nt; ++k) {
      auto blk = extract_block(sys, approx, k);
      auto lin_blk = extract_block(sys, exact, k);
      std::vector<double> nl = field_to_vector(nonlin[k]);
      if (cfg.mode == IndexMode::Padded) nl = embed_padded(geom, nl);
      w.row({k * params.h, relative_error(blk, lin_blk), relative_error(blk, nl)});
      if (k == params.nt) {
        summary["final_rel_err_vs_linear"] = relative_error(blk, lin_blk);
        summary["final_rel_err_vs_nonlinear"] = relative_error(blk, nl);
      }
    }
  }
  auto to_field = [&](std::vector<double> v) {
    if (cfg.mode == IndexMode::Padded) v = project_physical(geom, v);
    return vector_to_field(geom, v);
  };
  write_velocity_field(cfg.out_dir + "/velocity_final.csv", geom,
                       to_field(extract_block(sys, approx, params.nt)));
  write_velocity_field(cfg.out_dir + "/velocity_mid.csv", geom,
                       to_field(extract_block(sys, approx, params.nt / 2)));

  std::ofstream os(cfg.out_dir + "/solve_summary.json");
  os << summary.dump(2) << "\n";
  std::cout << "solve: rel l2 error vs forward solve = " << format_double(rel) << "\n";
  if (check) {
    double bound = cfg.check_rel_err.value_or(5e-4);
    if (!(rel <= bound)) {
      std::cerr << "check failed: " << rel << " > " << bound << "\n";
      return kExitCheck;
    }
  }
  return 0;
}

int cmd_circuit_verify(const RunConfig& cfg, bool check) {
  Geometry geom = make_geometry(cfg);
  FlowParams params = make_params(cfg, cfg.nt);
  ensure_directory(cfg.out_dir);

  json report;
  double worst = 0.0;
  {
    Circuit ua = build_UA(geom, params);
    write_circuit_text_file(ua, cfg.out_dir + "/u_a.txt");
    SparseMatrix a_pad = build_A(geom, params, IndexMode::Padded);
    VerifyReport rep = verify(ua, a_pad, ua.subnorm, 1e-10);
    report["u_a"] = {{"max_abs_err", rep.max_abs_err},
                     {"worst_row", rep.worst_row},
                     {"worst_col", rep.worst_col},
                     {"subnorm", ua.subnorm},
                     {"pass", rep.pass}};
    worst = std::max(worst, rep.max_abs_err);
    std::cout << "U_A max abs err " << rep.max_abs_err << "\n";
  }
  {
    Circuit ul = build_UL(geom, params);
    write_circuit_text_file(ul, cfg.out_dir + "/u_l.txt");
    if (ul.layout.num_qubits() <= kMaxSimQubits) {
      GlobalSystem sys = assemble_system(geom, params, IndexMode::Padded);
      VerifyReport rep = verify(ul, sys.l, ul.subnorm, 1e-10);
      report["u_l"] = {{"max_abs_err", rep.max_abs_err},
                       {"worst_row", rep.worst_row},
                       {"worst_col", rep.worst_col},
                       {"subnorm", ul.subnorm},
                       {"pass", rep.pass}};
      worst = std::max(worst, rep.max_abs_err);
      std::cout << "U_L max abs err " << rep.max_abs_err << "\n";
    } else {
      report["u_l"] = {{"skipped", "exceeds the statevector budget"},
                       {"qubits", ul.layout.num_qubits()}};
      std::cout << "U_L skipped (" << ul.layout.num_qubits() << " qubits)\n";
    }
  }
  std::ofstream os(cfg.out_dir + "/verify_report.json");
  os << report.dump(2) << "\n";
  if (check && worst > 1e-10) {
    std::cerr << "check failed: max abs err " << worst << " > 1e-10\n";
    return kExitCheck;
  }
  return 0;
}

int cmd_circuit_count(const RunConfig& cfg, const std::string& nx_list) {
  std::vector<int> nxs = nx_list.empty() ? std::vector<int>{cfg.nx} : parse_int_list(nx_list);
  ensure_directory(cfg.out_dir);
  CsvWriter w(cfg.out_dir + "/counts.csv",
              {"nx", "ny", "nt", "toffoli", "cnot", "ry", "h", "x", "swap", "qubits_total",
               "qubits_ancilla"});
  for (int nx : nxs) {
    RunConfig c = cfg;
    c.nx = c.ny = nx;
    Geometry geom = make_geometry(c);
    FlowParams params = FlowParams::derive(c.re, c.ma, c.h, c.nt, c.w_idle, c.ny);
    GateCounts n = count_gates(build_UL(geom, params));
    w.row({double(nx), double(nx), double(c.nt), double(n.toffoli), double(n.cnot),
           double(n.ry), double(n.h), double(n.x), double(n.swap), double(n.qubits_total),
           double(n.qubits_ancilla)});
    std::cout << "nx=" << nx << " toffoli=" << n.toffoli << " qubits=" << n.qubits_total << "\n";
  }
  return 0;
}

int cmd_resources(const RunConfig& cfg, const std::string& t_list) {
  std::vector<int> ts = t_list.empty() ? std::vector<int>{64, 128, 256, 512, 1024}
                                       : parse_int_list(t_list);
  ensure_directory(cfg.out_dir);
  CsvWriter w(cfg.out_dir + "/resources.csv", {"nx", "T", "kappa_fit", "degree", "t_count"});
  for (int t : ts) {
    RunConfig c = cfg;
    c.nt = static_cast<int>(std::lround(t / c.h));
    Geometry geom = make_geometry(c);
    FlowParams params = FlowParams::derive(c.re, c.ma, c.h, c.nt, c.w_idle, c.ny);
    GateCounts n = count_gates(build_UL(geom, params));
    ResourceEstimate r = estimate_tgates(n, double(t), 0.01, 10.0);
    w.row({double(c.nx), double(t), r.kappa_fit, r.degree, r.t_count});
    std::cout << "nx=" << c.nx << " T=" << t << " t_count=" << r.t_count << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum lattice-Boltzmann pipeline tools"};
  app.require_subcommand(1);

  std::string config_path, out_override, nt_list, nx_list, t_list;
  bool check = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration")->required();
    cmd->add_option("--out", out_override, "output directory (overrides config)");
  };

  CLI::App* reference = app.add_subcommand("reference", "classical time-stepping references");
  add_common(reference);
  CLI::App* build_matrix = app.add_subcommand("build-matrix", "export the assembled operators");
  add_common(build_matrix);
  CLI::App* spectral = app.add_subcommand("spectral", "condition-number estimates");
  add_common(spectral);
  spectral->add_option("--nt-list", nt_list, "comma-separated time-step counts");
  CLI::App* solve = app.add_subcommand("solve", "Clenshaw emulation of the QSVT inversion");
  add_common(solve);
  solve->add_flag("--check", check, "exit 3 when the error bound is violated");
  CLI::App* circuit = app.add_subcommand("circuit", "block-encoding circuits");
  circuit->require_subcommand(1);
  CLI::App* verify_cmd = circuit->add_subcommand("verify", "statevector verification");
  add_common(verify_cmd);
  verify_cmd->add_flag("--check", check, "exit 3 above 1e-10");
  CLI::App* count_cmd = circuit->add_subcommand("count", "lowered gate counts");
  add_common(count_cmd);
  count_cmd->add_option("--nx-list", nx_list, "comma-separated grid sizes");
  CLI::App* resources = app.add_subcommand("resources", "fault-tolerant T-gate estimates");
  add_common(resources);
  resources->add_option("--t-list", t_list, "comma-separated total times");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (reference->parsed()) return cmd_reference(cfg);
    if (build_matrix->parsed()) return cmd_build_matrix(cfg);
    if (spectral->parsed()) return cmd_spectral(cfg, nt_list);
    if (solve->parsed()) return cmd_solve(cfg, check);
    if (circuit->parsed()) {
      if (verify_cmd->parsed()) return cmd_circuit_verify(cfg, check);
      if (count_cmd->parsed()) return cmd_circuit_count(cfg, nx_list);
    }
    if (resources->parsed()) return cmd_resources(cfg, t_list);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
