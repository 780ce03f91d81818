// Command-line front end: gaussian-demo, solve, forward, reconstruct, verify.
// Flat key=value config files; command-line flags override config values.
// Exit codes: 0 success, 2 config error, 3 precondition violation,
// 4 numerical singularity.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ist/ist.hpp"

namespace fs = std::filesystem;
using namespace ist;

namespace {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  double k = 0.5;
  int grid = 256;
  double domain_min = -10.0;
  double domain_max = 10.0;
  std::vector<double> times = {0.0, 0.25, 0.5};
  double dt = 1e-3;
  std::string out = "out";
  std::string in;
  std::string f_init;
  std::string g_init;
  std::string p_minus = "zero";
  std::string q_plus = "zero";
};

std::vector<double> parse_time_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw config_error("bad time value: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw config_error("empty time list");
  return out;
}

void parse_domain(const std::string& s, Config& cfg) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw config_error("domain must be MIN:MAX, got " + s);
  cfg.domain_min = std::stod(s.substr(0, colon));
  cfg.domain_max = std::stod(s.substr(colon + 1));
}

void apply_key(Config& cfg, const std::string& key, const std::string& val) {
  try {
    if (key == "k")
      cfg.k = std::stod(val);
    else if (key == "grid")
      cfg.grid = std::stoi(val);
    else if (key == "domain")
      parse_domain(val, cfg);
    else if (key == "t")
      cfg.times = parse_time_list(val);
    else if (key == "dt")
      cfg.dt = std::stod(val);
    else if (key == "out")
      cfg.out = val;
    else if (key == "in")
      cfg.in = val;
    else if (key == "f_init")
      cfg.f_init = val;
    else if (key == "g_init")
      cfg.g_init = val;
    else if (key == "p_minus")
      cfg.p_minus = val;
    else if (key == "q_plus")
      cfg.q_plus = val;
    else
      throw config_error("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw config_error("bad value for " + key + ": " + val);
  }
}

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected key=value, got '" + line + "'");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto ke = key.find_last_not_of(" \t");
    key = key.substr(0, ke + 1);
    auto vs = val.find_first_not_of(" \t");
    val = (vs == std::string::npos) ? "" : val.substr(vs);
    try {
      apply_key(cfg, key, val);
    } catch (const config_error& e) {
      throw config_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void validate(const Config& cfg) {
  if (!(cfg.k >= 0.0 && cfg.k < 1.0))
    throw config_error("coupling k must satisfy 0 <= k < 1, got " +
                       std::to_string(cfg.k));
  if (cfg.grid < 2) throw config_error("grid must be >= 2");
  if (!(cfg.domain_min < cfg.domain_max))
    throw config_error("domain MIN must be < MAX");
  if (!(cfg.dt > 0.0)) throw config_error("dt must be > 0");
}

/// Boundary potentials come from a small named family so configs stay flat:
///   zero | const:C | cos:A (A cos(x)) | cosexp:A (A cos(x) e^{-t})
///   | gauss:A (A e^{-x^2})
Potential1D parse_potential(const std::string& s) {
  if (s == "zero" || s.empty()) return zero_potential();
  auto colon = s.find(':');
  std::string name = s.substr(0, colon);
  double a = 0.0;
  if (colon != std::string::npos) {
    try {
      a = std::stod(s.substr(colon + 1));
    } catch (const std::invalid_argument&) {
      throw config_error("bad potential amplitude in '" + s + "'");
    }
  }
  if (name == "const") return [a](double, double) { return a; };
  if (name == "cos") return [a](double x, double) { return a * std::cos(x); };
  if (name == "cosexp")
    return [a](double x, double t) { return a * std::cos(x) * std::exp(-t); };
  if (name == "gauss") return [a](double x, double) { return a * std::exp(-x * x); };
  throw config_error("unknown potential form '" + s +
                     "' (use zero|const:C|cos:A|cosexp:A|gauss:A)");
}

std::string snap_name(const char* stem, std::size_t idx) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03zu.csv", stem, idx);
  return buf;
}

void write_real2d(const std::string& path, const RealField2D& v) {
  ComplexField2D c(v.grid);
  for (std::size_t i = 0; i < v.values.size(); ++i) c.values[i] = v.values[i];
  io::write_field2d_csv(path, c);
}

ComplexField1D default_factor(const Grid1D& g) { return gaussian_profile(g, 0.0); }

ComplexField1D load_factor(const std::string& path, const Grid1D& fallback_grid) {
  if (path.empty()) return default_factor(fallback_grid);
  return io::read_field1d_csv(path);
}

double max_abs_gap(const ComplexField2D& a, const ComplexField2D& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  return worst;
}

int cmd_gaussian_demo(const Config& cfg) {
  Grid1D g = Grid1D::over(cfg.domain_min, cfg.domain_max, cfg.grid);
  Grid2D grid(g, g);
  fs::create_directories(cfg.out);

  io::VerificationSummary rep;
  rep.k = cfg.k;
  rep.grid = cfg.grid;
  rep.times = cfg.times;

  Rank1Data d0;
  bool trivial = cfg.k == 0.0;
  if (!trivial)
    d0 = Rank1Data::make(cfg.k, gaussian_profile(g, 0.0), gaussian_profile(g, 0.0));

  double want = conserved_norm(cfg.k);
  double pipeline_gap = 0.0;
  for (std::size_t m = 0; m < cfg.times.size(); ++m) {
    double t = cfg.times[m];
    SolutionSnapshot closed = gaussian_solution(grid, t, cfg.k);
    io::write_field2d_csv((fs::path(cfg.out) / snap_name("u", m)).string(), closed.u);
    if (trivial) continue;

    auto dt_data = (t == 0.0) ? d0
                              : evolve_rank1(d0, zero_potential(), zero_potential(),
                                             t, cfg.dt);
    ComplexField2D pipe = reconstruct_rank1(dt_data);
    pipeline_gap = std::max(pipeline_gap, max_abs_gap(pipe, closed.u));
    double got = field_norm_sq(pipe);
    rep.conservation_error =
        std::max(rep.conservation_error, std::abs(got - want) / want);
  }
  rep.norm_drift = pipeline_gap;
  io::write_report_json((fs::path(cfg.out) / "report.json").string(), rep);
  std::printf("gaussian-demo: wrote %zu snapshot(s) to %s (conservation_error %.3e)\n",
              cfg.times.size(), cfg.out.c_str(), rep.conservation_error);
  return 0;
}

int cmd_solve(const Config& cfg) {
  Grid1D g = Grid1D::over(cfg.domain_min, cfg.domain_max, cfg.grid);
  fs::create_directories(cfg.out);
  BoundaryData bd;
  bd.p_minus = parse_potential(cfg.p_minus);
  bd.q_plus = parse_potential(cfg.q_plus);

  ComplexField1D f0 = load_factor(cfg.f_init, g);
  ComplexField1D g0 = load_factor(cfg.g_init, g);
  Rank1Data d0 = Rank1Data::make(cfg.k, std::move(f0), std::move(g0));

  io::VerificationSummary rep;
  rep.k = cfg.k;
  rep.grid = cfg.grid;
  rep.times = cfg.times;

  double n0 = operator_norm(d0.kernel());
  double want = conserved_norm(cfg.k);
  std::vector<SolutionSnapshot> snaps;
  for (std::size_t m = 0; m < cfg.times.size(); ++m) {
    double t = cfg.times[m];
    auto dt_data = (t == 0.0)
                       ? d0
                       : evolve_rank1(d0, bd.p_minus, bd.q_plus, t, cfg.dt);
    rep.norm_drift = std::max(rep.norm_drift,
                              std::abs(operator_norm(dt_data.kernel()) - n0));
    SolutionSnapshot s;
    s.t = t;
    s.u = reconstruct_rank1(dt_data);
    auto [v1, v2] = pseudopotentials(s.u, bd, t);
    s.v1 = std::move(v1);
    s.v2 = std::move(v2);
    double got = field_norm_sq(s.u);
    rep.conservation_error =
        std::max(rep.conservation_error, std::abs(got - want) / std::max(want, 1e-300));

    io::write_field2d_csv((fs::path(cfg.out) / snap_name("u", m)).string(), s.u);
    write_real2d((fs::path(cfg.out) / snap_name("v1", m)).string(), s.v1);
    write_real2d((fs::path(cfg.out) / snap_name("v2", m)).string(), s.v2);
    snaps.push_back(std::move(s));
  }

  // residual from the first uniformly spaced snapshot triple
  for (std::size_t m = 0; m + 2 < snaps.size(); ++m) {
    double h1 = snaps[m + 1].t - snaps[m].t;
    double h2 = snaps[m + 2].t - snaps[m + 1].t;
    if (h1 > 0.0 && std::abs(h1 - h2) < 1e-12) {
      ResidualReport rr = pde_residual(snaps[m], snaps[m + 1], snaps[m + 2]);
      rep.residual_linf = rr.linf;
      rep.residual_l2 = rr.l2;
      break;
    }
  }
  io::write_report_json((fs::path(cfg.out) / "report.json").string(), rep);
  std::printf("solve: wrote %zu snapshot(s) to %s (norm_drift %.3e)\n",
              snaps.size(), cfg.out.c_str(), rep.norm_drift);
  return 0;
}

int cmd_forward(const Config& cfg) {
  if (cfg.in.empty()) throw config_error("forward needs in=<u csv> (or --in)");
  fs::create_directories(cfg.out);
  ComplexField2D u = io::read_field2d_csv(cfg.in);
  KernelOperator F = forward_scattering(u);
  ComplexField2D kern(Grid2D(F.row_grid, F.col_grid));
  for (int i = 0; i < F.row_grid.n; ++i)
    for (int j = 0; j < F.col_grid.n; ++j) kern.at(i, j) = F.kernel(i, j);
  io::write_field2d_csv((fs::path(cfg.out) / "kernel.csv").string(), kern);

  io::VerificationSummary rep;
  rep.k = operator_norm(F);
  rep.grid = F.row_grid.n;
  io::write_report_json((fs::path(cfg.out) / "report.json").string(), rep);
  std::printf("forward: kernel norm %.6f written to %s\n", rep.k, cfg.out.c_str());
  return 0;
}

int cmd_reconstruct(const Config& cfg) {
  if (cfg.in.empty()) throw config_error("reconstruct needs in=<kernel csv> (or --in)");
  fs::create_directories(cfg.out);
  ComplexField2D kern = io::read_field2d_csv(cfg.in);
  if (!(kern.grid.gx == kern.grid.gy))
    throw precondition_error("reconstruct: kernel grids must coincide");
  KernelOperator F(kern.grid.gx, kern.grid.gy);
  for (int i = 0; i < F.row_grid.n; ++i)
    for (int j = 0; j < F.col_grid.n; ++j) F.kernel(i, j) = kern.at(i, j);
  double nrm = operator_norm(F);
  if (nrm >= 1.0)
    throw precondition_error(
        "reconstruct: scattering kernel must have norm less than one, got " +
        std::to_string(nrm));
  ComplexField2D u = nystrom_reconstruct(F);
  io::write_field2d_csv((fs::path(cfg.out) / "u.csv").string(), u);

  io::VerificationSummary rep;
  rep.k = nrm;
  rep.grid = F.row_grid.n;
  rep.conservation_error =
      std::abs(field_norm_sq(u) - conserved_norm(nrm)) / conserved_norm(nrm);
  io::write_report_json((fs::path(cfg.out) / "report.json").string(), rep);
  std::printf("reconstruct: wrote field to %s (kernel norm %.6f)\n", cfg.out.c_str(),
              nrm);
  return 0;
}

int cmd_verify(const Config& cfg) {
  if (cfg.in.empty()) throw config_error("verify needs in=<solve output dir> (or --in)");
  fs::create_directories(cfg.out);
  std::ifstream rin(fs::path(cfg.in) / "report.json");
  if (!rin) throw config_error("verify: no report.json in " + cfg.in);
  nlohmann::json j;
  rin >> j;
  double k = j.value("k", 0.0);
  std::vector<double> times = j.value("times", std::vector<double>{});
  if (times.empty()) throw config_error("verify: report has no times");

  io::VerificationSummary rep;
  rep.k = k;
  rep.times = times;
  double want = conserved_norm(k);

  std::vector<SolutionSnapshot> snaps;
  for (std::size_t m = 0; m < times.size(); ++m) {
    SolutionSnapshot s;
    s.t = times[m];
    s.u = io::read_field2d_csv((fs::path(cfg.in) / snap_name("u", m)).string());
    auto v1p = fs::path(cfg.in) / snap_name("v1", m);
    if (fs::exists(v1p)) {
      ComplexField2D v1 = io::read_field2d_csv(v1p.string());
      ComplexField2D v2 =
          io::read_field2d_csv((fs::path(cfg.in) / snap_name("v2", m)).string());
      s.v1 = RealField2D(v1.grid);
      s.v2 = RealField2D(v2.grid);
      for (std::size_t i = 0; i < v1.values.size(); ++i) {
        s.v1.values[i] = v1.values[i].real();
        s.v2.values[i] = v2.values[i].real();
      }
    } else {
      auto [v1, v2] = pseudopotentials(s.u, BoundaryData::zero(), s.t);
      s.v1 = std::move(v1);
      s.v2 = std::move(v2);
    }
    rep.grid = s.u.grid.gx.n;
    if (want > 0.0) {
      double got = field_norm_sq(s.u);
      rep.conservation_error =
          std::max(rep.conservation_error, std::abs(got - want) / want);
    }
    snaps.push_back(std::move(s));
  }

  for (std::size_t m = 0; m + 2 < snaps.size(); ++m) {
    double h1 = snaps[m + 1].t - snaps[m].t;
    double h2 = snaps[m + 2].t - snaps[m + 1].t;
    if (h1 > 0.0 && std::abs(h1 - h2) < 1e-12) {
      ResidualReport rr = pde_residual(snaps[m], snaps[m + 1], snaps[m + 2]);
      rep.residual_linf = std::max(rep.residual_linf, rr.linf);
      rep.residual_l2 = std::max(rep.residual_l2, rr.l2);
    }
  }
  io::write_report_json((fs::path(cfg.out) / "report.json").string(), rep);
  std::printf("verify: residual_linf %.3e, conservation_error %.3e (report in %s)\n",
              rep.residual_linf, rep.conservation_error, cfg.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inverse scattering transform toolkit for a 2+1 integrable system"};
  app.require_subcommand(1);

  std::string config_path, out_dir, domain, tlist, in_path;
  double k_flag = -1.0, dt_flag = -1.0;
  int grid_flag = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--k", k_flag, "coupling constant in [0,1)");
    sub->add_option("--grid", grid_flag, "points per axis");
    sub->add_option("--domain", domain, "domain MIN:MAX");
    sub->add_option("--t", tlist, "comma-separated output times");
    sub->add_option("--dt", dt_flag, "evolution time step");
    sub->add_option("--in", in_path, "input file or directory");
  };
  CLI::App* demo = app.add_subcommand("gaussian-demo", "closed-form example family");
  CLI::App* solve = app.add_subcommand("solve", "evolve data and reconstruct u, v1, v2");
  CLI::App* fwd = app.add_subcommand("forward", "scattering kernel of a potential");
  CLI::App* rec = app.add_subcommand("reconstruct", "potential from a scattering kernel");
  CLI::App* ver = app.add_subcommand("verify", "residual and conservation report");
  for (auto* sub : {demo, solve, fwd, rec, ver}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    // flags override config
    if (k_flag >= 0.0) cfg.k = k_flag;
    if (grid_flag > 0) cfg.grid = grid_flag;
    if (!domain.empty()) parse_domain(domain, cfg);
    if (!tlist.empty()) cfg.times = parse_time_list(tlist);
    if (dt_flag > 0.0) cfg.dt = dt_flag;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (!in_path.empty()) cfg.in = in_path;
    validate(cfg);

    if (demo->parsed()) return cmd_gaussian_demo(cfg);
    if (solve->parsed()) return cmd_solve(cfg);
    if (fwd->parsed()) return cmd_forward(cfg);
    if (rec->parsed()) return cmd_reconstruct(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
    return 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const dimension_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const precondition_error& e) {
    std::fprintf(stderr, "precondition violated: %s\n", e.what());
    return 3;
  } catch (const singularity_error& e) {
    std::fprintf(stderr, "numerical singularity: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
