// Command-line front end for the dgwave shared library. Every subcommand
// emits CSV tables (17 significant digits) and/or JSON summaries; each file
// carries the tool version and the fully resolved configuration so runs can
// be reproduced byte for byte.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dgwave.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void fail(const std::string& what) {
  std::cerr << "error: " << what << "\n";
  std::exit(1);
}

void check(dg_status st) {
  if (st != DG_OK)
    fail(std::string(dg_status_name(st)) + ": " + dg_last_error());
}

void write_table(const fs::path& path, const Table& table,
                 const std::string& format, const ordered_json& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string());
  if (format == "json") {
    ordered_json doc;
    doc["tool"] = std::string("dgwave ") + dg_version();
    doc["config"] = config;
    doc["columns"] = table.columns;
    auto rows = ordered_json::array();
    for (const auto& r : table.rows) {
      auto row = ordered_json::array();
      for (double v : r) row.push_back(v);
      rows.push_back(row);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << "\n";
  } else {
    out << "# dgwave " << dg_version() << "\n";
    out << "# config " << config.dump() << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
      out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& r : table.rows) {
      for (size_t i = 0; i < r.size(); ++i)
        out << (i ? "," : "") << fmt(r[i]);
      out << "\n";
    }
  }
}

void write_summary(const fs::path& path, const ordered_json& config,
                   const ordered_json& body) {
  ordered_json doc;
  doc["tool"] = std::string("dgwave ") + dg_version();
  doc["config"] = config;
  doc["summary"] = body;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string());
  out << doc.dump(2) << "\n";
}

int parse_branch(const std::string& name) {
  if (name == "physical") return DG_BRANCH_PHYSICAL;
  if (name == "spurious") return DG_BRANCH_SPURIOUS;
  fail("unknown branch: " + name);
  return 0;
}

int parse_filter(const std::string& name) {
  if (name == "none") return DG_FILTER_NONE;
  if (name == "fourier") return DG_FILTER_FOURIER;
  if (name == "bigrid") return DG_FILTER_BIGRID;
  fail("unknown filter: " + name);
  return 0;
}

int parse_engine(const std::string& name) {
  if (name == "spectral") return DG_ENGINE_SPECTRAL;
  if (name == "leapfrog") return DG_ENGINE_LEAPFROG;
  if (name == "both") return DG_ENGINE_BOTH;
  fail("unknown engine: " + name);
  return 0;
}

int parse_data(const std::string& name) {
  if (name == "packet") return DG_DATA_PACKET;
  if (name == "random") return DG_DATA_RANDOM_PHYSICAL;
  if (name == "bigrid") return DG_DATA_BIGRID_RANDOM;
  fail("unknown data kind: " + name);
  return 0;
}

// All tunables of every subcommand, with their resolution order:
// built-in default < config file < explicit flag.
struct Options {
  std::vector<double> s_list{2.0};
  double h = 0.02;
  int N = 512;
  double L = 0.0;  // when > 0, overrides N via N = round(2L/h)
  double T = 2.0;
  double dt_safety = 0.5;
  double delta = 0.5;
  double xi0_frac = 0.5;
  double gamma = 0.0;
  double x_star = 0.0;
  double xi = -1.0;  // groupvel evaluation point; < 0 means whole band
  std::string branch = "physical";
  std::string filter = "none";
  std::string engine = "spectral";
  std::string data = "packet";
  std::string out = "out";
  std::string format = "csv";
  int samples = 4096;
  int n_samples = 200;
  int n_snapshots = 5;
  unsigned long long seed = 1;
  int jobs = 1;
  std::vector<double> h_list;
  std::string config_path;
};

// Flags that the user did not pass fall back to the config file.
void merge_config(CLI::App* cmd, Options& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) fail("cannot read config file " + opt.config_path);
  ordered_json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    fail(std::string("config parse failure: ") + e.what());
  }
  auto absent = [&](const char* flag) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o == nullptr || o->count() == 0;
  };
  auto take = [&](const char* flag, const char* key, auto& slot) {
    if (cfg.contains(key) && absent(flag)) slot = cfg.at(key).get<std::decay_t<decltype(slot)>>();
  };
  take("--s", "s", opt.s_list);
  take("--h", "h", opt.h);
  take("--N", "N", opt.N);
  take("--L", "L", opt.L);
  take("--T", "T", opt.T);
  take("--dt-safety", "dt_safety", opt.dt_safety);
  take("--delta", "delta", opt.delta);
  take("--xi0-frac", "xi0_frac", opt.xi0_frac);
  take("--gamma", "gamma", opt.gamma);
  take("--x-star", "x_star", opt.x_star);
  take("--xi", "xi", opt.xi);
  take("--branch", "branch", opt.branch);
  take("--filter", "filter", opt.filter);
  take("--engine", "engine", opt.engine);
  take("--data", "data", opt.data);
  take("--out", "out", opt.out);
  take("--format", "format", opt.format);
  take("--samples", "samples", opt.samples);
  take("--n-samples", "n_samples", opt.n_samples);
  take("--n-snapshots", "n_snapshots", opt.n_snapshots);
  take("--seed", "seed", opt.seed);
  take("--jobs", "jobs", opt.jobs);
  take("--h-list", "h_list", opt.h_list);
}

void add_common_flags(CLI::App* cmd, Options& opt) {
  // free the short -h name so --h can mean the grid spacing
  cmd->set_help_flag("--help", "print usage");
  cmd->add_option("--s", opt.s_list, "penalty parameter(s), each > 1");
  cmd->add_option("--h", opt.h, "grid spacing");
  cmd->add_option("--N", opt.N, "even cell count");
  cmd->add_option("--L", opt.L, "domain half width (overrides --N)");
  cmd->add_option("--T", opt.T, "final time");
  cmd->add_option("--dt-safety", opt.dt_safety, "leapfrog CFL fraction");
  cmd->add_option("--delta", opt.delta, "Fourier filter band fraction");
  cmd->add_option("--xi0-frac", opt.xi0_frac,
                  "packet carrier as a fraction of pi/h");
  cmd->add_option("--gamma", opt.gamma, "packet width (0: h^{-1/2})");
  cmd->add_option("--x-star", opt.x_star, "packet center");
  cmd->add_option("--xi", opt.xi, "evaluation frequency (groupvel)");
  cmd->add_option("--branch", opt.branch, "physical|spurious")
      ->check(CLI::IsMember({"physical", "spurious"}));
  cmd->add_option("--filter", opt.filter, "none|fourier|bigrid")
      ->check(CLI::IsMember({"none", "fourier", "bigrid"}));
  cmd->add_option("--engine", opt.engine, "spectral|leapfrog|both")
      ->check(CLI::IsMember({"spectral", "leapfrog", "both"}));
  cmd->add_option("--data", opt.data, "packet|random|bigrid")
      ->check(CLI::IsMember({"packet", "random", "bigrid"}));
  cmd->add_option("--out", opt.out, "output directory (created if missing)");
  cmd->add_option("--format", opt.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--samples", opt.samples, "curve sample count");
  cmd->add_option("--n-samples", opt.n_samples, "energy samples over [0,T]");
  cmd->add_option("--n-snapshots", opt.n_snapshots, "state snapshots");
  cmd->add_option("--seed", opt.seed, "random seed");
  cmd->add_option("--jobs", opt.jobs,
                  "sweep parallelism (results are identical for any value)");
  cmd->add_option("--h-list", opt.h_list, "observability spacing sweep");
  cmd->add_option("--config", opt.config_path, "JSON config file");
}

ordered_json resolved_config(const std::string& cmd, const Options& o) {
  ordered_json j;
  j["command"] = cmd;
  j["s"] = o.s_list;
  j["h"] = o.h;
  j["N"] = o.N;
  j["L"] = o.L;
  j["T"] = o.T;
  j["dt_safety"] = o.dt_safety;
  j["delta"] = o.delta;
  j["xi0_frac"] = o.xi0_frac;
  j["gamma"] = o.gamma;
  j["x_star"] = o.x_star;
  j["xi"] = o.xi;
  j["branch"] = o.branch;
  j["filter"] = o.filter;
  j["engine"] = o.engine;
  j["data"] = o.data;
  j["format"] = o.format;
  j["samples"] = o.samples;
  j["n_samples"] = o.n_samples;
  j["n_snapshots"] = o.n_snapshots;
  j["seed"] = o.seed;
  j["jobs"] = o.jobs;
  j["h_list"] = o.h_list;
  return j;
}

std::string s_tag(double s) {
  std::string t = fmt(s);
  for (auto& c : t)
    if (c == '.') c = 'p';
  return t;
}

void finish_geometry(Options& opt) {
  if (opt.L > 0.0) {
    opt.N = static_cast<int>(2.0 * opt.L / opt.h + 0.5);
    if (opt.N % 2) ++opt.N;
  }
}

dg_sim_config sim_config(const Options& o, double s) {
  dg_sim_config cfg;
  dg_sim_config_init(&cfg);
  cfg.s = s;
  cfg.h = o.h;
  cfg.N = o.N;
  cfg.T = o.T;
  cfg.engine = parse_engine(o.engine);
  cfg.dt_safety = o.dt_safety;
  cfg.data_kind = parse_data(o.data);
  cfg.branch = parse_branch(o.branch);
  cfg.xi0_frac = o.xi0_frac;
  cfg.gamma = o.gamma;
  cfg.x_star = o.x_star;
  cfg.filter = parse_filter(o.filter);
  cfg.delta = o.delta;
  cfg.n_samples = o.n_samples;
  cfg.n_snapshots = o.n_snapshots;
  cfg.seed = o.seed;
  return cfg;
}

std::string ext(const Options& o) { return o.format == "json" ? ".json" : ".csv"; }

/* ---- subcommands -------------------------------------------------------- */

void cmd_dispersion(const Options& o, const fs::path& dir,
                    const ordered_json& cfg) {
  for (double s : o.s_list) {
    std::vector<dg_dispersion_sample> curve(o.samples);
    check(dg_dispersion_curve(s, o.h, o.samples, curve.data()));
    Table t;
    t.columns = {"xi",    "lambda_ph",  "lambda_sp",   "vg_ph", "vg_sp",
                 "omega_fd", "lambda_fem", "lambda_cont"};
    for (const auto& c : curve)
      t.rows.push_back({c.xi, c.lambda_ph, c.lambda_sp, c.vg_ph, c.vg_sp,
                        c.omega_fd, c.lambda_fem, c.lambda_cont});
    write_table(dir / ("dispersion_s" + s_tag(s) + ext(o)), t, o.format, cfg);

    Table crit;
    crit.columns = {"branch", "xi"};
    for (int b : {DG_BRANCH_PHYSICAL, DG_BRANCH_SPURIOUS}) {
      int count = 0;
      check(dg_critical_points(s, o.h, b, nullptr, 0, &count));
      std::vector<double> pts(count);
      check(dg_critical_points(s, o.h, b, pts.data(), count, &count));
      for (double xi : pts) crit.rows.push_back({static_cast<double>(b), xi});
    }
    write_table(dir / ("critical_s" + s_tag(s) + ext(o)), crit, o.format, cfg);
  }
}

void cmd_groupvel(const Options& o, const fs::path& dir,
                  const ordered_json& cfg) {
  const double s = o.s_list.front();
  if (o.xi >= 0.0) {
    double vg = 0.0;
    check(dg_group_velocity(s, o.h, o.xi, parse_branch(o.branch), &vg));
    write_summary(dir / "groupvel.json", cfg,
                  ordered_json{{"xi", o.xi}, {"vg", vg}});
    std::cout << fmt(vg) << "\n";
    return;
  }
  std::vector<dg_dispersion_sample> curve(o.samples);
  check(dg_dispersion_curve(s, o.h, o.samples, curve.data()));
  Table t;
  t.columns = {"xi", "vg_ph", "vg_sp"};
  for (const auto& c : curve) t.rows.push_back({c.xi, c.vg_ph, c.vg_sp});
  write_table(dir / ("groupvel_s" + s_tag(s) + ext(o)), t, o.format, cfg);
}

void cmd_critical(const Options& o, const fs::path& dir,
                  const ordered_json& cfg) {
  const double s = o.s_list.front();
  const int b = parse_branch(o.branch);
  int count = 0;
  check(dg_critical_points(s, o.h, b, nullptr, 0, &count));
  std::vector<double> pts(count);
  check(dg_critical_points(s, o.h, b, pts.data(), count, &count));
  std::vector<dg_dispersion_sample> curve(o.samples);
  check(dg_dispersion_curve(s, o.h, o.samples, curve.data()));
  const double dxi = curve[1].xi - curve[0].xi;
  Table t;
  t.columns = {"xi", "lambda", "xih_over_pi"};
  for (double xi : pts) {
    const int i = std::min<int>(o.samples - 1,
                                std::max(0, static_cast<int>(xi / dxi + 0.5)));
    const double lambda =
        (b == DG_BRANCH_PHYSICAL) ? curve[i].lambda_ph : curve[i].lambda_sp;
    t.rows.push_back({xi, lambda, xi * o.h / 3.14159265358979323846});
  }
  write_table(dir / ("critical_s" + s_tag(s) + "_" + o.branch + ext(o)), t,
              o.format, cfg);
}

void cmd_simulate(const Options& o, const fs::path& dir,
                  const ordered_json& cfg) {
  const double s = o.s_list.front();
  dg_sim_config sc = sim_config(o, s);
  dg_sim* sim = nullptr;
  check(dg_sim_run(&sc, &sim));

  const int n = dg_sim_sample_count(sim);
  std::vector<double> t(n), et(n), eo(n);
  check(dg_sim_energy_trace(sim, t.data(), et.data(), eo.data()));
  Table energy;
  energy.columns = {"t", "E_total", "E_Omega"};
  for (int i = 0; i < n; ++i) energy.rows.push_back({t[i], et[i], eo[i]});
  write_table(dir / ("energy" + ext(o)), energy, o.format, cfg);

  const int N = dg_sim_grid_size(sim);
  const int n_snap = dg_sim_snapshot_count(sim);
  for (int k = 0; k < n_snap; ++k) {
    std::vector<double> x(N), ar(N), ai(N), jr(N), ji(N);
    double ts = 0.0;
    check(dg_sim_snapshot(sim, k, &ts, x.data(), ar.data(), ai.data(),
                          jr.data(), ji.data()));
    Table snap;
    snap.columns = {"x", "A_re", "A_im", "J_re", "J_im"};
    for (int j = 0; j < N; ++j)
      snap.rows.push_back({x[j], ar[j], ai[j], jr[j], ji[j]});
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%03d", k);
    ordered_json scfg = cfg;
    scfg["snapshot_time"] = ts;
    write_table(dir / (std::string(name) + ext(o)), snap, o.format, scfg);
  }

  ordered_json body;
  body["N"] = N;
  body["L"] = dg_sim_domain_half_width(sim);
  body["E0"] = et.front();
  body["E_final"] = et.back();
  double drift = 0.0;
  for (double e : et) drift = std::max(drift, std::abs(e - et.front()));
  body["energy_drift_rel"] = (et.front() > 0.0) ? drift / et.front() : drift;
  if (sc.engine == DG_ENGINE_BOTH) {
    double err = 0.0;
    check(dg_sim_cross_engine_error(sim, &err));
    body["cross_engine_error"] = err;
  }
  write_summary(dir / "simulate_summary.json", cfg, body);
  dg_sim_free(sim);
}

void cmd_observability(const Options& o, const fs::path& dir,
                       const ordered_json& cfg) {
  if (o.h_list.empty()) fail("observability requires --h-list");
  const double s = o.s_list.front();
  dg_obs_config oc;
  dg_obs_config_init(&oc);
  oc.s = s;
  oc.T = o.T;
  oc.h_list = o.h_list.data();
  oc.n_h = static_cast<int>(o.h_list.size());
  oc.data_kind = parse_data(o.data);
  oc.branch = parse_branch(o.branch);
  oc.xi0_frac = o.xi0_frac;
  oc.gamma = o.gamma;
  oc.x_star = o.x_star;
  oc.filter = parse_filter(o.filter);
  oc.delta = o.delta;
  oc.engine = parse_engine(o.engine);
  oc.dt_safety = o.dt_safety;
  oc.n_samples = o.n_samples;
  oc.seed = o.seed;
  oc.jobs = o.jobs;

  std::vector<dg_obs_row> rows(oc.n_h);
  dg_obs_summary summary{};
  check(dg_observability_run(&oc, rows.data(), &summary));

  Table t;
  t.columns = {"h", "E_total", "intE_Omega", "C_h"};
  for (const auto& r : rows)
    t.rows.push_back({r.h, r.e_total, r.int_e_omega, r.quotient});
  write_table(dir / ("observability" + ext(o)), t, o.format, cfg);

  ordered_json body;
  body["slope"] = summary.slope;
  body["residual"] = summary.residual;
  body["max_min_ratio"] = summary.max_min_ratio;
  body["monotone"] = summary.monotone != 0;
  body["doubling"] = summary.doubling != 0;
  body["verdict"] = summary.doubling
                        ? "quotient at least doubles at each mesh halving"
                        : (summary.max_min_ratio <= 2.0
                               ? "quotient uniformly bounded (ratio <= 2)"
                               : "quotient varies; see rows");
  write_summary(dir / "observability_summary.json", cfg, body);
}

void cmd_filters(const Options& o, const fs::path& dir,
                 const ordered_json& cfg) {
  const double s = o.s_list.front();
  dg_sim_config sc = sim_config(o, s);
  dg_filter_result* fr = nullptr;
  check(dg_filter_run(&sc, &fr));

  const int N = dg_filter_grid_size(fr);
  std::vector<double> x(N), abr(N), abi(N), jbr(N), jbi(N), aar(N), aai(N),
      jar(N), jai(N);
  check(dg_filter_states(fr, x.data(), abr.data(), abi.data(), jbr.data(),
                         jbi.data(), aar.data(), aai.data(), jar.data(),
                         jai.data()));
  Table st;
  st.columns = {"x",          "A_before_re", "A_before_im", "J_before_re",
                "J_before_im", "A_after_re",  "A_after_im",  "J_after_re",
                "J_after_im"};
  for (int j = 0; j < N; ++j)
    st.rows.push_back({x[j], abr[j], abi[j], jbr[j], jbi[j], aar[j], aai[j],
                       jar[j], jai[j]});
  write_table(dir / ("filter_states" + ext(o)), st, o.format, cfg);

  std::vector<double> xi(N), before(N), after(N);
  check(dg_filter_spectra(fr, xi.data(), before.data(), after.data()));
  Table sp;
  sp.columns = {"xi", "abs_Ahat_before", "abs_Ahat_after"};
  for (int i = 0; i < N; ++i)
    sp.rows.push_back({xi[i], before[i], after[i]});
  write_table(dir / ("filter_spectra" + ext(o)), sp, o.format, cfg);
  dg_filter_free(fr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgwave: dispersion, wave packets and observability for the "
               "P1 interior-penalty DG wave lattice"};
  app.require_subcommand(1);

  std::map<std::string, Options> opts;
  std::map<std::string, CLI::App*> cmds;
  for (const char* name : {"dispersion", "groupvel", "critical", "simulate",
                           "observability", "filters"}) {
    CLI::App* cmd = app.add_subcommand(name);
    cmds[name] = cmd;
    add_common_flags(cmd, opts[name]);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, cmd] : cmds) {
    if (!cmd->parsed()) continue;
    Options& o = opts[name];
    merge_config(cmd, o);
    for (double s : o.s_list)
      if (!(s > 1.0)) fail("s must be > 1");
    if (!(o.h > 0.0)) fail("h must be positive");
    if (!(o.delta > 0.0 && o.delta < 1.0) && o.filter == "fourier")
      fail("delta must lie in (0,1)");
    finish_geometry(o);
    if (o.N % 2 || o.N < 4) fail("N must be even and at least 4");

    const fs::path dir(o.out);
    fs::create_directories(dir);
    const ordered_json cfg = resolved_config(name, o);

    if (name == "dispersion") cmd_dispersion(o, dir, cfg);
    else if (name == "groupvel") cmd_groupvel(o, dir, cfg);
    else if (name == "critical") cmd_critical(o, dir, cfg);
    else if (name == "simulate") cmd_simulate(o, dir, cfg);
    else if (name == "observability") cmd_observability(o, dir, cfg);
    else if (name == "filters") cmd_filters(o, dir, cfg);
  }
  return 0;
}
