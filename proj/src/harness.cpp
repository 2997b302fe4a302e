#include "metashock/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "metashock/dynamics.hpp"
#include "metashock/errors.hpp"
#include "metashock/flux.hpp"
#include "metashock/spectral.hpp"
#include "metashock/steady.hpp"
#include "metashock/version.hpp"

namespace metashock {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  if (x == 0.0) return "0";
  char buf[48];
  if (std::abs(x) < 1e-4) {
    std::snprintf(buf, sizeof buf, "%.10e", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", x);
  }
  return buf;
}

std::string fmt_short(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Streamed output with atomic commit: rows land in <final>.tmp and are
// renamed into place on commit; an uncommitted writer (sub-run failure)
// keeps whatever was written under <final>.partial.
class FileWriter {
 public:
  explicit FileWriter(fs::path final_path)
      : final_(std::move(final_path)), tmp_(final_.string() + ".tmp"), out_(tmp_) {
    if (!out_) throw ConfigError("cannot open output file " + tmp_.string());
  }
  FileWriter(const FileWriter&) = delete;
  ~FileWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::rename(tmp_, fs::path(final_.string() + ".partial"), ec);
    }
  }
  std::ofstream& stream() { return out_; }
  std::string commit() {
    out_.close();
    if (!out_) throw ConfigError("write failed for " + tmp_.string());
    fs::rename(tmp_, final_);
    committed_ = true;
    return final_.string();
  }

 private:
  fs::path final_, tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string write_json_file(const fs::path& path, const json& j) {
  FileWriter w(path);
  w.stream() << j.dump(2) << "\n";
  return w.commit();
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["mode"] = c.mode;
  j["flux"] = c.flux;
  j["eps"] = c.eps;
  j["a"] = c.a;
  j["ell"] = c.ell;
  j["u_minus"] = c.u_minus;
  j["u_plus"] = c.u_plus;
  j["n"] = c.n;
  j["cfl"] = c.cfl;
  j["u0"] = c.u0_coeffs.empty() ? json(c.u0_name) : json(c.u0_coeffs);
  j["xi"] = c.xi;
  j["xi0"] = c.xi0;
  j["tmax"] = c.tmax;
  j["theta"] = c.theta;
  j["sample_times"] = c.sample_times;
  j["snapshot_times"] = c.snapshot_times;
  j["pde_tmax"] = c.pde_tmax;
  j["full_pde_long"] = c.full_pde_long;
  j["threads"] = c.threads;
  j["out_dir"] = c.out_dir;
  return j;
}

const std::set<std::string>& known_modes() {
  static const std::set<std::string> m = {"steady",  "spectrum",    "evolve",
                                          "reduced", "table-repro", "asymptotics"};
  return m;
}

Params make_params(const ExperimentConfig& cfg, double eps) {
  Params p;
  p.eps = eps;
  p.a = cfg.a;
  p.ell = cfg.ell;
  p.u_minus = cfg.u_minus;
  p.u_plus = cfg.u_plus;
  return p;
}

std::function<double(double)> build_u0(const ExperimentConfig& cfg) {
  if (!cfg.u0_coeffs.empty()) {
    const std::vector<double> c = cfg.u0_coeffs;
    return [c](double x) {
      double acc = 0.0, pw = 1.0;
      for (double ck : c) {
        acc += ck * pw;
        pw *= x;
      }
      return acc;
    };
  }
  if (cfg.u0_name == "quadratic") return [](double x) { return reference_u0(x); };
  throw ValidationError("u0 must be 'quadratic' or polynomial coefficients");
}

MatchedFamily build_family(const ExperimentConfig& cfg, const Params& p, const FluxSpec& fx,
                           double xi) {
  return cfg.flux == "burgers" ? matched_family(p, xi) : general_flux_family(xi, p, fx);
}

// ---- sub-runs (one eps each unless noted) ----

void run_steady_eps(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                    SubRunRecord& rec) {
  const Params p = make_params(cfg, eps);
  const FluxSpec fx = make_flux(cfg.flux);
  const MatchedFamily fam = build_family(cfg, p, fx, cfg.xi);
  const Grid1D grid(cfg.ell, cfg.n);
  const ResidualFields res = residuals(fam, grid);

  FileWriter csv(dir / ("steady_eps" + fmt_short(eps) + ".csv"));
  csv.stream() << "x,u,v,p1_smooth,p2\n";
  for (std::size_t i = 0; i < res.x.size(); ++i) {
    const double x = res.x[i];
    csv.stream() << fmt_num(x) << ',' << fmt_num(fam.eval_U(x)) << ',' << fmt_num(fam.eval_V(x))
                 << ',' << fmt_num(res.p1_smooth[i]) << ',' << fmt_num(res.p2[i]) << "\n";
  }
  rec.files.push_back(csv.commit());

  json j;
  j["eps"] = eps;
  j["xi"] = cfg.xi;
  j["k_minus"] = fam.k_minus;
  j["k_plus"] = fam.k_plus;
  j["h_minus"] = fam.h_minus;
  j["h_plus"] = fam.h_plus;
  j["c_minus"] = fam.c_minus;
  j["c_plus"] = fam.c_plus;
  j["jump_dxu"] = res.jump_dxu;
  j["p1_mass"] = res.p1_mass;
  j["under_resolved"] = res.under_resolved;
  j["omega1_asymptotic"] = omega1_asymptotic(cfg.xi, p);
  rec.files.push_back(write_json_file(dir / ("steady_eps" + fmt_short(eps) + ".json"), j));
}

void run_spectrum_eps(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                      SubRunRecord& rec) {
  const Params p = make_params(cfg, eps);
  const FluxSpec fx = make_flux(cfg.flux);
  const MatchedFamily fam = build_family(cfg, p, fx, cfg.xi);
  const Grid1D grid(cfg.ell, cfg.n);
  const OperatorAssembly op = assemble(fam, grid);
  const Spectrum sp = eig_general(op.l_jx);
  const SpectralStructure st = classify(sp, eps);

  FileWriter csv(dir / ("spectrum_eps" + fmt_short(eps) + ".csv"));
  csv.stream() << "re,im,class\n";
  for (const auto& lam : sp.values) {
    const bool is_real = std::abs(lam.imag()) <= 1e-6 * std::max(1.0, std::abs(lam.real()));
    const char* tag = !is_real                     ? "complex"
                      : lam.real() == st.lambda1   ? "lambda1"
                                                   : "real";
    csv.stream() << fmt_num(lam.real()) << ',' << fmt_num(lam.imag()) << ',' << tag << "\n";
  }
  rec.files.push_back(csv.commit());

  json j;
  j["eps"] = eps;
  j["xi"] = cfg.xi;
  j["n"] = cfg.n;
  j["lambda1_numeric"] = st.lambda1;
  try {
    const double asy = cfg.flux == "burgers" ? lambda1_asymptotic_burgers(cfg.xi, p)
                                             : lambda1_asymptotic_general(cfg.xi, p, fx);
    j["lambda1_asymptotic"] = asy;
    j["ratio"] = asy != 0.0 ? json(st.lambda1 / asy) : json(nullptr);
  } catch (const UnsupportedParameterError&) {
    j["lambda1_asymptotic"] = nullptr;
    j["ratio"] = nullptr;
  }
  j["k_count"] = st.k_count;
  j["complex_band_re"] = st.complex_band_re;
  j["under_resolved"] = op.under_resolved;
  j["a_convention"] = "z";
  rec.files.push_back(
      write_json_file(dir / ("spectrum_summary_eps" + fmt_short(eps) + ".json"), j));
}

void run_evolve_eps(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                    SubRunRecord& rec) {
  const Params p = make_params(cfg, eps);
  const FluxSpec fx = make_flux(cfg.flux);
  const Grid1D grid(cfg.ell, cfg.n);
  std::vector<double> samples = cfg.sample_times;
  if (samples.empty()) {
    for (double t : {0.2, 1.0, 10.0})
      if (t < cfg.tmax) samples.push_back(t);
  }

  EvolveOptions opt;
  opt.cfl = cfg.cfl;
  opt.track_ynorm = true;
  opt.snapshot_times = cfg.snapshot_times;

  FileWriter csv(dir / ("evolve_eps" + fmt_short(eps) + ".csv"));
  csv.stream() << "t,xi_zero,xi_vmin,ynorm\n";
  opt.on_sample = [&csv](const GridState& s, double xz, double xv, double yn) {
    csv.stream() << fmt_num(s.time) << ',' << fmt_num(xz) << ',' << fmt_num(xv) << ','
                 << fmt_num(yn) << "\n";
  };
  EvolveResult er = evolve(p, fx, build_u0(cfg), cfg.tmax, grid, samples, opt);
  rec.files.push_back(csv.commit());

  for (const GridState& s : er.snapshots) {
    FileWriter snap(dir /
                    ("state_eps" + fmt_short(eps) + "_t" + fmt_short(s.time) + ".csv"));
    snap.stream() << "x,u,v\n";
    for (int jn = 0; jn <= grid.n + 1; ++jn)
      snap.stream() << fmt_num(grid.x_full(jn)) << ',' << fmt_num(s.u[jn]) << ','
                    << fmt_num(s.v[jn]) << "\n";
    rec.files.push_back(snap.commit());
  }
}

void run_reduced_eps(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                     SubRunRecord& rec) {
  const Params p = make_params(cfg, eps);
  const FluxSpec fx = make_flux(cfg.flux);
  ThetaModel model;
  model.mode = cfg.theta == "projection" ? ThetaMode::Projection : ThetaMode::Asymptotic;
  const ShockTrace tr = reduced_ode_solve(cfg.xi0, cfg.tmax, model, p, fx, cfg.sample_times);

  FileWriter csv(dir / ("reduced_eps" + fmt_short(eps) + ".csv"));
  csv.stream() << "t,xi\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    csv.stream() << fmt_num(tr.t[i]) << ',' << fmt_num(tr.xi[i]) << "\n";
  rec.files.push_back(csv.commit());
}

void run_asymptotics_eps(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                         SubRunRecord& rec) {
  const Params p = make_params(cfg, eps);
  const FluxSpec fx = make_flux(cfg.flux);
  const TailConstants tc = tail_constants(fx, p.u_star());
  ThetaModel model;

  json j;
  j["eps"] = eps;
  j["xi"] = cfg.xi;
  j["lambda1_asymptotic"] = cfg.flux == "burgers" ? lambda1_asymptotic_burgers(cfg.xi, p)
                                                  : lambda1_asymptotic_general(cfg.xi, p, fx);
  j["theta_asymptotic"] = theta_eval(model, cfg.xi, p, fx);
  j["omega1"] = omega1_asymptotic(cfg.xi, p);
  j["nu_minus"] = tc.nu_minus;
  j["nu_plus"] = tc.nu_plus;
  j["z_minus"] = tc.z_minus;
  j["z_plus"] = tc.z_plus;
  j["a_minus"] = tc.a_minus;
  j["a_plus"] = tc.a_plus;
  j["a_convention"] = "z";
  rec.files.push_back(write_json_file(dir / ("asymptotics_eps" + fmt_short(eps) + ".json"), j));

  FileWriter csv(dir / ("asymptotics_eps" + fmt_short(eps) + ".csv"));
  csv.stream() << "xi,theta,omega1,lambda1_asymptotic\n";
  const int m = 81;
  for (int i = 0; i < m; ++i) {
    const double xi = -0.9 * cfg.ell + 1.8 * cfg.ell * i / (m - 1);
    const double lam = cfg.flux == "burgers" ? lambda1_asymptotic_burgers(xi, p)
                                             : lambda1_asymptotic_general(xi, p, fx);
    csv.stream() << fmt_num(xi) << ',' << fmt_num(theta_eval(model, xi, p, fx)) << ','
                 << fmt_num(omega1_asymptotic(xi, p)) << ',' << fmt_num(lam) << "\n";
  }
  rec.files.push_back(csv.commit());
}

// The whole table grid runs as one sub-run: PDE up to the horizon, the
// reduced drift model (seeded with the PDE endpoint) beyond it.
void run_table(const ExperimentConfig& cfg, const fs::path& dir, SubRunRecord& rec) {
  const ReferenceTable& ref = reference_table();
  const FluxSpec fx = make_flux(cfg.flux);
  const Grid1D grid(cfg.ell, cfg.n);

  FileWriter csv(dir / "table_comparison.csv");
  csv.stream() << "eps,t,xi_ref,xi_ours,abs_diff\n";
  for (std::size_t j = 0; j < ref.eps_values.size(); ++j) {
    const double eps = ref.eps_values[j];
    const Params p = make_params(cfg, eps);
    const double t_last = ref.t_values.back();
    const double horizon = cfg.full_pde_long ? t_last : std::min(cfg.pde_tmax, t_last);

    std::vector<double> pde_samples;
    for (double t : ref.t_values)
      if (t <= horizon) pde_samples.push_back(t);
    EvolveOptions opt;
    opt.cfl = cfg.cfl;
    EvolveResult er = evolve(p, fx, build_u0(cfg), horizon, grid, pde_samples, opt);

    std::vector<double> ours(ref.t_values.size(),
                             std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < ref.t_values.size(); ++i) {
      for (std::size_t k = 0; k < er.zero_trace.t.size(); ++k) {
        if (er.zero_trace.t[k] == ref.t_values[i]) ours[i] = er.zero_trace.xi[k];
      }
    }
    if (horizon < t_last) {
      const double xi_h = er.zero_trace.xi.back();
      std::vector<double> late;
      for (double t : ref.t_values)
        if (t > horizon) late.push_back(t - horizon);
      ThetaModel model;  // asymptotic drift for the slow phase
      const ShockTrace tr = reduced_ode_solve(xi_h, t_last - horizon, model, p, fx, late);
      std::size_t k = 0;
      for (std::size_t i = 0; i < ref.t_values.size(); ++i)
        if (ref.t_values[i] > horizon) ours[i] = tr.xi[k++];
    }
    for (std::size_t i = 0; i < ref.t_values.size(); ++i) {
      csv.stream() << fmt_short(eps) << ',' << fmt_num(ref.t_values[i]) << ','
                   << fmt_num(ref.xi[i][j]) << ',' << fmt_num(ours[i]) << ','
                   << fmt_num(std::abs(ours[i] - ref.xi[i][j])) << "\n";
    }
  }
  rec.files.push_back(csv.commit());
}

}  // namespace

const ReferenceTable& reference_table() {
  static const ReferenceTable tbl = [] {
    ReferenceTable t;
    t.version = "shock-table-v1";
    t.eps_values = {0.1, 0.07, 0.055, 0.04, 0.02};
    t.t_values = {0.2, 1.0, 10.0, 1e3, 1e4, 0.5e6};
    t.xi = {
        {-0.4008, -0.4020, -0.4029, -0.4040, -0.4059},
        {-0.3314, -0.3345, -0.3360, -0.3374, -0.3389},
        {-0.3070, -0.3263, -0.3304, -0.3320, -0.3326},
        {-0.0103, -0.1600, -0.2562, -0.3181, -0.3325},
        {-1.9725e-12, -0.0084, -0.1115, -0.2531, -0.3320},
        {-1.9725e-12, -2.2102e-11, -1.5057e-10, -0.0379, -0.3099},
    };
    return t;
  }();
  return tbl;
}

void validate_config(const ExperimentConfig& cfg) {
  if (!known_modes().count(cfg.mode))
    throw ValidationError(
        "mode must be one of steady|spectrum|evolve|reduced|table-repro|asymptotics");
  if (cfg.eps.empty()) throw ValidationError("eps must be non-empty");
  for (double e : cfg.eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("eps must be positive");
  if (!(cfg.a > 0.0)) throw ValidationError("a must be positive");
  if (!(cfg.ell > 0.0)) throw ValidationError("ell must be positive");
  if (!std::isfinite(cfg.u_minus) || !std::isfinite(cfg.u_plus))
    throw ValidationError("u_minus/u_plus must be finite");
  if (!(cfg.u_minus > cfg.u_plus)) throw ValidationError("u_minus must exceed u_plus");
  if (cfg.n < 1) throw ValidationError("n must be at least 1");
  if (cfg.mode == "spectrum" && cfg.n > 1200)
    throw ValidationError("n must be at most 1200 in spectrum mode");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 0.45)
    throw ValidationError("cfl must lie in (0, 0.45]");
  if ((cfg.mode == "evolve" || cfg.mode == "reduced") && !(cfg.tmax > 0.0))
    throw ValidationError("tmax must be positive");
  if (cfg.theta != "asymptotic" && cfg.theta != "projection")
    throw ValidationError("theta must be asymptotic or projection");
  if ((cfg.mode == "steady" || cfg.mode == "spectrum" || cfg.mode == "asymptotics") &&
      std::abs(cfg.xi) >= cfg.ell)
    throw ValidationError("xi must lie strictly inside (-ell, ell)");
  if (cfg.mode == "reduced" && std::abs(cfg.xi0) >= cfg.ell)
    throw ValidationError("xi0 must lie strictly inside (-ell, ell)");
  for (double t : cfg.sample_times)
    if (t < 0.0) throw ValidationError("sample times must be nonnegative");
  for (double t : cfg.snapshot_times)
    if (t < 0.0) throw ValidationError("snapshot times must be nonnegative");
  if (!(cfg.pde_tmax > 0.0)) throw ValidationError("pde_tmax must be positive");
  if (cfg.threads < 1) throw ValidationError("threads must be at least 1");
  make_flux(cfg.flux);  // InvalidFluxError on unknown names
  if (cfg.u0_coeffs.empty() && cfg.u0_name != "quadratic")
    throw ValidationError("u0 must be 'quadratic' or polynomial coefficients");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("JSON parse error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config root must be a JSON object");

  static const std::set<std::string> known = {
      "mode", "flux", "eps",   "a",     "ell",          "u_minus",        "u_plus",
      "n",    "cfl",  "u0",    "xi",    "xi0",          "tmax",           "theta",
      "sample_times", "snapshot_times", "pde_tmax",     "full_pde_long",  "threads",
      "out_dir"};
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw ValidationError("unknown config field: " + item.key());

  ExperimentConfig cfg;
  auto get_num = [&](const char* k, double& dst) {
    if (!j.contains(k)) return;
    if (!j[k].is_number()) throw ValidationError(std::string(k) + " must be a number");
    dst = j[k].get<double>();
  };
  auto get_list = [&](const char* k, std::vector<double>& dst) {
    if (!j.contains(k)) return;
    if (!j[k].is_array()) throw ValidationError(std::string(k) + " must be an array");
    dst.clear();
    for (const auto& v : j[k]) {
      if (!v.is_number()) throw ValidationError(std::string(k) + " entries must be numbers");
      dst.push_back(v.get<double>());
    }
  };

  if (!j.contains("mode") || !j["mode"].is_string())
    throw ValidationError("mode is required and must be a string");
  cfg.mode = j["mode"].get<std::string>();
  if (j.contains("flux")) {
    if (!j["flux"].is_string()) throw ValidationError("flux must be a string");
    cfg.flux = j["flux"].get<std::string>();
  }
  if (j.contains("eps")) {
    if (j["eps"].is_number()) {
      cfg.eps = {j["eps"].get<double>()};
    } else {
      get_list("eps", cfg.eps);
    }
  }
  get_num("a", cfg.a);
  get_num("ell", cfg.ell);
  get_num("u_minus", cfg.u_minus);
  get_num("u_plus", cfg.u_plus);
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) throw ValidationError("n must be an integer");
    cfg.n = j["n"].get<int>();
  }
  get_num("cfl", cfg.cfl);
  if (j.contains("u0")) {
    if (j["u0"].is_string()) {
      cfg.u0_name = j["u0"].get<std::string>();
    } else if (j["u0"].is_array()) {
      get_list("u0", cfg.u0_coeffs);
    } else {
      throw ValidationError("u0 must be a name or an array of coefficients");
    }
  }
  get_num("xi", cfg.xi);
  get_num("xi0", cfg.xi0);
  get_num("tmax", cfg.tmax);
  if (j.contains("theta")) {
    if (!j["theta"].is_string()) throw ValidationError("theta must be a string");
    cfg.theta = j["theta"].get<std::string>();
  }
  get_list("sample_times", cfg.sample_times);
  get_list("snapshot_times", cfg.snapshot_times);
  get_num("pde_tmax", cfg.pde_tmax);
  if (j.contains("full_pde_long")) {
    if (!j["full_pde_long"].is_boolean())
      throw ValidationError("full_pde_long must be a boolean");
    cfg.full_pde_long = j["full_pde_long"].get<bool>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer()) throw ValidationError("threads must be an integer");
    cfg.threads = j["threads"].get<int>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw ValidationError("out_dir must be a string");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }
  validate_config(cfg);
  return cfg;
}

RunManifest run(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (const char* env = std::getenv("METASHOCK_OUT")) cfg.out_dir = env;
  validate_config(cfg);
  auto sort_unique = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  sort_unique(cfg.sample_times);
  sort_unique(cfg.snapshot_times);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  RunManifest mf;
  mf.version = kVersion;
  mf.config_hash = fnv1a_hex(config_json(cfg).dump());

  using Job = std::function<void(SubRunRecord&)>;
  std::vector<Job> jobs;
  if (cfg.mode == "table-repro") {
    mf.runs.push_back({"table-repro", {}, 0.0, ""});
    jobs.push_back([&cfg, &dir](SubRunRecord& rec) { run_table(cfg, dir, rec); });
  } else {
    for (double eps : cfg.eps) {
      mf.runs.push_back({cfg.mode + "_eps" + fmt_short(eps), {}, 0.0, ""});
      jobs.push_back([&cfg, &dir, eps](SubRunRecord& rec) {
        if (cfg.mode == "steady") run_steady_eps(cfg, eps, dir, rec);
        else if (cfg.mode == "spectrum") run_spectrum_eps(cfg, eps, dir, rec);
        else if (cfg.mode == "evolve") run_evolve_eps(cfg, eps, dir, rec);
        else if (cfg.mode == "reduced") run_reduced_eps(cfg, eps, dir, rec);
        else run_asymptotics_eps(cfg, eps, dir, rec);
      });
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto run_one = [&](std::size_t i) {
    const auto s0 = std::chrono::steady_clock::now();
    try {
      jobs[i](mf.runs[i]);
    } catch (const std::exception& e) {
      mf.runs[i].error = e.what();
    }
    mf.runs[i].wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s0)
            .count();
  };
  const int workers = std::min<int>(cfg.threads, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= jobs.size()) return;
            i = next++;
          }
          run_one(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  mf.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  mf.ok = std::all_of(mf.runs.begin(), mf.runs.end(),
                      [](const SubRunRecord& r) { return r.error.empty(); });

  json j;
  j["config_hash"] = mf.config_hash;
  j["version"] = mf.version;
  j["ok"] = mf.ok;
  j["wall_ms"] = mf.wall_ms;
  j["runs"] = json::array();
  for (const auto& r : mf.runs) {
    json rj;
    rj["name"] = r.name;
    rj["files"] = r.files;
    rj["wall_ms"] = r.wall_ms;
    rj["error"] = r.error;
    j["runs"].push_back(rj);
  }
  write_json_file(dir / "manifest.json", j);
  return mf;
}

}  // namespace metashock
