#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "metashock/errors.hpp"
#include "metashock/harness.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw metashock::ValidationError("bad number in list: " + tok);
    out.push_back(v);
  }
  return out;
}

// "quadratic" stays a named profile; "0.5,-1,-0.5" becomes coefficients.
void apply_u0(metashock::ExperimentConfig& cfg, const std::string& spec) {
  try {
    std::size_t pos = 0;
    std::stod(spec, &pos);
    cfg.u0_coeffs = parse_list(spec);
    return;
  } catch (const std::invalid_argument&) {
  }
  cfg.u0_name = spec;
  cfg.u0_coeffs.clear();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shock-layer dynamics toolkit"};
  app.require_subcommand(1);

  metashock::ExperimentConfig cfg;
  std::string config_path;
  std::string u0_spec;
  std::string eps_str, samples_str, snaps_str;

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--out", cfg.out_dir, "output directory");
    sc->add_option("--threads", cfg.threads, "sub-run worker threads");
    sc->add_option("--flux", cfg.flux, "flux name (burgers|quartic)");
    sc->add_option("--a", cfg.a, "subcharacteristic speed");
    sc->add_option("--ell", cfg.ell, "half-width of the interval");
  };

  CLI::App* steady = app.add_subcommand("steady", "steady shock-layer family at one offset");
  steady->add_option("--xi", cfg.xi, "shock offset");
  steady->add_option("--eps", eps_str, "comma-separated relaxation scales");
  steady->add_option("--n", cfg.n, "interior grid nodes");
  add_common(steady);

  CLI::App* spectrum = app.add_subcommand("spectrum", "linearization spectrum at one offset");
  spectrum->add_option("--xi", cfg.xi, "shock offset");
  spectrum->add_option("--eps", eps_str, "comma-separated relaxation scales");
  spectrum->add_option("--n", cfg.n, "interior grid nodes");
  add_common(spectrum);

  CLI::App* evolve = app.add_subcommand("evolve", "time-march the relaxation system");
  evolve->add_option("--eps", eps_str, "comma-separated relaxation scales");
  evolve->add_option("--n", cfg.n, "interior grid nodes");
  evolve->add_option("--tmax", cfg.tmax, "final time");
  evolve->add_option("--cfl", cfg.cfl, "transport CFL number");
  evolve->add_option("--u0", u0_spec, "initial profile: name or comma-separated coefficients");
  evolve->add_option("--samples", samples_str, "comma-separated sample times");
  evolve->add_option("--snapshots", snaps_str, "comma-separated snapshot times");
  add_common(evolve);

  CLI::App* reduced = app.add_subcommand("reduced", "integrate the reduced drift law");
  reduced->add_option("--xi0", cfg.xi0, "initial shock offset");
  reduced->add_option("--eps", eps_str, "comma-separated relaxation scales");
  reduced->add_option("--theta", cfg.theta, "drift model (asymptotic|projection)");
  reduced->add_option("--tmax", cfg.tmax, "final time");
  reduced->add_option("--samples", samples_str, "comma-separated sample times");
  add_common(reduced);

  CLI::App* table = app.add_subcommand("table-repro", "reproduce the reference drift table");
  table->add_option("--n", cfg.n, "interior grid nodes");
  table->add_option("--pde-tmax", cfg.pde_tmax, "direct-simulation horizon");
  table->add_flag("--full-pde", cfg.full_pde_long, "march the PDE through the slow phase too");
  add_common(table);

  CLI::App* asym = app.add_subcommand("asymptotics", "closed-form small-eps quantities");
  asym->add_option("--xi", cfg.xi, "shock offset");
  asym->add_option("--eps", eps_str, "comma-separated relaxation scales");
  add_common(asym);

  CLI::App* runsc = app.add_subcommand("run", "execute a JSON experiment config");
  runsc->add_option("--config", config_path, "path to config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (runsc->parsed()) {
      cfg = metashock::load_config(config_path);
    } else {
      cfg.mode = app.get_subcommands().front()->get_name();
      if (!u0_spec.empty()) apply_u0(cfg, u0_spec);
      if (!eps_str.empty()) cfg.eps = parse_list(eps_str);
      if (!samples_str.empty()) cfg.sample_times = parse_list(samples_str);
      if (!snaps_str.empty()) cfg.snapshot_times = parse_list(snaps_str);
    }
    const metashock::RunManifest mf = metashock::run(cfg);
    for (const auto& r : mf.runs) {
      if (r.error.empty()) {
        std::printf("[ok]   %s (%.1f ms)\n", r.name.c_str(), r.wall_ms);
      } else {
        std::fprintf(stderr, "[fail] %s: %s\n", r.name.c_str(), r.error.c_str());
      }
    }
    return mf.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
