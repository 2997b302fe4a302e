#pragma once

#include <string>
#include <vector>

namespace metashock {

// One experiment description; built either from a JSON config file or from
// CLI flags. Field semantics depend on mode where noted.
struct ExperimentConfig {
  std::string mode;                // steady|spectrum|evolve|reduced|table-repro|asymptotics
  std::string flux = "burgers";
  std::vector<double> eps = {0.1};
  double a = 1.0;
  double ell = 1.0;
  double u_minus = 1.0;
  double u_plus = -1.0;
  int n = 800;
  double cfl = 0.45;
  std::string u0_name = "quadratic";  // named initial profile
  std::vector<double> u0_coeffs;      // polynomial in ascending powers; wins when set
  double xi = -0.4;                   // steady/spectrum/asymptotics
  double xi0 = -0.4;                  // reduced
  double tmax = 10.0;
  std::string theta = "asymptotic";   // reduced mode: asymptotic|projection
  std::vector<double> sample_times;
  std::vector<double> snapshot_times;
  double pde_tmax = 1e4;     // table-repro: horizon beyond which the reduced model runs
  bool full_pde_long = false;  // push the PDE to the last table time regardless
  int threads = 1;
  std::string out_dir = "out";
};

ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

struct SubRunRecord {
  std::string name;
  std::vector<std::string> files;  // present and non-empty on success
  double wall_ms = 0.0;
  std::string error;  // empty iff the sub-run succeeded
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::vector<SubRunRecord> runs;
  double wall_ms = 0.0;
  bool ok = false;
};

// Dispatches the config to the module operations, one sub-run per eps value,
// capped at cfg.threads concurrent workers. Outputs are committed atomically
// (tmp then rename); a failing sub-run keeps what it had written so far under
// a ".partial" suffix. The manifest itself lands in <out>/manifest.json.
RunManifest run(const ExperimentConfig& cfg);

// Reference shock-position dataset used by table-repro mode ("shock-table-v1"):
// xi[i][j] is the position at time t_values[i] for eps_values[j].
struct ReferenceTable {
  std::string version;
  std::vector<double> eps_values;
  std::vector<double> t_values;
  std::vector<std::vector<double>> xi;
};

const ReferenceTable& reference_table();

}  // namespace metashock
