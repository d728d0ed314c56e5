#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qga/engine.hpp"
#include "qga/spectral.hpp"

namespace qga {

// Least-squares fit of F(G) = F_inf + beta * gamma^G over the generations
// after burn-in.
struct FitResult {
  double f_inf = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double rms = 0.0;
};

FitResult fit_convergence(const std::vector<double>& series, int burn_in);

struct ExperimentConfig {
  int n = 4;
  int c = 2;
  int num_hamiltonians = 200;
  int num_initial_states = 10;
  int generations = 10;
  double pm = 1.0 / 24.0;
  std::vector<std::string> variants = {"bcqo:off", "bcqo:sampled", "uqcm:off", "uqcm:sampled"};
  int burn_in = 4;
  std::uint64_t master_seed = 42;
  std::string init_mode = "haar-full";
  bool spectral = true;  // channel eigenanalysis per (hamiltonian, cloner), mutation off
  int threads = 0;       // 0: QGA_THREADS env, else hardware concurrency
  std::string output_dir = ".";  // where the bench subcommand writes its files

  static ExperimentConfig paper_preset();
  static ExperimentConfig reduced_preset();  // 50 hamiltonians x 5 initial states
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);

  std::string to_json() const;  // canonical key order
  std::string config_hash() const;
  std::vector<Variant> parsed_variants() const;
  std::vector<Cloner> distinct_cloners() const;
  void validate() const;
  int resolved_threads() const;
};

// One trajectory of the benchmark: fidelity/energy series plus its fit.
struct BenchRecord {
  int ham_index = 0;
  std::string ham_hash;
  std::string variant;
  std::uint64_t seed = 0;
  std::string init_mode;
  std::vector<double> fidelity_series;
  std::vector<double> energy_series;
  FitResult fit;
  bool failed = false;
  std::string cause;

  std::string to_json_line() const;
  static BenchRecord from_json_line(const std::string& line);
};

// Everything produced for one problem Hamiltonian. Records are ordered
// (variant-major, initial state minor) matching the config's variant list.
struct HamResult {
  int index = 0;
  std::string ham_hash;
  std::vector<BenchRecord> records;
  std::vector<SpectralReport> spectral;
  bool failed = false;
  std::string cause;
};

// Runs the experiment over a worker pool (one Hamiltonian per task) and
// delivers HamResults to the sink in index order. All variants of one
// Hamiltonian consume identical initial states.
void run_experiment(const ExperimentConfig& config,
                    const std::function<void(const HamResult&)>& sink, int start_index = 0);

struct VariantStats {
  std::string variant;
  int num_hamiltonians = 0;
  double mean_f_inf = 0.0, std_f_inf = 0.0;
  double mean_gamma = 0.0, std_gamma = 0.0;
  double min_gamma = 0.0, max_gamma = 0.0;
};

struct ClonerAgreement {
  std::string cloner;
  int num_points = 0;
  double r2_f_inf = 0.0;  // squared correlation, simulation fit vs. prediction
  double r2_gamma = 0.0;
};

struct AggregateStats {
  std::vector<VariantStats> variants;
  std::vector<ClonerAgreement> agreement;
  // Fraction of Hamiltonians where the BCQO no-mutation gamma is strictly
  // lower than the UQCM one; ties below 1e-6 are excluded.
  int win_n = 0;
  int win_ties = 0;
  double win_rate_pct = 0.0;
  double win_ci_pct = 0.0;     // 95% normal-approximation half width, percentage points
  bool win_one_sided = false;  // p in {0,1}: rule-of-three bound instead

  std::string to_json() const;
};

AggregateStats aggregate(const std::vector<BenchRecord>& records,
                         const std::vector<SpectralReport>& reports);

// Simulation-vs-prediction scatter (Fig-style plot data). Prediction columns
// are empty for variants without a spectral report.
std::string scatter_csv(const std::vector<BenchRecord>& records,
                        const std::vector<SpectralReport>& reports);

struct BenchPaths {
  std::string records;   // records.jsonl
  std::string spectral;  // spectral.jsonl
  std::string summary;   // summary.json
  std::string scatter;   // scatter.csv
  std::string meta;      // run.meta.json (config hash + completed count)
  static BenchPaths in_dir(const std::string& dir);
};

// File-level benchmark runner shared by the CLI and the acceptance suite:
// appends per-Hamiltonian blocks to records/spectral, keeps the meta file
// current, and finally rewrites summary.json and scatter.csv from the full
// files. With resume, continues a partial run (throws ResumeConflict on a
// config hash mismatch).
struct ResumeConflict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AggregateStats run_benchmark_files(const ExperimentConfig& config, const BenchPaths& paths,
                                   bool resume);

// Parsers for the two JSONL outputs (skipping failed/stub lines on request).
std::vector<BenchRecord> load_records(const std::string& path);
std::vector<SpectralReport> load_spectral_reports(const std::string& path);

}  // namespace qga
