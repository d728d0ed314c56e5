#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qga/benchmark.hpp"
#include "qga/jsonio.hpp"

namespace {

using namespace qga;

constexpr std::uint64_t kHamTag = 0x68616D;
constexpr std::uint64_t kInitTag = 0x696E6974;
constexpr std::uint64_t kMutTag = 0x6D7574;

// Exit codes: 0 success, 2 usage/parse, 3 degenerate fixed set,
// 4 numerical non-convergence, 5 resume conflict.
enum ExitCode { kOk = 0, kUsage = 2, kDegenerate = 3, kNoConvergence = 4, kResume = 5 };

ProblemHamiltonian make_hamiltonian(const std::string& spec, int c, std::uint64_t seed) {
  if (spec == "computational") return ProblemHamiltonian::computational(c);
  if (spec == "random") {
    RngStream rng = RngStream(seed).substream(kHamTag);
    return ProblemHamiltonian::random(c, rng);
  }
  return ProblemHamiltonian::load(spec);
}

struct RunArgs {
  int n = 4, c = 2;
  std::string cloner;
  std::string mutation = "off";
  double pm = 1.0 / 24.0;
  int generations = 10;
  std::uint64_t seed = 0;
  std::string ham = "random";
  std::string init = "haar-full";
  std::string out = "trajectory.jsonl";
  std::string save_ham;
  bool pm_given = false;
};

int cmd_run(const RunArgs& args) {
  if (args.pm_given && args.mutation == "off") {
    std::cerr << "run: --pm requires --mutation sampled or exact\n";
    return kUsage;
  }
  const Variant variant(args.cloner == "bcqo" ? Cloner::BCQO : Cloner::UQCM,
                        args.mutation == "off"       ? MutationMode::Off
                        : args.mutation == "sampled" ? MutationMode::Sampled
                                                     : MutationMode::Exact,
                        args.mutation == "off" ? 0.0 : args.pm);
  const PopulationLayout layout(args.n, args.c);
  layout.require_qga_shape();
  const ProblemHamiltonian h = make_hamiltonian(args.ham, args.c, args.seed);
  if (h.d() != layout.d) throw ConfigurationError("run: hamiltonian c does not match --c");
  if (!args.save_ham.empty()) h.save(args.save_ham);

  const InitMode mode = parse_init_mode(args.init);
  RngStream init_rng = RngStream(args.seed).substream(kInitTag);
  RngStream mut_rng = RngStream(args.seed).substream(kMutTag);
  const PopulationState rho_in = random_initial_state(layout, mode, init_rng);

  Trajectory traj = run(rho_in, h, variant, args.generations, mut_rng);
  traj.seed = args.seed;
  traj.init_mode = mode;

  std::ofstream out(args.out, std::ios::app);
  if (!out) throw std::invalid_argument("cannot open output file: " + args.out);
  out << trajectory_json_line(traj) << '\n';

  std::cout << "F_QGA(" << args.generations << ") = "
            << format_double(traj.fidelity_series.back())
            << "  best-individual energy = " << format_double(traj.energy_series.back())
            << "\nrecord appended to " << args.out << "\n";
  return kOk;
}

struct SpectralArgs {
  int n = 4;
  std::string ham;
  std::string cloner;
  int topk = 6;
  std::uint64_t seed = 0;
  std::string out = "spectral.json";
};

int cmd_spectral(const SpectralArgs& args) {
  // c is taken from the Hamiltonian itself (default 2 for generated ones).
  const ProblemHamiltonian h = make_hamiltonian(args.ham, 2, args.seed);
  const PopulationLayout layout(args.n, h.c());
  layout.require_qga_shape();
  const Variant variant(args.cloner == "bcqo" ? Cloner::BCQO : Cloner::UQCM, MutationMode::Off);
  const Channel gen = generation_channel(layout, h, variant);
  SpectralOptions options;
  options.topk = args.topk;
  const SpectralReport report = predict(gen, h, options);
  write_text_file(args.out, report.to_json_line() + "\n");

  std::cout << "eigenvalues (|lambda| descending):\n";
  for (const auto& ev : report.eigenvalues)
    std::cout << "  " << format_double(ev.real()) << (ev.imag() < 0 ? " - " : " + ")
              << format_double(std::abs(ev.imag())) << "i  |.| = "
              << format_double(std::abs(ev)) << "\n";
  std::cout << "m = " << report.multiplicity << "  F_inf = " << format_double(report.f_inf)
            << "  gamma = " << format_double(report.gamma)
            << "  residual = " << format_double(report.residual) << "\nreport written to "
            << args.out << "\n";
  if (report.degenerate()) {
    std::cerr << "warning: degenerate fixed set (m = " << report.multiplicity << ")\n";
    return kDegenerate;
  }
  return kOk;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, bool resume) {
  ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  std::filesystem::create_directories(config.output_dir);
  const BenchPaths paths = BenchPaths::in_dir(config.output_dir);
  const AggregateStats stats = run_benchmark_files(config, paths, resume);
  std::cout << stats.to_json() << "\n";
  std::cout << "records: " << paths.records << "\nspectral: " << paths.spectral
            << "\nsummary: " << paths.summary << "\nscatter: " << paths.scatter << "\n";
  return kOk;
}

int cmd_compare(const std::string& records_path, const std::string& spectral_path,
                const std::string& out_path) {
  const auto records = load_records(records_path);
  const auto reports = load_spectral_reports(spectral_path);
  const AggregateStats stats = aggregate(records, reports);
  write_text_file(out_path, scatter_csv(records, reports));
  for (const auto& a : stats.agreement)
    std::cout << a.cloner << ": R2(F_inf) = " << format_double(a.r2_f_inf)
              << "  R2(gamma) = " << format_double(a.r2_gamma) << "  (" << a.num_points
              << " hamiltonians)\n";
  std::cout << "scatter written to " << out_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density-matrix simulator and spectral analyzer for the multi-register QGA"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "simulate one trajectory");
  run_cmd->add_option("--n", run_args.n, "registers (divisible by 4)");
  run_cmd->add_option("--c", run_args.c, "qubits per register (even)")->required();
  run_cmd->add_option("--cloner", run_args.cloner)
      ->check(CLI::IsMember({"bcqo", "uqcm"}))
      ->required();
  run_cmd->add_option("--mutation", run_args.mutation)
      ->check(CLI::IsMember({"off", "sampled", "exact"}));
  auto* pm_opt = run_cmd->add_option("--pm", run_args.pm, "per-qubit mutation probability");
  run_cmd->add_option("--generations", run_args.generations)->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run_args.seed);
  run_cmd->add_option("--ham", run_args.ham, "random | computational | path to .ham");
  run_cmd->add_option("--init", run_args.init)
      ->check(CLI::IsMember({"haar-full", "haar-product"}));
  run_cmd->add_option("--out", run_args.out, "trajectory record file (JSON lines, appended)");
  run_cmd->add_option("--save-ham", run_args.save_ham, "write the Hamiltonian to a .ham file");

  SpectralArgs spectral_args;
  auto* spectral_cmd = app.add_subcommand("spectral", "channel eigenanalysis");
  spectral_cmd->add_option("--n", spectral_args.n, "registers (divisible by 4)");
  spectral_cmd->add_option("--ham", spectral_args.ham, "path to .ham | computational | random")
      ->required();
  spectral_cmd->add_option("--cloner", spectral_args.cloner)
      ->check(CLI::IsMember({"bcqo", "uqcm"}))
      ->required();
  spectral_cmd->add_option("--topk", spectral_args.topk)->check(CLI::Range(2, 64));
  spectral_cmd->add_option("--seed", spectral_args.seed, "seed when --ham random");
  spectral_cmd->add_option("--out", spectral_args.out);

  std::string bench_config, bench_out_dir;
  bool bench_resume = false;
  auto* bench_cmd = app.add_subcommand("bench", "run a full experiment from a config file");
  bench_cmd->add_option("--config", bench_config)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out-dir", bench_out_dir, "override the config's output_dir");
  bench_cmd->add_flag("--resume", bench_resume, "continue a partial run");

  std::string cmp_records, cmp_spectral, cmp_out = "scatter.csv";
  auto* cmp_cmd = app.add_subcommand("compare", "join simulation fits with predictions");
  cmp_cmd->add_option("--records", cmp_records)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--spectral", cmp_spectral)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--out", cmp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run_cmd->parsed()) {
      run_args.pm_given = pm_opt->count() > 0;
      return cmd_run(run_args);
    }
    if (spectral_cmd->parsed()) return cmd_spectral(spectral_args);
    if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_out_dir, bench_resume);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_records, cmp_spectral, cmp_out);
  } catch (const qga::ResumeConflict& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResume;
  } catch (const qga::ConvergenceFailure& e) {
    std::cerr << "error: " << e.what()
              << " (best residual " << qga::format_double(e.best_residual) << ")\n";
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
