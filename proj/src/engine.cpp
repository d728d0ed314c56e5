#include "qga/engine.hpp"

#include "qga/jsonio.hpp"

namespace qga {

std::string init_mode_name(InitMode m) {
  return m == InitMode::HaarFull ? "haar-full" : "haar-product";
}

InitMode parse_init_mode(const std::string& s) {
  if (s == "haar-full") return InitMode::HaarFull;
  if (s == "haar-product") return InitMode::HaarProduct;
  throw ConfigurationError("unknown init mode: " + s);
}

double qga_fidelity(const PopulationState& state, const ProblemHamiltonian& h) {
  static constexpr int kFirst[] = {1};
  return fidelity_pure(partial_trace(state, kFirst), h.ground_state());
}

double best_individual_energy(const PopulationState& state, const ProblemHamiltonian& h) {
  static constexpr int kFirst[] = {1};
  const Eigen::MatrixXcd rho1 = partial_trace(state, kFirst);
  return (h.matrix() * rho1).trace().real();
}

PopulationState random_initial_state(const PopulationLayout& layout, InitMode mode,
                                     RngStream& rng) {
  if (mode == InitMode::HaarFull)
    return PopulationState::from_pure(layout, haar_pure_state(layout.D, rng));
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (int r = 0; r < layout.n; ++r)
    v = tensor(v, haar_pure_state(layout.d, rng).vector());
  return PopulationState::from_pure(layout, PureState(std::move(v)));
}

Trajectory run(const PopulationState& rho_in, const ProblemHamiltonian& h,
               const Variant& variant, int generations, RngStream& rng,
               const RunOptions& options) {
  if (generations < 1) throw ContractViolation("run: generations must be >= 1");
  const PopulationLayout& layout = rho_in.layout();
  const Channel sort = sorting_channel(layout, h);
  const Channel gen = generation_channel(layout, h, variant);

  Trajectory traj;
  traj.ham_hash = h.content_hash();
  traj.variant = variant;
  traj.seed = rng.seed();
  traj.fidelity_series.reserve(generations + 1);
  traj.energy_series.reserve(generations + 1);

  // Generation 0 is measured after the initial sort; every later generation
  // ends in the sorting subroutine, so all samples are post-sort.
  PopulationState state = sort.apply(rho_in);
  auto record = [&](const PopulationState& s) {
    traj.fidelity_series.push_back(qga_fidelity(s, h));
    traj.energy_series.push_back(best_individual_energy(s, h));
    if (options.retain_states) traj.states.push_back(s);
  };
  record(state);
  for (int g = 0; g < generations; ++g) {
    state = gen.stochastic() ? gen.apply(state, rng) : gen.apply(state);
    record(state);
  }
  return traj;
}

std::string trajectory_json_line(const Trajectory& t) {
  auto series = [](const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += format_double(v[i]);
    }
    return out + "]";
  };
  return "{\"ham_hash\":\"" + t.ham_hash + "\",\"variant\":\"" + t.variant.name() +
         "\",\"seed\":" + std::to_string(t.seed) + ",\"init_mode\":\"" +
         init_mode_name(t.init_mode) + "\",\"fidelity_series\":" + series(t.fidelity_series) +
         ",\"energy_series\":" + series(t.energy_series) + "}";
}

}  // namespace qga
