#pragma once

#include <string>
#include <vector>

#include "qga/channels.hpp"

namespace qga {

enum class InitMode { HaarFull, HaarProduct };

std::string init_mode_name(InitMode m);
InitMode parse_init_mode(const std::string& s);

// One simulated evolution. fidelity_series[g] is the overlap of the first
// (best, post-sort) register with the target ground state after g
// generations; entry 0 is measured after the initial sort.
struct Trajectory {
  std::string ham_hash;
  Variant variant;
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::HaarFull;
  std::vector<double> fidelity_series;  // length G+1
  std::vector<double> energy_series;    // length G+1
  std::vector<PopulationState> states;  // retained only on request
};

// <u_1| tr_{1 perp}(rho) |u_1>: ground-state probability of the first register.
double qga_fidelity(const PopulationState& state, const ProblemHamiltonian& h);

// tr[H_P tr_{1 perp}(rho)]: expected energy of the first register.
double best_individual_energy(const PopulationState& state, const ProblemHamiltonian& h);

// Haar-random initial population: either one pure state on all n*c qubits or
// an independent Haar state per register.
PopulationState random_initial_state(const PopulationLayout& layout, InitMode mode,
                                     RngStream& rng);

struct RunOptions {
  bool retain_states = false;
};

// Sort once, then apply the generation channel G times, recording fidelity
// and energy after each application. rng feeds sampled mutation only.
Trajectory run(const PopulationState& rho_in, const ProblemHamiltonian& h,
               const Variant& variant, int generations, RngStream& rng,
               const RunOptions& options = {});

// JSON-lines form: {ham_hash, variant, seed, init_mode, fidelity_series,
// energy_series}.
std::string trajectory_json_line(const Trajectory& t);

}  // namespace qga
