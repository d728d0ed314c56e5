#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qga/hamiltonian.hpp"
#include "qga/state.hpp"

namespace qga {

enum class Cloner { BCQO, UQCM };
enum class MutationMode { Off, Sampled, Exact };

// One of the four benchmarked algorithm variants (cloner x mutation), plus
// the exact-mutation mode used for channel-level study.
struct Variant {
  Cloner cloner = Cloner::BCQO;
  MutationMode mutation = MutationMode::Off;
  double pm = 0.0;  // per-qubit mutation probability

  Variant() = default;
  Variant(Cloner cl, MutationMode mu, double p = 0.0);

  std::string name() const;                     // e.g. "bcqo:off", "uqcm:sampled"
  static Variant parse(const std::string& s);   // inverse of name(); pm defaults to 1/24
};

std::string cloner_name(Cloner c);

enum class ChannelKind { Sort, Reset, Clone, Swap, Mutate, Composite };

// A CPTP map on population density matrices. The raw action is linear on
// arbitrary D x D matrices (no normalization, no Hermitization), which is
// what the spectral analysis vectorizes. Channels with a sampled-mutation
// stage draw from a caller-owned stream at application time and cannot be
// used as fixed linear maps.
class Channel {
 public:
  using Fn = std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&, RngStream*)>;

  Channel(PopulationLayout layout, ChannelKind kind, bool stochastic, Fn fn)
      : layout_(layout), kind_(kind), stochastic_(stochastic), fn_(std::move(fn)) {}

  const PopulationLayout& layout() const { return layout_; }
  ChannelKind kind() const { return kind_; }
  bool stochastic() const { return stochastic_; }

  const std::optional<Variant>& variant() const { return variant_; }
  void set_variant(const Variant& v) { variant_ = v; }

  Eigen::MatrixXcd apply_matrix(const Eigen::MatrixXcd& m) const;
  Eigen::MatrixXcd apply_matrix(const Eigen::MatrixXcd& m, RngStream& rng) const;
  PopulationState apply(const PopulationState& s) const;
  PopulationState apply(const PopulationState& s, RngStream& rng) const;

 private:
  PopulationLayout layout_;
  ChannelKind kind_;
  bool stochastic_;
  Fn fn_;
  std::optional<Variant> variant_;
};

// Channels applied left to right: compose({a, b}) maps rho -> b(a(rho)).
Channel compose(PopulationLayout layout, std::vector<Channel> stages);

// Classical bubble-sort trace for every population index sequence. Layer
// parity alternates odd pairs (1,2),(3,4),... and even pairs (2,3),(4,5),...
// over n layers, n(n-1)/2 comparisons total; a comparison emits instruction
// bit 1 and swaps iff the left eigenvalue is strictly greater, so equal
// elements never swap and a sorted input yields the all-zero bitstring.
struct SortTable {
  PopulationLayout layout;
  int num_comparisons;                      // n(n-1)/2
  std::vector<std::uint32_t> sigma;         // instruction bits per index sequence
                                            // (comparison t -> bit t, LSB first)
  std::vector<std::int64_t> sorted_index;   // s(k) as a population basis index
  // Index sequences grouped by instruction bitstring; coherence survives only
  // inside a group. Ordered by sigma for determinism.
  std::vector<std::pair<std::uint32_t, std::vector<std::int64_t>>> groups;
};

SortTable build_sort_table(const PopulationLayout& layout, const ProblemHamiltonian& h);

// Sorting channel: rotate to the problem product basis, merge matrix entries
// whose index sequences share the same instruction bitstring onto their
// sorted positions, rotate back.
Channel sorting_channel(const PopulationLayout& layout, const ProblemHamiltonian& h);

// Explicit Kraus operators A_kappa of the sorting channel (one per distinct
// instruction bitstring). Dense D x D each; intended for small layouts.
std::vector<Eigen::MatrixXcd> sorting_kraus(const PopulationLayout& layout,
                                            const ProblemHamiltonian& h);

// Reset of the lower registers (n/2+1..n): rho -> tr_low(rho) (x) rho0^(n/2).
Channel reset_channel(const PopulationLayout& layout, const Eigen::MatrixXcd& rho0);
std::vector<Eigen::MatrixXcd> reset_kraus(const PopulationLayout& layout,
                                          const Eigen::MatrixXcd& rho0);

// Reference states matching the two cloning machines.
Eigen::MatrixXcd bcqo_reference_state(int c);  // |0...0><0...0|
Eigen::MatrixXcd uqcm_reference_state(int c);  // I / 2^c

// Cloning of the computational-basis observable: on each register pair
// (i, i+n/2) the unitary |j>|k> -> |j>|k XOR j> (a transversal CNOT ladder).
Channel bcqo_clone_channel(const PopulationLayout& layout);

// Buzek-Hillery universal cloner on each pair (i, i+n/2):
//   rho -> (2d/(d+1)) S+ (tr_B(rho) (x) I/d) S+,  S+ = (I + SWAP_AB)/2.
Channel uqcm_clone_channel(const PopulationLayout& layout);

// The d^2 Kraus operators c_{r,k} of one UQCM pair, on the d^2-dim pair space
// (source register first).
std::vector<Eigen::MatrixXcd> uqcm_pair_kraus(int c);

// Crossover combination: swap the last c/2 qubits of registers n/2+2i+1 and
// n/2+2i+2 for i = 0..n/4-1.
Channel crossover_swap(const PopulationLayout& layout);

// Per-qubit Pauli mutation applied to all n*c qubits:
//   rho -> (1-pm) rho + pm/3 (X rho X + Y rho Y + Z rho Z).
Channel mutation_channel_exact(const PopulationLayout& layout, double pm);

// All 4^(n*c) weighted Pauli-string Kraus operators; small layouts only.
std::vector<Eigen::MatrixXcd> mutation_kraus(const PopulationLayout& layout, double pm);

// One stochastic mutation pattern: per qubit I with 1-pm, else X/Y/Z equally.
Eigen::MatrixXcd sample_mutation_unitary(const PopulationLayout& layout, double pm,
                                         RngStream& rng);

// One generation: reset, clone, crossover swap, mutation (per variant mode),
// sorting. `reset_state`, when given, must match the cloner's reference.
Channel generation_channel(const PopulationLayout& layout, const ProblemHamiltonian& h,
                           const Variant& variant,
                           const std::optional<Eigen::MatrixXcd>& reset_state = std::nullopt);

}  // namespace qga
