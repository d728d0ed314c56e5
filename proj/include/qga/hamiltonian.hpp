#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "qga/state.hpp"

namespace qga {

// A problem Hamiltonian H_P = U diag(eps) U^dag, represented by its sorted
// eigenbasis (columns of U, ascending energy) and the eigenvalue sequence.
// Only the ordinal position of the eigenvalues influences the algorithm, so
// generated Hamiltonians fix eps_k = k exactly.
class ProblemHamiltonian {
 public:
  ProblemHamiltonian(int c, Eigen::MatrixXcd basis_unitary, Eigen::VectorXd eigenvalues,
                     std::uint64_t seed = 0);

  // Diagonal Hamiltonian in the computational basis, eps_k = k.
  static ProblemHamiltonian computational(int c);

  // U H_C U^dag with U Haar-distributed.
  static ProblemHamiltonian random(int c, RngStream& rng);

  int c() const { return c_; }
  int d() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& basis_unitary() const { return u_; }
  const Eigen::VectorXd& eigenvalues() const { return eps_; }
  std::uint64_t seed() const { return seed_; }

  Eigen::MatrixXcd matrix() const;  // H_P as a dense d x d matrix
  PureState ground_state() const;   // |u_1>, the first basis column

  // True when U is exactly the identity; lets the sorting channel skip its
  // basis rotations.
  bool basis_is_computational() const { return identity_basis_; }

  // FNV-1a over (c, U payload bytes); stable key for experiment records.
  const std::string& content_hash() const { return hash_; }

  // *.ham file: JSON {c, seed, hash, u} with U as base64 of row-major
  // little-endian doubles, interleaved re/im.
  void save(const std::string& path) const;
  static ProblemHamiltonian load(const std::string& path);

 private:
  int c_;
  Eigen::MatrixXcd u_;
  Eigen::VectorXd eps_;
  std::uint64_t seed_;
  bool identity_basis_;
  std::string hash_;
};

enum class Ordering { Less, Equal, Greater };

// Ordinal comparison of eigenvalues eps_k vs eps_k' (1-based indices). With
// generated spectra eps_k = k this is plain integer comparison.
Ordering index_energy_order(const ProblemHamiltonian& h, int k, int kprime);

}  // namespace qga
