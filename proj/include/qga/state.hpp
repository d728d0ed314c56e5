#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "qga/layout.hpp"
#include "qga/rng.hpp"

namespace qga {

// Normalized pure state.
class PureState {
 public:
  explicit PureState(Eigen::VectorXcd amplitudes);
  static PureState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return v_.size(); }
  const Eigen::VectorXcd& vector() const { return v_; }

 private:
  Eigen::VectorXcd v_;
};

// Density matrix of the full population. Construction checks unit trace and
// Hermiticity (1e-10); positivity is exposed as min_eigenvalue() for the
// property suites rather than being recomputed on every construction.
class PopulationState {
 public:
  PopulationState(PopulationLayout layout, Eigen::MatrixXcd rho);
  static PopulationState from_pure(const PopulationLayout& layout, const PureState& psi);
  static PopulationState basis(const PopulationLayout& layout, std::int64_t index);
  static PopulationState maximally_mixed(const PopulationLayout& layout);

  const PopulationLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

  // Smallest eigenvalue of the Hermitian part of rho.
  double min_eigenvalue() const;

 private:
  PopulationLayout layout_;
  Eigen::MatrixXcd rho_;
};

// Kronecker product with index(k1, k2) = k1*dim(b) + k2: the left factor is
// the most significant block, matching the register convention above.
Eigen::MatrixXcd tensor(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
Eigen::VectorXcd tensor(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Reduced density matrix over the kept registers (1-based, any order given;
// the result is ordered by ascending register index).
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const PopulationLayout& layout,
                               std::span<const int> keep);
Eigen::MatrixXcd partial_trace(const PopulationState& state, std::span<const int> keep);

// rho -> u rho u^dag. Checks unitarity of u to 1e-10.
PopulationState apply_unitary(const PopulationState& state, const Eigen::MatrixXcd& u);

// rho -> sum_k E_k rho E_k^dag. Checks completeness sum E^dag E = I to 1e-9.
PopulationState apply_kraus(const PopulationState& state, std::span<const Eigen::MatrixXcd> kraus);

// <psi| rho |psi>, real.
double fidelity_pure(const Eigen::MatrixXcd& rho, const PureState& psi);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// R-diagonal phase correction.
Eigen::MatrixXcd haar_unitary(Eigen::Index dim, RngStream& rng);

// Haar-distributed pure state (normalized complex Gaussian vector).
PureState haar_pure_state(Eigen::Index dim, RngStream& rng);

// ---- register-level kernels -------------------------------------------------
// These apply a d x d matrix to one register of a D x D population matrix in
// O(d * D^2) instead of going through a D x D product. They are the hot path
// of the sorting channel's basis rotations.

// m <- (I ⊗ ... ⊗ u ⊗ ... ⊗ I) m, with u acting on register reg (1-based).
void apply_register_left(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& u,
                         const PopulationLayout& layout, int reg);

// m <- m (I ⊗ ... ⊗ u ⊗ ... ⊗ I).
void apply_register_right(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& u,
                          const PopulationLayout& layout, int reg);

// out(perm[i], perm[j]) = m(i, j) for a basis permutation.
Eigen::MatrixXcd conjugate_by_permutation(const Eigen::MatrixXcd& m,
                                          std::span<const std::int64_t> perm);

// Frobenius-style max-abs deviation helpers used by the contract checks.
double max_abs_deviation_from_identity(const Eigen::MatrixXcd& m);
double max_abs(const Eigen::MatrixXcd& m);

}  // namespace qga
