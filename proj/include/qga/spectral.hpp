#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qga/channels.hpp"
#include "qga/engine.hpp"

namespace qga {

struct SpectralOptions {
  int topk = 6;
  double tol = 1e-8;            // eigenpair residual target, ||T(W) - lam W|| <= tol
  int krylov_min = 40;          // starting Krylov dimension is max(4k, krylov_min)
  int krylov_step = 24;
  int krylov_max = 160;
  std::uint64_t start_seed = 0x51B7ULL;  // Arnoldi start vector (fixed for determinism)
  Eigen::Index dense_cap = 4096;         // superoperator dimension cap for dense paths
};

enum class EigMethod { Auto, Arnoldi, Dense };

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;  // unit norm, length D^2 (column-stacked)
  double residual;
};

// Column-stacked action of the channel on a length-D^2 vector.
Eigen::VectorXcd vectorize_apply(const Channel& channel, const Eigen::VectorXcd& v);

// Explicit superoperator matrix (sum_k E_k* (x) E_k under column stacking),
// assembled column by column. Throws SizeError above the cap.
Eigen::MatrixXcd dense_superoperator(const Channel& channel, Eigen::Index cap = 4096);

// k largest-magnitude eigenpairs of the superoperator: matrix-free Arnoldi
// with modified Gram-Schmidt (one reorthogonalization pass), growing the
// Krylov space until every requested residual meets tol; dense solve below
// the size cap when method is Auto.
std::vector<EigenPair> top_eigenpairs(const Channel& channel, int k,
                                      const SpectralOptions& options = {});
std::vector<EigenPair> top_eigenpairs(const Channel& channel, int k, EigMethod method,
                                      const SpectralOptions& options = {});

struct FixedPointResult {
  Eigen::MatrixXcd state;  // Hermitized, unit trace
  int multiplicity = 0;    // eigenvalues with |lambda| >= 1 - 1e-8
  double residual = 0.0;   // ||T(state) - state||_1
  std::vector<std::complex<double>> eigenvalues;
};

FixedPointResult fixed_point(const Channel& channel, const SpectralOptions& options = {});

struct SpectralReport {
  std::string ham_hash;
  std::string variant;
  std::vector<std::complex<double>> eigenvalues;
  Eigen::MatrixXcd fixed_point;
  double f_inf = 0.0;
  double gamma = 0.0;      // magnitude of the first eigenvalue below the unit cluster
  int multiplicity = 0;
  double residual = 0.0;
  bool oscillatory = false;           // unit-magnitude eigenvalue away from 1
  bool nonstandard_mutation = false;  // exact-mutation channel (not used for the benchmarks)

  bool degenerate() const { return multiplicity != 1; }
  std::string to_json_line() const;
};

// Fixed point and spectral subradius of a deterministic generation channel;
// predicts the asymptotic fidelity F_inf and convergence rate gamma.
SpectralReport predict(const Channel& channel, const ProblemHamiltonian& h,
                       const SpectralOptions& options = {});

// Trace norm of a (numerically) Hermitian matrix.
double trace_norm_hermitian(const Eigen::MatrixXcd& m);

}  // namespace qga
