#include "qga/state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace qga {

namespace {
constexpr double kTraceTol = 1e-10;
constexpr double kHermTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kKrausTol = 1e-9;
constexpr double kNormTol = 1e-12;
}  // namespace

PureState::PureState(Eigen::VectorXcd amplitudes) : v_(std::move(amplitudes)) {
  if (v_.size() < 1) throw ContractViolation("pure state: empty amplitude vector");
  if (std::abs(v_.norm() - 1.0) > kNormTol)
    throw ContractViolation("pure state: amplitudes are not unit norm");
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw std::out_of_range("pure state: basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

PopulationState::PopulationState(PopulationLayout layout, Eigen::MatrixXcd rho)
    : layout_(layout), rho_(std::move(rho)) {
  if (rho_.rows() != layout_.D || rho_.cols() != layout_.D)
    throw ContractViolation("population state: matrix dimension does not match layout");
  if (std::abs(rho_.trace().real() - 1.0) > kTraceTol || std::abs(rho_.trace().imag()) > kTraceTol)
    throw ContractViolation("population state: trace is not 1");
  if (max_abs(rho_ - rho_.adjoint()) > kHermTol)
    throw ContractViolation("population state: matrix is not Hermitian");
}

PopulationState PopulationState::from_pure(const PopulationLayout& layout, const PureState& psi) {
  if (psi.dim() != layout.D)
    throw ContractViolation("population state: pure state dimension does not match layout");
  return PopulationState(layout, psi.vector() * psi.vector().adjoint());
}

PopulationState PopulationState::basis(const PopulationLayout& layout, std::int64_t index) {
  return from_pure(layout, PureState::basis(layout.D, index));
}

PopulationState PopulationState::maximally_mixed(const PopulationLayout& layout) {
  return PopulationState(
      layout, Eigen::MatrixXcd::Identity(layout.D, layout.D) / static_cast<double>(layout.D));
}

double PopulationState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho_ + rho_.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXcd tensor(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXcd tensor(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const PopulationLayout& layout,
                               std::span<const int> keep) {
  if (keep.empty()) throw std::out_of_range("partial trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (int r : kept)
    if (r < 1 || r > layout.n) throw std::out_of_range("partial trace: register index out of range");

  const std::int64_t D = layout.D;
  const auto nk = static_cast<int>(kept.size());
  const std::int64_t Dk = std::int64_t{1} << (layout.c * nk);

  // For every full basis index, its projection onto the kept registers and
  // onto the traced registers; entries contribute when the traced parts match.
  std::vector<std::int64_t> kidx(D), tidx(D);
  for (std::int64_t b = 0; b < D; ++b) {
    std::int64_t k = 0, t = 0;
    int ki = 0;
    for (int r = 1; r <= layout.n; ++r) {
      const std::int64_t digit = layout.register_digit(b, r);
      if (ki < nk && kept[ki] == r) {
        k = (k << layout.c) | digit;
        ++ki;
      } else {
        t = (t << layout.c) | digit;
      }
    }
    kidx[b] = k;
    tidx[b] = t;
  }

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(Dk, Dk);
  for (std::int64_t j = 0; j < D; ++j)
    for (std::int64_t i = 0; i < D; ++i)
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += rho(i, j);
  return out;
}

Eigen::MatrixXcd partial_trace(const PopulationState& state, std::span<const int> keep) {
  return partial_trace(state.matrix(), state.layout(), keep);
}

PopulationState apply_unitary(const PopulationState& state, const Eigen::MatrixXcd& u) {
  if (u.rows() != state.layout().D || u.cols() != state.layout().D)
    throw ContractViolation("apply_unitary: operator dimension does not match state");
  if (max_abs_deviation_from_identity(u * u.adjoint()) > kUnitaryTol)
    throw ContractViolation("apply_unitary: operator is not unitary");
  return PopulationState(state.layout(), u * state.matrix() * u.adjoint());
}

PopulationState apply_kraus(const PopulationState& state, std::span<const Eigen::MatrixXcd> kraus) {
  const std::int64_t D = state.layout().D;
  if (kraus.empty()) throw ContractViolation("apply_kraus: empty Kraus set");
  Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(D, D);
  for (const auto& e : kraus) {
    if (e.rows() != D || e.cols() != D)
      throw ContractViolation("apply_kraus: Kraus operator dimension mismatch");
    completeness += e.adjoint() * e;
  }
  if (max_abs_deviation_from_identity(completeness) > kKrausTol)
    throw ContractViolation("apply_kraus: Kraus set is not complete");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
  for (const auto& e : kraus) out += e * state.matrix() * e.adjoint();
  return PopulationState(state.layout(), std::move(out));
}

double fidelity_pure(const Eigen::MatrixXcd& rho, const PureState& psi) {
  if (rho.rows() != psi.dim() || rho.cols() != psi.dim())
    throw std::out_of_range("fidelity_pure: dimension mismatch");
  const std::complex<double> f = psi.vector().adjoint() * rho * psi.vector();
  return f.real();
}

Eigen::MatrixXcd haar_unitary(Eigen::Index dim, RngStream& rng) {
  if (dim < 1) throw ContractViolation("haar_unitary: dim must be >= 1");
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? rjj / a : 1.0;
  }
  return q;
}

PureState haar_pure_state(Eigen::Index dim, RngStream& rng) {
  if (dim < 1) throw ContractViolation("haar_pure_state: dim must be >= 1");
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  v.normalize();
  return PureState(std::move(v));
}

void apply_register_left(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& u,
                         const PopulationLayout& layout, int reg) {
  const int d = layout.d;
  const std::int64_t D = layout.D;
  const std::int64_t stride = std::int64_t{1} << (layout.c * (layout.n - reg));
  const std::int64_t block = stride * d;
  std::vector<std::complex<double>> tmp(d);
  for (Eigen::Index col = 0; col < D; ++col) {
    auto* colptr = m.col(col).data();
    for (std::int64_t base = 0; base < D; base += block) {
      for (std::int64_t off = 0; off < stride; ++off) {
        auto* p = colptr + base + off;
        for (int a = 0; a < d; ++a) {
          std::complex<double> acc = 0.0;
          for (int b = 0; b < d; ++b) acc += u(a, b) * p[b * stride];
          tmp[a] = acc;
        }
        for (int a = 0; a < d; ++a) p[a * stride] = tmp[a];
      }
    }
  }
}

void apply_register_right(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& u,
                          const PopulationLayout& layout, int reg) {
  const int d = layout.d;
  const std::int64_t D = layout.D;
  const std::int64_t stride = std::int64_t{1} << (layout.c * (layout.n - reg));
  const std::int64_t block = stride * d;
  // (m u)(i, j) = sum_b m(i, j|reg=b) u(b, digit(j)); work column-group-wise
  // so each output column is an accumulation of d input columns.
  Eigen::MatrixXcd cols(D, d);
  for (std::int64_t base = 0; base < D; base += block) {
    for (std::int64_t off = 0; off < stride; ++off) {
      for (int b = 0; b < d; ++b) cols.col(b) = m.col(base + off + b * stride);
      for (int a = 0; a < d; ++a) {
        auto out = m.col(base + off + a * stride);
        out.setZero();
        for (int b = 0; b < d; ++b) out += cols.col(b) * u(b, a);
      }
    }
  }
}

Eigen::MatrixXcd conjugate_by_permutation(const Eigen::MatrixXcd& m,
                                          std::span<const std::int64_t> perm) {
  const Eigen::Index D = m.rows();
  Eigen::MatrixXcd out(D, D);
  for (Eigen::Index j = 0; j < D; ++j) {
    const Eigen::Index pj = perm[j];
    for (Eigen::Index i = 0; i < D; ++i) out(perm[i], pj) = m(i, j);
  }
  return out;
}

double max_abs_deviation_from_identity(const Eigen::MatrixXcd& m) {
  return max_abs(m - Eigen::MatrixXcd::Identity(m.rows(), m.cols()));
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qga
