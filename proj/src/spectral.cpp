#include "qga/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qga/jsonio.hpp"

namespace qga {

namespace {

Eigen::Map<const Eigen::MatrixXcd> as_matrix(const Eigen::VectorXcd& v, Eigen::Index d) {
  return {v.data(), d, d};
}

bool magnitude_less(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (std::abs(ma - mb) > 1e-12) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_pairs_descending(std::vector<EigenPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) {
                     return magnitude_less(b.value, a.value);
                   });
}

}  // namespace

Eigen::VectorXcd vectorize_apply(const Channel& channel, const Eigen::VectorXcd& v) {
  const Eigen::Index d = channel.layout().D;
  if (v.size() != d * d) throw std::out_of_range("vectorize_apply: vector length must be D^2");
  const Eigen::MatrixXcd out = channel.apply_matrix(as_matrix(v, d));
  return {Eigen::Map<const Eigen::VectorXcd>(out.data(), d * d)};
}

Eigen::MatrixXcd dense_superoperator(const Channel& channel, Eigen::Index cap) {
  const Eigen::Index d = channel.layout().D;
  const Eigen::Index n = d * d;
  if (n > cap)
    throw SizeError("dense_superoperator: dimension " + std::to_string(n) +
                    " exceeds the cap; use the matrix-free path");
  Eigen::MatrixXcd super(n, n);
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    basis(j) = 1.0;
    super.col(j) = vectorize_apply(channel, basis);
    basis(j) = 0.0;
  }
  return super;
}

namespace {

std::vector<EigenPair> dense_eigenpairs(const Channel& channel, int k,
                                        const SpectralOptions& options) {
  const Eigen::MatrixXcd super = dense_superoperator(channel, options.dense_cap);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(super);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("dense superoperator eigensolve failed", 1.0);
  std::vector<EigenPair> pairs(super.rows());
  for (Eigen::Index i = 0; i < super.rows(); ++i) {
    pairs[i].value = es.eigenvalues()(i);
    pairs[i].vector = es.eigenvectors().col(i).normalized();
  }
  sort_pairs_descending(pairs);
  pairs.resize(std::min<std::size_t>(pairs.size(), k));
  for (auto& p : pairs)
    p.residual = (super * p.vector - p.value * p.vector).norm();
  return pairs;
}

std::vector<EigenPair> arnoldi_eigenpairs(const Channel& channel, int k,
                                          const SpectralOptions& options) {
  const Eigen::Index n = channel.layout().D * channel.layout().D;
  const int m_start = std::min<Eigen::Index>(std::max(4 * k, options.krylov_min), n);
  const int m_max = std::min<Eigen::Index>(std::max(options.krylov_max, m_start), n);

  RngStream rng(options.start_seed);
  Eigen::VectorXcd v0(n);
  for (Eigen::Index i = 0; i < n; ++i) v0(i) = rng.complex_normal();
  v0.normalize();

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(m_max + 1);
  basis.push_back(v0);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m_max + 1, m_max);

  int built = 0;
  bool breakdown = false;
  int m_target = m_start;
  double best_worst_residual = 1.0;

  while (true) {
    for (; built < m_target && !breakdown; ++built) {
      const int j = built;
      Eigen::VectorXcd w = vectorize_apply(channel, basis[j]);
      for (int i = 0; i <= j; ++i) {
        const std::complex<double> hij = basis[i].dot(w);
        hess(i, j) = hij;
        w -= hij * basis[i];
      }
      for (int i = 0; i <= j; ++i) {  // one reorthogonalization pass
        const std::complex<double> c = basis[i].dot(w);
        hess(i, j) += c;
        w -= c * basis[i];
      }
      const double nw = w.norm();
      hess(j + 1, j) = nw;
      if (nw < 1e-12) {
        breakdown = true;  // invariant subspace reached; Ritz pairs are exact
        ++built;
        break;
      }
      basis.push_back(w / nw);
    }
    const int m = built;
    if (m < k)
      throw ConvergenceFailure("arnoldi: Krylov space collapsed below k", best_worst_residual);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hess.topLeftCorner(m, m));
    if (es.info() != Eigen::Success)
      throw ConvergenceFailure("arnoldi: Hessenberg eigensolve failed", best_worst_residual);

    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return magnitude_less(es.eigenvalues()(b), es.eigenvalues()(a));
    });

    const double hlast = breakdown ? 0.0 : std::abs(hess(m, m - 1));
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
      worst = std::max(worst, hlast * std::abs(es.eigenvectors()(m - 1, order[i])));
    best_worst_residual = std::min(best_worst_residual, worst);

    if (worst <= options.tol || breakdown || m >= m_max) {
      if (worst > options.tol && !breakdown)
        throw ConvergenceFailure(
            "arnoldi: residual " + format_double(worst) + " above tolerance " +
                format_double(options.tol) + " at Krylov dimension " + std::to_string(m),
            worst);
      std::vector<EigenPair> pairs(k);
      for (int i = 0; i < k; ++i) {
        const auto& y = es.eigenvectors().col(order[i]);
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
        for (int j = 0; j < m; ++j) w += y(j) * basis[j];
        w.normalize();
        pairs[i] = {es.eigenvalues()(order[i]), std::move(w),
                    hlast * std::abs(es.eigenvectors()(m - 1, order[i]))};
      }
      return pairs;
    }
    m_target = std::min(m_max, m_target + options.krylov_step);
  }
}

}  // namespace

std::vector<EigenPair> top_eigenpairs(const Channel& channel, int k,
                                      const SpectralOptions& options) {
  return top_eigenpairs(channel, k, EigMethod::Auto, options);
}

std::vector<EigenPair> top_eigenpairs(const Channel& channel, int k, EigMethod method,
                                      const SpectralOptions& options) {
  if (k < 2) throw ContractViolation("top_eigenpairs: k must be >= 2");
  const Eigen::Index n = channel.layout().D * channel.layout().D;
  if (k > n) throw ContractViolation("top_eigenpairs: k exceeds the superoperator dimension");
  if (method == EigMethod::Auto) method = n <= options.dense_cap ? EigMethod::Dense : EigMethod::Arnoldi;
  return method == EigMethod::Dense ? dense_eigenpairs(channel, k, options)
                                    : arnoldi_eigenpairs(channel, k, options);
}

double trace_norm_hermitian(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

FixedPointResult fixed_point(const Channel& channel, const SpectralOptions& options) {
  const Eigen::Index d = channel.layout().D;
  auto pairs = top_eigenpairs(channel, std::max(2, options.topk), options);

  FixedPointResult result;
  for (const auto& p : pairs) result.eigenvalues.push_back(p.value);
  for (const auto& p : pairs)
    if (std::abs(p.value) >= 1.0 - 1e-8) ++result.multiplicity;

  Eigen::MatrixXcd lam;
  if (result.multiplicity <= 1) {
    Eigen::MatrixXcd w = as_matrix(pairs[0].vector, d);
    const std::complex<double> tr = w.trace();
    if (std::abs(tr) < 1e-8)
      throw ConvergenceFailure("fixed_point: traceless dominant eigenvector", std::abs(tr));
    w /= tr;
    lam = 0.5 * (w + w.adjoint());
  } else {
    // Degenerate fixed set: project a canonical state (the maximally mixed
    // one) onto it by iterating the channel.
    lam = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
    for (int it = 0; it < 400; ++it) lam = channel.apply_matrix(lam);
    lam = 0.5 * (lam + lam.adjoint());
    lam /= lam.trace().real();
  }

  // Polish: each extra application contracts the residual by the subradius.
  double residual = trace_norm_hermitian(channel.apply_matrix(lam) - lam);
  for (int round = 0; round < 12 && residual > 1e-9; ++round) {
    for (int it = 0; it < 4; ++it) lam = channel.apply_matrix(lam);
    lam = 0.5 * (lam + lam.adjoint());
    lam /= lam.trace().real();
    const double next = trace_norm_hermitian(channel.apply_matrix(lam) - lam);
    if (next >= residual) break;
    residual = next;
  }
  result.state = std::move(lam);
  result.residual = residual;
  return result;
}

SpectralReport predict(const Channel& channel, const ProblemHamiltonian& h,
                       const SpectralOptions& options) {
  if (channel.stochastic())
    throw ConfigurationError("predict: sampled-mutation channels are not fixed linear maps");

  SpectralReport report;
  report.ham_hash = h.content_hash();
  report.variant = channel.variant() ? channel.variant()->name() : "custom";
  report.nonstandard_mutation =
      channel.variant() && channel.variant()->mutation == MutationMode::Exact;

  FixedPointResult fp = fixed_point(channel, options);
  report.eigenvalues = std::move(fp.eigenvalues);
  report.multiplicity = fp.multiplicity;
  report.residual = fp.residual;
  for (int i = 0; i < fp.multiplicity && i < static_cast<int>(report.eigenvalues.size()); ++i)
    if (std::abs(std::arg(report.eigenvalues[i])) > 1e-8) report.oscillatory = true;

  report.f_inf = qga_fidelity(PopulationState(channel.layout(), fp.state), h);
  // Spectral subradius: first eigenvalue below the unit cluster.
  const auto idx = static_cast<std::size_t>(std::max(1, report.multiplicity));
  report.gamma = idx < report.eigenvalues.size() ? std::abs(report.eigenvalues[idx]) : 1.0;
  report.fixed_point = std::move(fp.state);
  return report;
}

std::string SpectralReport::to_json_line() const {
  std::string out = "{\"ham_hash\":\"" + ham_hash + "\",\"variant\":\"" + variant +
                    "\",\"eigenvalues\":[";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (i) out += ",";
    out += "{\"re\":" + format_double(eigenvalues[i].real()) +
           ",\"im\":" + format_double(eigenvalues[i].imag()) + "}";
  }
  out += "],\"m\":" + std::to_string(multiplicity) +
         ",\"F_inf\":" + format_double(f_inf) + ",\"gamma\":" + format_double(gamma) +
         ",\"residual\":" + format_double(residual) +
         ",\"oscillatory\":" + (oscillatory ? "true" : "false") +
         ",\"nonstandard_mutation\":" + (nonstandard_mutation ? "true" : "false") + "}";
  return out;
}

}  // namespace qga
