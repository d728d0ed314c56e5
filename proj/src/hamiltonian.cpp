#include "qga/hamiltonian.hpp"

#include <cstring>
#include <nlohmann/json.hpp>

#include "qga/jsonio.hpp"

namespace qga {

namespace {

// Row-major interleaved re/im doubles; the byte layout behind both the file
// payload and the content hash.
std::vector<std::uint8_t> unitary_payload(const Eigen::MatrixXcd& u) {
  const auto dim = u.rows();
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(dim) * dim * 16);
  std::size_t off = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = u(i, j).real();
      const double im = u(i, j).imag();
      std::memcpy(bytes.data() + off, &re, 8);
      std::memcpy(bytes.data() + off + 8, &im, 8);
      off += 16;
    }
  return bytes;
}

std::string payload_hash(int c, const std::vector<std::uint8_t>& payload) {
  std::string keyed = "c=" + std::to_string(c) + ";";
  keyed.append(reinterpret_cast<const char*>(payload.data()), payload.size());
  return fnv1a_hex(keyed);
}

}  // namespace

ProblemHamiltonian::ProblemHamiltonian(int c, Eigen::MatrixXcd basis_unitary,
                                       Eigen::VectorXd eigenvalues, std::uint64_t seed)
    : c_(c), u_(std::move(basis_unitary)), eps_(std::move(eigenvalues)), seed_(seed) {
  if (c_ < 1) throw ContractViolation("hamiltonian: c must be >= 1");
  const int dim = 1 << c_;
  if (u_.rows() != dim || u_.cols() != dim)
    throw ContractViolation("hamiltonian: basis unitary must be 2^c x 2^c");
  if (eps_.size() != dim) throw ContractViolation("hamiltonian: need 2^c eigenvalues");
  for (int k = 1; k < dim; ++k)
    if (eps_(k) < eps_(k - 1))
      throw ContractViolation("hamiltonian: eigenvalues must be ascending");
  if (max_abs_deviation_from_identity(u_ * u_.adjoint()) > 1e-10)
    throw ContractViolation("hamiltonian: basis matrix is not unitary");
  identity_basis_ = u_.isIdentity(0.0);
  hash_ = payload_hash(c_, unitary_payload(u_));
}

ProblemHamiltonian ProblemHamiltonian::computational(int c) {
  if (c < 1) throw ContractViolation("hamiltonian: c must be >= 1");
  const int dim = 1 << c;
  Eigen::VectorXd eps(dim);
  for (int k = 0; k < dim; ++k) eps(k) = k + 1;
  return ProblemHamiltonian(c, Eigen::MatrixXcd::Identity(dim, dim), eps);
}

ProblemHamiltonian ProblemHamiltonian::random(int c, RngStream& rng) {
  if (c < 1) throw ContractViolation("hamiltonian: c must be >= 1");
  const int dim = 1 << c;
  Eigen::VectorXd eps(dim);
  for (int k = 0; k < dim; ++k) eps(k) = k + 1;
  return ProblemHamiltonian(c, haar_unitary(dim, rng), eps, rng.seed());
}

Eigen::MatrixXcd ProblemHamiltonian::matrix() const {
  return u_ * eps_.asDiagonal() * u_.adjoint();
}

PureState ProblemHamiltonian::ground_state() const { return PureState(u_.col(0)); }

void ProblemHamiltonian::save(const std::string& path) const {
  const auto payload = unitary_payload(u_);
  std::string out = "{\"c\":" + std::to_string(c_) + ",\"seed\":" + std::to_string(seed_) +
                    ",\"hash\":\"" + hash_ + "\",\"u\":\"" +
                    base64_encode(payload.data(), payload.size()) + "\"}\n";
  write_text_file(path, out);
}

ProblemHamiltonian ProblemHamiltonian::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed .ham file " + path + ": " + e.what());
  }
  if (!j.contains("c") || !j.contains("u") || !j.contains("hash"))
    throw std::invalid_argument("malformed .ham file " + path + ": missing fields");
  const int c = j.at("c").get<int>();
  if (c < 1 || c > 12) throw std::invalid_argument("malformed .ham file: bad c");
  const int dim = 1 << c;
  const auto bytes = base64_decode(j.at("u").get<std::string>());
  if (bytes.size() != static_cast<std::size_t>(dim) * dim * 16)
    throw std::invalid_argument("malformed .ham file: payload size mismatch");
  Eigen::MatrixXcd u(dim, dim);
  std::size_t off = 0;
  for (int i = 0; i < dim; ++i)
    for (int jj = 0; jj < dim; ++jj) {
      double re, im;
      std::memcpy(&re, bytes.data() + off, 8);
      std::memcpy(&im, bytes.data() + off + 8, 8);
      u(i, jj) = {re, im};
      off += 16;
    }
  if (payload_hash(c, bytes) != j.at("hash").get<std::string>())
    throw std::invalid_argument("malformed .ham file: content hash mismatch");
  Eigen::VectorXd eps(dim);
  for (int k = 0; k < dim; ++k) eps(k) = k + 1;
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  try {
    return ProblemHamiltonian(c, std::move(u), std::move(eps), seed);
  } catch (const ContractViolation& e) {
    throw std::invalid_argument(std::string("malformed .ham file: ") + e.what());
  }
}

Ordering index_energy_order(const ProblemHamiltonian& h, int k, int kprime) {
  if (k < 1 || k > h.d() || kprime < 1 || kprime > h.d())
    throw std::out_of_range("index_energy_order: index out of range");
  const double a = h.eigenvalues()(k - 1);
  const double b = h.eigenvalues()(kprime - 1);
  if (a < b) return Ordering::Less;
  if (a > b) return Ordering::Greater;
  return Ordering::Equal;
}

}  // namespace qga
