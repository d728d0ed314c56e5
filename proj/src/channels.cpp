#include "qga/channels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <memory>

namespace qga {

Variant::Variant(Cloner cl, MutationMode mu, double p) : cloner(cl), mutation(mu), pm(p) {
  if (mutation != MutationMode::Off && (pm < 0.0 || pm > 1.0))
    throw ContractViolation("variant: mutation probability must be in [0,1]");
}

std::string cloner_name(Cloner c) { return c == Cloner::BCQO ? "bcqo" : "uqcm"; }

std::string Variant::name() const {
  std::string m = mutation == MutationMode::Off      ? "off"
                  : mutation == MutationMode::Sampled ? "sampled"
                                                      : "exact";
  return cloner_name(cloner) + ":" + m;
}

Variant Variant::parse(const std::string& s) {
  const auto colon = s.find(':');
  const std::string cl = s.substr(0, colon);
  const std::string mu = colon == std::string::npos ? "off" : s.substr(colon + 1);
  Variant v;
  if (cl == "bcqo")
    v.cloner = Cloner::BCQO;
  else if (cl == "uqcm")
    v.cloner = Cloner::UQCM;
  else
    throw ConfigurationError("unknown cloner: " + cl);
  if (mu == "off")
    v.mutation = MutationMode::Off;
  else if (mu == "sampled")
    v.mutation = MutationMode::Sampled;
  else if (mu == "exact")
    v.mutation = MutationMode::Exact;
  else
    throw ConfigurationError("unknown mutation mode: " + mu);
  v.pm = v.mutation == MutationMode::Off ? 0.0 : 1.0 / 24.0;
  return v;
}

Eigen::MatrixXcd Channel::apply_matrix(const Eigen::MatrixXcd& m) const {
  if (stochastic_)
    throw ConfigurationError("channel with sampled mutation needs an RngStream");
  if (m.rows() != layout_.D || m.cols() != layout_.D)
    throw std::out_of_range("channel: matrix dimension mismatch");
  return fn_(m, nullptr);
}

Eigen::MatrixXcd Channel::apply_matrix(const Eigen::MatrixXcd& m, RngStream& rng) const {
  if (m.rows() != layout_.D || m.cols() != layout_.D)
    throw std::out_of_range("channel: matrix dimension mismatch");
  return fn_(m, &rng);
}

PopulationState Channel::apply(const PopulationState& s) const {
  return PopulationState(layout_, apply_matrix(s.matrix()));
}

PopulationState Channel::apply(const PopulationState& s, RngStream& rng) const {
  return PopulationState(layout_, apply_matrix(s.matrix(), rng));
}

Channel compose(PopulationLayout layout, std::vector<Channel> stages) {
  bool stochastic = false;
  for (const auto& s : stages) {
    if (s.layout().D != layout.D)
      throw ConfigurationError("compose: stage dimension mismatch");
    stochastic = stochastic || s.stochastic();
  }
  auto shared = std::make_shared<std::vector<Channel>>(std::move(stages));
  return Channel(layout, ChannelKind::Composite, stochastic,
                 [shared](const Eigen::MatrixXcd& m, RngStream* rng) {
                   Eigen::MatrixXcd cur = m;
                   for (const auto& s : *shared)
                     cur = rng ? s.apply_matrix(cur, *rng) : s.apply_matrix(cur);
                   return cur;
                 });
}

// ---- sorting ----------------------------------------------------------------

SortTable build_sort_table(const PopulationLayout& layout, const ProblemHamiltonian& h) {
  if (h.d() != layout.d) throw ConfigurationError("sort table: hamiltonian dimension mismatch");
  if (layout.n > 8) throw SizeError("sort table: instruction bitstrings need n <= 8");
  if (layout.D > (std::int64_t{1} << 20)) throw SizeError("sort table: population too large");

  SortTable table{layout, layout.n * (layout.n - 1) / 2, {}, {}, {}};
  table.sigma.resize(layout.D);
  table.sorted_index.resize(layout.D);
  std::map<std::uint32_t, std::vector<std::int64_t>> groups;

  std::vector<int> seq(layout.n);
  for (std::int64_t k = 0; k < layout.D; ++k) {
    for (int r = 1; r <= layout.n; ++r)
      seq[r - 1] = static_cast<int>(layout.register_digit(k, r));
    std::uint32_t sigma = 0;
    int bit = 0;
    for (int layer = 1; layer <= layout.n; ++layer) {
      for (int i = (layer % 2 == 1) ? 0 : 1; i + 1 < layout.n; i += 2, ++bit) {
        if (index_energy_order(h, seq[i] + 1, seq[i + 1] + 1) == Ordering::Greater) {
          std::swap(seq[i], seq[i + 1]);
          sigma |= (std::uint32_t{1} << bit);
        }
      }
    }
    std::int64_t sorted = 0;
    for (int r = 0; r < layout.n; ++r) sorted = (sorted << layout.c) | seq[r];
    table.sigma[k] = sigma;
    table.sorted_index[k] = sorted;
    groups[sigma].push_back(k);
  }
  table.groups.assign(groups.begin(), groups.end());
  return table;
}

namespace {

struct SortData {
  SortTable table;
  Eigen::MatrixXcd u;      // problem basis, d x d
  bool rotate;             // false when the basis is computational
};

Eigen::MatrixXcd apply_sorting(const SortData& sd, const Eigen::MatrixXcd& m) {
  const auto& lay = sd.table.layout;
  Eigen::MatrixXcd work = m;
  if (sd.rotate) {
    const Eigen::MatrixXcd udag = sd.u.adjoint();
    for (int r = 1; r <= lay.n; ++r) {
      apply_register_left(work, udag, lay, r);
      apply_register_right(work, sd.u, lay, r);
    }
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(lay.D, lay.D);
  for (const auto& [sigma, members] : sd.table.groups) {
    (void)sigma;
    for (std::int64_t kj : members) {
      const std::int64_t sj = sd.table.sorted_index[kj];
      for (std::int64_t ki : members) out(sd.table.sorted_index[ki], sj) += work(ki, kj);
    }
  }
  if (sd.rotate) {
    const Eigen::MatrixXcd udag = sd.u.adjoint();
    for (int r = 1; r <= lay.n; ++r) {
      apply_register_left(out, sd.u, lay, r);
      apply_register_right(out, udag, lay, r);
    }
  }
  return out;
}

}  // namespace

Channel sorting_channel(const PopulationLayout& layout, const ProblemHamiltonian& h) {
  auto sd = std::make_shared<SortData>(
      SortData{build_sort_table(layout, h), h.basis_unitary(), !h.basis_is_computational()});
  return Channel(layout, ChannelKind::Sort, false,
                 [sd](const Eigen::MatrixXcd& m, RngStream*) { return apply_sorting(*sd, m); });
}

std::vector<Eigen::MatrixXcd> sorting_kraus(const PopulationLayout& layout,
                                            const ProblemHamiltonian& h) {
  if (layout.D > 256) throw SizeError("sorting_kraus: dense Kraus enumeration needs D <= 256");
  const SortTable table = build_sort_table(layout, h);
  Eigen::MatrixXcd upop = Eigen::MatrixXcd::Identity(1, 1);
  for (int r = 0; r < layout.n; ++r) upop = tensor(upop, h.basis_unitary());
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(table.groups.size());
  for (const auto& [sigma, members] : table.groups) {
    (void)sigma;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(layout.D, layout.D);
    for (std::int64_t k : members) a(table.sorted_index[k], k) = 1.0;
    kraus.push_back(h.basis_is_computational() ? a : Eigen::MatrixXcd(upop * a * upop.adjoint()));
  }
  return kraus;
}

// ---- reset ------------------------------------------------------------------

namespace {

void check_density_matrix(const Eigen::MatrixXcd& rho0, int d, const char* who) {
  if (rho0.rows() != d || rho0.cols() != d)
    throw ContractViolation(std::string(who) + ": reference state must be d x d");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-10 || std::abs(rho0.trace().imag()) > 1e-10)
    throw ContractViolation(std::string(who) + ": reference state trace is not 1");
  if (max_abs(rho0 - rho0.adjoint()) > 1e-10)
    throw ContractViolation(std::string(who) + ": reference state is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw ContractViolation(std::string(who) + ": reference state is not positive");
}

Eigen::MatrixXcd trace_out_lower(const Eigen::MatrixXcd& m, std::int64_t dup, std::int64_t low) {
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(dup, dup);
  for (std::int64_t b = 0; b < dup; ++b)
    for (std::int64_t a = 0; a < dup; ++a) {
      std::complex<double> acc = 0.0;
      for (std::int64_t l = 0; l < low; ++l) acc += m(a * low + l, b * low + l);
      up(a, b) = acc;
    }
  return up;
}

}  // namespace

Channel reset_channel(const PopulationLayout& layout, const Eigen::MatrixXcd& rho0) {
  if (layout.n % 2 != 0) throw ConfigurationError("reset: n must be even");
  check_density_matrix(rho0, layout.d, "reset");
  auto rho_low = std::make_shared<Eigen::MatrixXcd>(Eigen::MatrixXcd::Identity(1, 1));
  for (int r = 0; r < layout.n / 2; ++r) *rho_low = tensor(*rho_low, rho0);
  const std::int64_t low = layout.lower_dim();
  const std::int64_t dup = layout.D / low;
  return Channel(layout, ChannelKind::Reset, false,
                 [rho_low, low, dup](const Eigen::MatrixXcd& m, RngStream*) {
                   const Eigen::MatrixXcd up = trace_out_lower(m, dup, low);
                   Eigen::MatrixXcd out(dup * low, dup * low);
                   for (std::int64_t b = 0; b < dup; ++b)
                     for (std::int64_t a = 0; a < dup; ++a)
                       out.block(a * low, b * low, low, low) = up(a, b) * (*rho_low);
                   return out;
                 });
}

std::vector<Eigen::MatrixXcd> reset_kraus(const PopulationLayout& layout,
                                          const Eigen::MatrixXcd& rho0) {
  if (layout.n % 2 != 0) throw ConfigurationError("reset: n must be even");
  if (layout.D > 256) throw SizeError("reset_kraus: dense Kraus enumeration needs D <= 256");
  check_density_matrix(rho0, layout.d, "reset");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0);
  const int half = layout.n / 2;
  const std::int64_t low = layout.lower_dim();
  const std::int64_t dup = layout.D / low;

  // Eigenvector tuples of rho0^(n/2) with nonzero weight.
  std::vector<std::pair<double, Eigen::VectorXcd>> tuples;
  tuples.emplace_back(1.0, Eigen::VectorXcd::Ones(1));
  for (int r = 0; r < half; ++r) {
    std::vector<std::pair<double, Eigen::VectorXcd>> next;
    for (const auto& [w, v] : tuples)
      for (int e = 0; e < layout.d; ++e) {
        const double we = es.eigenvalues()(e);
        if (w * we <= 1e-14) continue;
        next.emplace_back(w * we, tensor(v, Eigen::VectorXcd(es.eigenvectors().col(e))));
      }
    tuples = std::move(next);
  }

  std::vector<Eigen::MatrixXcd> kraus;
  for (const auto& [w, v] : tuples)
    for (std::int64_t j = 0; j < low; ++j) {
      Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(layout.D, layout.D);
      for (std::int64_t a = 0; a < dup; ++a)
        b.block(a * low, a * low + j, low, 1) = std::sqrt(w) * v;
      kraus.push_back(std::move(b));
    }
  return kraus;
}

Eigen::MatrixXcd bcqo_reference_state(int c) {
  const int d = 1 << c;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

Eigen::MatrixXcd uqcm_reference_state(int c) {
  const int d = 1 << c;
  return Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
}

// ---- cloning ----------------------------------------------------------------

Channel bcqo_clone_channel(const PopulationLayout& layout) {
  if (layout.n % 2 != 0) throw ConfigurationError("bcqo clone: n must be even");
  auto perm = std::make_shared<std::vector<std::int64_t>>(layout.D);
  for (std::int64_t b = 0; b < layout.D; ++b) {
    std::int64_t p = b;
    for (int r = 1; r <= layout.n / 2; ++r) {
      const std::int64_t src = layout.register_digit(b, r);
      const std::int64_t tgt = layout.register_digit(b, r + layout.n / 2);
      p = layout.with_register_digit(p, r + layout.n / 2, tgt ^ src);
    }
    (*perm)[b] = p;
  }
  return Channel(layout, ChannelKind::Clone, false,
                 [perm](const Eigen::MatrixXcd& m, RngStream*) {
                   return conjugate_by_permutation(m, *perm);
                 });
}

Channel uqcm_clone_channel(const PopulationLayout& layout) {
  if (layout.n % 2 != 0) throw ConfigurationError("uqcm clone: n must be even");
  const int half = layout.n / 2;
  const std::int64_t low = layout.lower_dim();
  const std::int64_t dup = layout.D / low;

  // S+ on every pair expands into a sum over subsets of pair swaps; the
  // sandwich is two gather passes over those 2^(n/2) permutations.
  auto perms = std::make_shared<std::vector<std::vector<std::int64_t>>>();
  for (int subset = 0; subset < (1 << half); ++subset) {
    std::vector<std::int64_t> p(layout.D);
    for (std::int64_t b = 0; b < layout.D; ++b) {
      std::int64_t x = b;
      for (int r = 1; r <= half; ++r)
        if (subset & (1 << (r - 1))) {
          const std::int64_t va = layout.register_digit(b, r);
          const std::int64_t vb = layout.register_digit(b, r + half);
          x = layout.with_register_digit(x, r, vb);
          x = layout.with_register_digit(x, r + half, va);
        }
      p[b] = x;
    }
    perms->push_back(std::move(p));
  }

  const double d = layout.d;
  const double scale =
      std::pow(2.0 * d / (d + 1.0), half) / std::pow(2.0, layout.n);
  return Channel(
      layout, ChannelKind::Clone, false,
      [perms, low, dup, scale](const Eigen::MatrixXcd& m, RngStream*) {
        const std::int64_t D = m.rows();
        const Eigen::MatrixXcd up = trace_out_lower(m, dup, low);
        Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(D, D);
        const double invlow = 1.0 / static_cast<double>(low);
        for (std::int64_t b = 0; b < dup; ++b)
          for (std::int64_t a = 0; a < dup; ++a)
            for (std::int64_t l = 0; l < low; ++l)
              mixed(a * low + l, b * low + l) = up(a, b) * invlow;
        Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(D, D);
        for (const auto& p : *perms)
          for (std::int64_t j = 0; j < D; ++j)
            for (std::int64_t i = 0; i < D; ++i) left(i, j) += mixed(p[i], j);
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
        for (const auto& p : *perms)
          for (std::int64_t j = 0; j < D; ++j)
            for (std::int64_t i = 0; i < D; ++i) out(i, j) += left(i, p[j]);
        return Eigen::MatrixXcd(scale * out);
      });
}

std::vector<Eigen::MatrixXcd> uqcm_pair_kraus(int c) {
  const int d = 1 << c;
  const int dd = d * d;
  Eigen::MatrixXcd splus = Eigen::MatrixXcd::Zero(dd, dd);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      splus(a * d + b, a * d + b) += 0.5;
      splus(b * d + a, a * d + b) += 0.5;
    }
  const double f = std::sqrt(2.0 / (d + 1.0));
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(dd);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) {
      Eigen::MatrixXcd rk = Eigen::MatrixXcd::Zero(dd, dd);
      for (int a = 0; a < d; ++a) rk(a * d + r, a * d + k) = 1.0;
      kraus.push_back(f * splus * rk);
    }
  return kraus;
}

// ---- crossover --------------------------------------------------------------

Channel crossover_swap(const PopulationLayout& layout) {
  layout.require_qga_shape();
  std::vector<std::pair<std::int64_t, std::int64_t>> swaps;
  for (int i = 0; i < layout.n / 4; ++i) {
    const int reg_a = layout.n / 2 + 2 * i + 1;
    const int reg_b = reg_a + 1;
    for (int pos = layout.c / 2 + 1; pos <= layout.c; ++pos)
      swaps.emplace_back(layout.qubit_mask((reg_a - 1) * layout.c + pos),
                         layout.qubit_mask((reg_b - 1) * layout.c + pos));
  }
  auto perm = std::make_shared<std::vector<std::int64_t>>(layout.D);
  for (std::int64_t b = 0; b < layout.D; ++b) {
    std::int64_t x = b;
    for (const auto& [ma, mb] : swaps) {
      const bool ba = x & ma, bb = x & mb;
      if (ba != bb) x ^= (ma | mb);
    }
    (*perm)[b] = x;
  }
  return Channel(layout, ChannelKind::Swap, false,
                 [perm](const Eigen::MatrixXcd& m, RngStream*) {
                   return conjugate_by_permutation(m, *perm);
                 });
}

// ---- mutation ---------------------------------------------------------------

Channel mutation_channel_exact(const PopulationLayout& layout, double pm) {
  if (pm < 0.0 || pm > 1.0) throw ContractViolation("mutation: pm must be in [0,1]");
  return Channel(layout, ChannelKind::Mutate, false,
                 [layout, pm](const Eigen::MatrixXcd& m, RngStream*) {
                   const std::int64_t D = layout.D;
                   Eigen::MatrixXcd work = m;
                   Eigen::MatrixXcd next(D, D);
                   for (int q = 1; q <= layout.num_qubits(); ++q) {
                     const std::int64_t mask = layout.qubit_mask(q);
                     for (std::int64_t j = 0; j < D; ++j) {
                       const bool bj = j & mask;
                       for (std::int64_t i = 0; i < D; ++i) {
                         const double s = ((static_cast<bool>(i & mask)) == bj) ? 1.0 : -1.0;
                         next(i, j) = (1.0 - pm) * work(i, j) +
                                      (pm / 3.0) * ((1.0 + s) * work(i ^ mask, j ^ mask) +
                                                    s * work(i, j));
                       }
                     }
                     work.swap(next);
                   }
                   return work;
                 });
}

namespace {

// A Pauli string as a signed basis permutation: index XOR mask plus a
// per-basis phase (from Y and Z factors).
struct PauliString {
  std::int64_t flip = 0;
  std::vector<std::complex<double>> phase;  // length D, amplitude at source index
};

// gates[q-1] in {0:I, 1:X, 2:Y, 3:Z}.
PauliString make_pauli_string(const PopulationLayout& layout, const std::vector<int>& gates) {
  PauliString ps;
  ps.phase.assign(layout.D, 1.0);
  for (int q = 1; q <= layout.num_qubits(); ++q) {
    const int g = gates[q - 1];
    const std::int64_t mask = layout.qubit_mask(q);
    if (g == 1 || g == 2) ps.flip ^= mask;
    if (g == 2) {
      for (std::int64_t b = 0; b < layout.D; ++b)
        ps.phase[b] *= (b & mask) ? std::complex<double>(0, -1) : std::complex<double>(0, 1);
    } else if (g == 3) {
      for (std::int64_t b = 0; b < layout.D; ++b)
        if (b & mask) ps.phase[b] = -ps.phase[b];
    }
  }
  return ps;
}

Eigen::MatrixXcd pauli_string_matrix(const PopulationLayout& layout, const PauliString& ps,
                                     double weight) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(layout.D, layout.D);
  for (std::int64_t b = 0; b < layout.D; ++b) u(b ^ ps.flip, b) = weight * ps.phase[b];
  return u;
}

// U rho U^dag for a Pauli string without forming the dense matrix.
Eigen::MatrixXcd conjugate_by_pauli_string(const Eigen::MatrixXcd& m, const PauliString& ps) {
  const std::int64_t D = m.rows();
  Eigen::MatrixXcd out(D, D);
  for (std::int64_t j = 0; j < D; ++j) {
    const std::complex<double> pj = std::conj(ps.phase[j]);
    const std::int64_t tj = j ^ ps.flip;
    for (std::int64_t i = 0; i < D; ++i) out(i ^ ps.flip, tj) = ps.phase[i] * pj * m(i, j);
  }
  return out;
}

std::vector<int> sample_pauli_gates(const PopulationLayout& layout, double pm, RngStream& rng) {
  std::vector<int> gates(layout.num_qubits(), 0);
  for (int q = 0; q < layout.num_qubits(); ++q) {
    const double u = rng.uniform();
    if (u >= 1.0 - pm) {
      const double v = (u - (1.0 - pm)) / pm;
      gates[q] = v < 1.0 / 3.0 ? 1 : (v < 2.0 / 3.0 ? 2 : 3);
    }
  }
  return gates;
}

}  // namespace

std::vector<Eigen::MatrixXcd> mutation_kraus(const PopulationLayout& layout, double pm) {
  if (pm < 0.0 || pm > 1.0) throw ContractViolation("mutation: pm must be in [0,1]");
  const int nq = layout.num_qubits();
  if (nq > 6) throw SizeError("mutation_kraus: dense enumeration needs at most 6 qubits");
  std::vector<Eigen::MatrixXcd> kraus;
  std::vector<int> gates(nq);
  const std::int64_t total = std::int64_t{1} << (2 * nq);
  for (std::int64_t code = 0; code < total; ++code) {
    double w = 1.0;
    for (int q = 0; q < nq; ++q) {
      gates[q] = static_cast<int>((code >> (2 * q)) & 3);
      w *= gates[q] == 0 ? (1.0 - pm) : pm / 3.0;
    }
    if (w <= 0.0) continue;
    kraus.push_back(pauli_string_matrix(layout, make_pauli_string(layout, gates), std::sqrt(w)));
  }
  return kraus;
}

Eigen::MatrixXcd sample_mutation_unitary(const PopulationLayout& layout, double pm,
                                         RngStream& rng) {
  if (pm < 0.0 || pm > 1.0) throw ContractViolation("mutation: pm must be in [0,1]");
  const auto gates = sample_pauli_gates(layout, pm, rng);
  return pauli_string_matrix(layout, make_pauli_string(layout, gates), 1.0);
}

// ---- generation -------------------------------------------------------------

Channel generation_channel(const PopulationLayout& layout, const ProblemHamiltonian& h,
                           const Variant& variant,
                           const std::optional<Eigen::MatrixXcd>& reset_state) {
  layout.require_qga_shape();
  if (h.d() != layout.d) throw ConfigurationError("generation: hamiltonian dimension mismatch");

  const Eigen::MatrixXcd reference = variant.cloner == Cloner::BCQO
                                         ? bcqo_reference_state(layout.c)
                                         : uqcm_reference_state(layout.c);
  if (reset_state) {
    if (reset_state->rows() != layout.d || reset_state->cols() != layout.d ||
        max_abs(*reset_state - reference) > 1e-12)
      throw ConfigurationError("generation: reset state does not match the cloner's reference");
  }

  std::vector<Channel> stages;
  stages.push_back(reset_channel(layout, reference));
  stages.push_back(variant.cloner == Cloner::BCQO ? bcqo_clone_channel(layout)
                                                  : uqcm_clone_channel(layout));
  stages.push_back(crossover_swap(layout));
  if (variant.mutation == MutationMode::Exact) {
    stages.push_back(mutation_channel_exact(layout, variant.pm));
  } else if (variant.mutation == MutationMode::Sampled) {
    const double pm = variant.pm;
    stages.push_back(Channel(layout, ChannelKind::Mutate, true,
                             [layout, pm](const Eigen::MatrixXcd& m, RngStream* rng) {
                               if (!rng)
                                 throw ConfigurationError(
                                     "sampled mutation needs an RngStream");
                               const auto gates = sample_pauli_gates(layout, pm, *rng);
                               return conjugate_by_pauli_string(
                                   m, make_pauli_string(layout, gates));
                             }));
  }
  stages.push_back(sorting_channel(layout, h));

  Channel gen = compose(layout, std::move(stages));
  gen.set_variant(variant);
  return gen;
}

}  // namespace qga
