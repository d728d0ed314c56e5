#pragma once

#include <cstdint>

#include "qga/errors.hpp"

namespace qga {

// Shape of a population: n registers (individuals) of c qubits each.
//
// Index convention, fixed once for the whole project: register 1 occupies the
// most significant qubits of a basis index; within a register, qubit 1 is the
// most significant. Registers and qubits are 1-based in every public
// interface. Basis index b therefore decomposes as
//   b = k_1 * d^(n-1) + k_2 * d^(n-2) + ... + k_n,  k_r in [0, d).
struct PopulationLayout {
  int n;            // registers
  int c;            // qubits per register
  int d;            // 2^c, per-register dimension
  std::int64_t D;   // d^n, population dimension

  PopulationLayout(int n_registers, int qubits_per_register)
      : n(n_registers), c(qubits_per_register) {
    if (n < 1 || c < 1) throw ContractViolation("layout: n and c must be >= 1");
    if (n * c > 24) throw SizeError("layout: more than 24 qubits is not supported densely");
    d = 1 << c;
    D = std::int64_t{1} << (n * c);
  }

  // The full algorithm pairs registers and splits chromosomes in half, which
  // requires n divisible by 4 and c even. Component channels that do not
  // (sorting, reset, cloning, mutation) accept any layout.
  void require_qga_shape() const {
    if (n % 4 != 0) throw ConfigurationError("layout: n must be divisible by 4");
    if (c % 2 != 0) throw ConfigurationError("layout: c must be even");
  }

  int num_qubits() const { return n * c; }
  std::int64_t lower_dim() const { return std::int64_t{1} << ((n / 2) * c); }

  // Value of register reg (1-based) inside basis index b.
  std::int64_t register_digit(std::int64_t b, int reg) const {
    return (b >> (c * (n - reg))) & (d - 1);
  }

  // Basis index b with register reg (1-based) replaced by value v.
  std::int64_t with_register_digit(std::int64_t b, int reg, std::int64_t v) const {
    const int shift = c * (n - reg);
    return (b & ~(std::int64_t(d - 1) << shift)) | (v << shift);
  }

  // Bit mask of global qubit q (1-based, q = 1 is the most significant).
  std::int64_t qubit_mask(int q) const { return std::int64_t{1} << (n * c - q); }
};

}  // namespace qga
