// Copyright 2026 The bslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BSLAB_BUILDERS_HPP
#define BSLAB_BUILDERS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "bslab/circuit.hpp"
#include "bslab/code.hpp"

namespace bslab {

inline constexpr double kPi = 3.14159265358979323846;

/// Gate durations fed into wall-clock accounting. Two-qubit interactions
/// take 225 us; single-qubit gates a configurable constant; virtual RZ is
/// free.
struct BuildOptions {
  double t_single_us = 10.0;
  double t_two_us = 225.0;
};

enum class StabOrdering { FT, nFT };

struct InjectSpec {
  char axis = 'Z';
  double theta = kPi;
  int after_k = 3;  // injection point, in completed ancilla interactions
};

/// CNOT(control -> target) from one XX(pi/4) plus single-qubit rotations:
/// CNOT = e^{i pi/4} RZ_c(pi/2) RX_t(pi/2) RY_c(pi/2) XX(pi/4) RY_c(-pi/2),
/// listed here in time order.
inline void append_cnot(Circuit& c, int control, int target, const BuildOptions& opts = {}) {
  if (control == target) throw std::invalid_argument("append_cnot: identical qubits");
  c.r(control, -kPi / 2, kPi / 2, opts.t_single_us);
  c.xx(control, target, kPi / 4, opts.t_two_us);
  c.r(control, kPi / 2, kPi / 2, opts.t_single_us);
  c.r(target, kPi / 2, 0.0, opts.t_single_us);
  c.rz(control, kPi / 2);
}

/// Standalone native CNOT circuit (for equivalence checks).
inline Circuit decompose_cnot(int control, int target, const BuildOptions& opts = {}) {
  Circuit c(13, "cnot");
  append_cnot(c, control, target, opts);
  return c;
}

namespace detail {

inline void append_row_ghz_stage(Circuit& c, const BuildOptions& opts) {
  for (int leader : {1, 4, 7}) {
    c.r(leader, kPi / 2, kPi / 2, opts.t_single_us);
    append_cnot(c, leader, leader + 1, opts);
    append_cnot(c, leader, leader + 2, opts);
  }
}

inline void append_hadamard_stage(Circuit& c, const BuildOptions& opts) {
  for (int q = 1; q <= 9; ++q) c.r(q, -kPi / 2, kPi / 2, opts.t_single_us);
}

inline void mark_unused_as_flags(Circuit& c) {
  for (uint32_t q = 9; q < c.n_qubits; ++q) c.roles[q] = QubitRole::Flag;
}

}  // namespace detail

/// Fault-tolerant preparation of the Z/X-basis logical states. Row leaders
/// 1, 4, 7 are prepared in |0> (sign +) or |1> (sign -); each grid row is
/// expanded into a GHZ state with two CNOTs; no entangling gate couples
/// distinct rows. Z-basis states append the transversal Hadamard-equivalent
/// stage RY(-pi/2) on all nine data qubits. X-basis states keep the bare
/// row GHZ form and carry the grid-transpose relabeling (the omitted
/// Hadamard and rotation stages cancel up to that relabeling).
inline Circuit build_ft_encode(Basis basis, int sign, const BuildOptions& opts = {}) {
  Circuit c(13, std::string("ft-encode-") + (basis == Basis::Z ? "z" : "x") +
                    (sign > 0 ? "+" : "-"));
  detail::mark_unused_as_flags(c);
  for (int q = 1; q <= 9; ++q) {
    bool leader = q == 1 || q == 4 || q == 7;
    c.prep_z(q, leader && sign < 0 ? 1 : 0);
  }
  detail::append_row_ghz_stage(c, opts);
  if (basis == Basis::Z) {
    detail::append_hadamard_stage(c, opts);
  } else {
    c.net_perm = Permutation::transpose();
  }
  return c;
}

/// Non-fault-tolerant preparation of an arbitrary logical state
/// alpha|0>_L + beta|1>_L, controlled by R(theta, phi) on qubit 1 whose
/// output amplitudes are (alpha, beta). The prepended CNOTs 1->4 and 1->7
/// spread qubit 1 across the row leaders, which is what forfeits fault
/// tolerance.
inline Circuit build_nft_encode(double theta, double phi, const BuildOptions& opts = {}) {
  Circuit c(13, "nft-encode");
  detail::mark_unused_as_flags(c);
  for (int q = 1; q <= 9; ++q) c.prep_z(q, 0);
  c.r(1, theta, phi, opts.t_single_us);
  append_cnot(c, 1, 4, opts);
  append_cnot(c, 1, 7, opts);
  detail::append_row_ghz_stage(c, opts);
  detail::append_hadamard_stage(c, opts);
  return c;
}

/// Transversal Y_L(+-pi/2): R(+-pi/2, pi/2) on each data qubit followed by
/// the grid-transpose relabeling in post-processing.
inline std::pair<Circuit, Permutation> build_transversal_yl(int direction,
                                                            const BuildOptions& opts = {}) {
  Circuit c(13, direction > 0 ? "yl+90" : "yl-90");
  double theta = direction > 0 ? kPi / 2 : -kPi / 2;
  for (int q = 1; q <= 9; ++q) c.r(q, theta, kPi / 2, opts.t_single_us);
  c.net_perm = Permutation::transpose();
  return {c, c.net_perm};
}

/// Continuous nFT logical rotation exp(-i(theta/2) Y1 Z2 Z3 X4 X7) compiled
/// to natives: basis changes mapping each factor to Z, a CNOT ladder onto
/// qubit 1, RZ(theta), and the unconjugation.
inline Circuit build_nft_yl(double theta, const BuildOptions& opts = {}) {
  Circuit c(13, "nft-yl");
  c.r(1, kPi / 2, 0.0, opts.t_single_us);         // Y1 -> Z1
  c.r(4, -kPi / 2, kPi / 2, opts.t_single_us);    // X4 -> Z4
  c.r(7, -kPi / 2, kPi / 2, opts.t_single_us);    // X7 -> Z7
  for (int q : {2, 3, 4, 7}) append_cnot(c, q, 1, opts);
  c.rz(1, theta);
  for (int q : {7, 4, 3, 2}) append_cnot(c, q, 1, opts);
  c.r(1, -kPi / 2, 0.0, opts.t_single_us);
  c.r(4, kPi / 2, kPi / 2, opts.t_single_us);
  c.r(7, kPi / 2, kPi / 2, opts.t_single_us);
  return c;
}

/// Ancilla interaction order for a stabilizer measurement. The FT ordering
/// walks the support so that consecutive interactions form gauge pairs
/// (row pairs for the X stabilizers, column pairs for the Z stabilizers);
/// the nFT ordering is the transposed traversal. For S3 this gives
/// FT = (1,2,4,5,7,8) and nFT = (1,4,7,2,5,8).
inline std::array<int, 6> stab_interaction_order(int stab_index, StabOrdering ordering) {
  const auto& code = BaconShorCode::instance();
  std::vector<int> support;
  uint32_t sup = code.stabilizer(stab_index).support();
  for (int q = 1; q <= 9; ++q)
    if ((sup >> (q - 1)) & 1) support.push_back(q);
  bool x_type = stab_index >= 2;
  bool row_major = (ordering == StabOrdering::FT) == x_type;
  std::array<int, 6> out{};
  size_t i = 0;
  if (row_major) {
    for (int row = 1; row <= 3; ++row)
      for (int q : support)
        if (BaconShorCode::grid_row(q) == row) out[i++] = q;
  } else {
    for (int col = 1; col <= 3; ++col)
      for (int q : support)
        if (BaconShorCode::grid_col(q) == col) out[i++] = q;
  }
  return out;
}

/// Ancilla-mediated measurement of one weight-6 stabilizer: six CNOTs from
/// the support onto the dedicated ancilla, each X-type interaction
/// sandwiched by the basis change on its data qubit. An optional Z(theta)
/// error is injected on the ancilla after `after_k` completed interactions
/// (default 3, the middle of the measurement).
inline Circuit build_stab_measure(int stab_index, StabOrdering ordering,
                                  std::optional<InjectSpec> inject = std::nullopt,
                                  const BuildOptions& opts = {}) {
  Circuit c(13, std::string("stab-s") + std::to_string(stab_index + 1) +
                    (ordering == StabOrdering::FT ? "-ft" : "-nft"));
  int anc = BaconShorCode::ancilla_label(stab_index);
  c.roles[anc - 1] = QubitRole::Ancilla;
  bool x_type = stab_index >= 2;
  auto order = stab_interaction_order(stab_index, ordering);
  c.prep_z(anc, 0);
  if (inject && inject->after_k == 0) c.inject_pauli(anc, inject->axis, inject->theta, 0);
  for (int k = 1; k <= 6; ++k) {
    int d = order[k - 1];
    if (x_type) c.r(d, -kPi / 2, kPi / 2, opts.t_single_us);
    append_cnot(c, d, anc, opts);
    if (x_type) c.r(d, kPi / 2, kPi / 2, opts.t_single_us);
    if (inject && inject->after_k == k) c.inject_pauli(anc, inject->axis, inject->theta, k);
  }
  return c;
}

/// Full syndrome extraction onto ancillas 12, 13, 10, 11: stabilizers
/// measured in the order S3, S4, S1, S2 with FT orderings, following an
/// optional injected single-qubit Pauli. FT-encoded |0>_L is assumed
/// upstream.
inline Circuit build_full_syndrome(std::optional<std::pair<int, char>> inject = std::nullopt,
                                   const BuildOptions& opts = {}) {
  Circuit c(13, "full-syndrome");
  if (inject) {
    if (inject->first < 1 || inject->first > 9) {
      throw std::invalid_argument("build_full_syndrome: injected qubit must be 1..9");
    }
    c.inject_pauli(inject->first, inject->second, kPi, 0);
  }
  for (int stab : {2, 3, 0, 1}) {
    c.append(build_stab_measure(stab, StabOrdering::FT, std::nullopt, opts));
  }
  return c;
}

/// Appends Z-basis readout of all qubits.
inline void measure_in_z(Circuit& c) { c.measure_all(Basis::Z); }

/// Appends X-basis readout: the transversal Y_L(-pi/2) on the data block
/// (with its relabeling) followed by global readout tagged as X basis.
inline void measure_in_x(Circuit& c, const BuildOptions& opts = {}) {
  auto [rot, perm] = build_transversal_yl(-1, opts);
  c.append(rot);
  c.measure_all(Basis::X);
}

}  // namespace bslab

#endif  // BSLAB_BUILDERS_HPP
