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

#ifndef BSLAB_EXECUTOR_HPP
#define BSLAB_EXECUTOR_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bslab/builders.hpp"
#include "bslab/circuit.hpp"
#include "bslab/noise.hpp"
#include "bslab/rng.hpp"
#include "bslab/statevector.hpp"

namespace bslab {

/// One measured shot: a bit per qubit (bit q-1 for label q) plus the
/// readout basis tag (X means the transversal rotation preceded readout).
struct ShotRecord {
  uint32_t bits = 0;
  Basis basis = Basis::Z;
};

/// All shots of one run, with the circuit context needed to decode them.
struct ShotBatch {
  std::vector<uint32_t> bits;
  Basis basis = Basis::Z;
  uint32_t n_qubits = 13;
  uint32_t flag_mask = 0;
  Permutation perm;

  size_t size() const { return bits.size(); }
  ShotRecord shot(size_t i) const { return {bits[i], basis}; }
};

/// Removes shots where any crosstalk-flag qubit read |1>. Returns the
/// discarded fraction through `discarded`.
inline ShotBatch flag_filter(const ShotBatch& in, double* discarded = nullptr) {
  ShotBatch out = in;
  out.bits.clear();
  for (uint32_t b : in.bits) {
    if ((b & in.flag_mask) == 0) out.bits.push_back(b);
  }
  if (discarded) {
    size_t n = in.bits.size();
    *discarded = n == 0 ? 0.0 : double(n - out.bits.size()) / double(n);
  }
  return out;
}

struct RunOptions {
  size_t shots = 1000;
  uint64_t seed = 24601;
  /// Stochastic per-gate Pauli fault rate: after every R and XX gate a
  /// uniformly random nontrivial Pauli lands on its support with this
  /// probability. Used for fault-scaling sweeps, off by default.
  double gate_depol_p = 0.0;
};

namespace detail {

inline uint32_t flag_mask_of(const Circuit& c) {
  uint32_t m = 0;
  for (int q : c.flag_labels()) m |= 1u << (q - 1);
  return m;
}

inline void apply_gate_depol(StateVector& state, const GateOp& op, double p, RngStream& rng) {
  if (op.kind != OpKind::R && op.kind != OpKind::XX) return;
  if (!rng.bernoulli(p)) return;
  uint32_t n = state.n_qubits();
  if (op.kind == OpKind::R) {
    uint64_t pick = rng.below(3);  // X, Y, Z
    uint32_t bit = 1u << (op.q1 - 1);
    state.apply_pauli(PauliString(n, pick != 2 ? bit : 0, pick != 0 ? bit : 0));
  } else {
    uint64_t pick = rng.below(15) + 1;  // nontrivial two-qubit Paulis
    uint32_t b1 = 1u << (op.q1 - 1), b2 = 1u << (op.q2 - 1);
    uint32_t x = 0, z = 0;
    uint32_t p1 = uint32_t(pick) & 3u, p2 = (uint32_t(pick) >> 2) & 3u;
    if (p1 == 1 || p1 == 2) x |= b1;
    if (p1 == 2 || p1 == 3) z |= b1;
    if (p2 == 1 || p2 == 2) x |= b2;
    if (p2 == 2 || p2 == 3) z |= b2;
    state.apply_pauli(PauliString(n, x, z));
  }
}

}  // namespace detail

/// Executes circuits under a NoiseConfig. Coherent overrotations are
/// deterministic, so runs without stochastic unitaries evolve the state
/// once and draw all shots from it; otherwise each shot evolves its own
/// trajectory with an independent RNG stream derived from (seed, shot).
class Executor {
 public:
  /// Deterministic evolution (preps, perturbed gates, injections) over the
  /// active register prefix. Stochastic noise channels do not apply here.
  static StateVector run_state(const Circuit& circuit, const NoiseConfig& noise) {
    StateVector state(circuit.active_qubits());
    for (const auto& op : circuit.ops) {
      apply_op(state, op, noise);
    }
    return state;
  }

  static StateVector run_state(const Circuit& circuit) { return run_state(circuit, NoiseConfig::none()); }

  static ShotBatch run_shots(const Circuit& circuit, const NoiseConfig& noise,
                             const RunOptions& opts) {
    if (!circuit.has_measure()) throw std::invalid_argument("run_shots: circuit lacks MeasureAll");
    noise.validate();
    ShotBatch batch;
    batch.basis = circuit.measure_basis();
    batch.n_qubits = circuit.n_qubits;
    batch.flag_mask = detail::flag_mask_of(circuit);
    batch.perm = circuit.net_perm;
    batch.bits.resize(opts.shots);

    uint32_t active = circuit.active_qubits();
    bool per_shot = noise.t2_star > 0.0 || noise.p_prep > 0.0 || opts.gate_depol_p > 0.0;
    if (!per_shot) {
      StateVector state = run_state(circuit, noise);
      for (size_t s = 0; s < opts.shots; ++s) {
        RngStream rng(opts.seed, s);
        uint32_t bits = state.sample_one(rng);
        batch.bits[s] = sample_spam(bits, circuit.n_qubits, noise, rng);
      }
      return batch;
    }

    for (size_t s = 0; s < opts.shots; ++s) {
      RngStream rng(opts.seed, s);
      StateVector state(active);
      for (const auto& op : circuit.ops) {
        if (op.kind == OpKind::PrepZ && noise.p_prep > 0.0) {
          GateOp flipped = op;
          if (rng.bernoulli(noise.p_prep)) flipped.prep_bit ^= 1;
          apply_op(state, flipped, noise);
        } else {
          apply_op(state, op, noise);
        }
        if (opts.gate_depol_p > 0.0) {
          detail::apply_gate_depol(state, op, opts.gate_depol_p, rng);
        }
        if (noise.t2_star > 0.0 && op.cost_us > 0.0) {
          apply_collective_dephasing(state, op.cost_us * 1e-6, noise, rng);
        }
      }
      uint32_t bits = state.sample_one(rng);
      batch.bits[s] = sample_spam(bits, circuit.n_qubits, noise, rng);
    }
    return batch;
  }

 private:
  static void apply_op(StateVector& state, const GateOp& raw, const NoiseConfig& noise) {
    GateOp op = perturb_gate(raw, noise);
    switch (op.kind) {
      case OpKind::PrepZ:
        if (op.prep_bit) state.apply_x(op.q1 - 1);
        break;
      case OpKind::R:
        state.apply_r(op.q1 - 1, op.theta, op.phi);
        break;
      case OpKind::RZ:
        state.apply_rz(op.q1 - 1, op.theta);
        break;
      case OpKind::XX:
        state.apply_xx(op.q1 - 1, op.q2 - 1, op.chi);
        break;
      case OpKind::PauliExp:
        state.apply_pauli_exp(op.pauli.truncated(state.n_qubits()), op.theta);
        break;
      case OpKind::InjectPauli:
        state.apply_pauli_exp(PauliString::single(state.n_qubits(), op.axis, op.q1), op.theta);
        break;
      case OpKind::MeasureAll:
        break;
    }
  }
};

}  // namespace bslab

#endif  // BSLAB_EXECUTOR_HPP
