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

#ifndef BSLAB_NOISE_HPP
#define BSLAB_NOISE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <json.hpp>

#include "bslab/circuit.hpp"
#include "bslab/rng.hpp"
#include "bslab/statevector.hpp"

namespace bslab {

constexpr uint32_t kDataMask = 0x1FF;  // qubits 1..9

/// The four-parameter error model plus dephasing and flag settings:
/// coherent overrotations on every R and XX gate, asymmetric SPAM bit
/// flips, collective Gaussian dephasing calibrated to a physical T2*, GHZ
/// depolarization, and crosstalk-flag postselection. A config plus a seed
/// fully determines a stochastic run.
struct NoiseConfig {
  double eps_1q = 0.0;        // radians added to every R angle
  double eps_2q = 0.0;        // radians added to every XX angle
  double p_prep = 0.0;        // preparation bit-flip probability
  double p_dark_flip = 0.0;   // 0 read as 1
  double p_bright_flip = 0.0; // 1 read as 0
  double t2_star = 0.0;       // seconds; 0 disables wall-clock dephasing
  double ghz_depol_p = 0.0;   // per-row depolarization strength
  bool flag_filter = true;
  uint64_t seed = 24601;

  bool has_stochastic_unitaries() const { return t2_star > 0.0 || ghz_depol_p > 0.0; }

  void validate() const {
    for (double p : {p_prep, p_dark_flip, p_bright_flip, ghz_depol_p}) {
      if (p < 0.0 || p > 1.0) throw std::invalid_argument("NoiseConfig: probability outside [0,1]");
    }
    if (!std::isfinite(eps_1q) || !std::isfinite(eps_2q)) {
      throw std::invalid_argument("NoiseConfig: overrotation angles must be finite");
    }
    if (t2_star < 0.0) throw std::invalid_argument("NoiseConfig: t2_star must be >= 0");
  }

  static NoiseConfig none() {
    NoiseConfig c;
    c.flag_filter = false;
    return c;
  }

  /// Parameters translated from the reported hardware numbers: 1.8e-4
  /// single-qubit error, 98.9% two-qubit fidelity, the SPAM budget, and a
  /// 610 ms physical T2*.
  static NoiseConfig hardware() {
    NoiseConfig c;
    c.eps_1q = eps_1q_from_error(1.8e-4);
    c.eps_2q = eps_2q_from_fidelity(0.989);
    c.p_dark_flip = 0.0022;
    c.p_bright_flip = 0.0071;
    c.t2_star = 0.61;
    return c;
  }

  /// Overrotation angle from a two-qubit gate fidelity, inverting the
  /// state-overlap map F = |<00|XX(pi/4)^dag XX(pi/4+eps)|00>|^2 = cos^2(eps).
  static double eps_2q_from_fidelity(double fidelity) {
    if (fidelity <= 0.0 || fidelity > 1.0) throw std::invalid_argument("fidelity outside (0,1]");
    return std::acos(std::sqrt(fidelity));
  }

  /// Overrotation angle from a single-qubit error rate, inverting
  /// 1 - F = |<0|R(eps, phi)|0>|^2 shortfall = sin^2(eps/2).
  static double eps_1q_from_error(double error) {
    if (error < 0.0 || error >= 1.0) throw std::invalid_argument("error outside [0,1)");
    return 2.0 * std::asin(std::sqrt(error));
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"eps_1q", eps_1q},
                          {"eps_2q", eps_2q},
                          {"p_prep", p_prep},
                          {"p_dark_flip", p_dark_flip},
                          {"p_bright_flip", p_bright_flip},
                          {"t2_star", t2_star},
                          {"ghz_depol_p", ghz_depol_p},
                          {"flag_filter", flag_filter},
                          {"seed", seed}};
  }

  static NoiseConfig from_json(const nlohmann::json& j) {
    NoiseConfig c = none();
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k == "eps_1q") c.eps_1q = it.value().get<double>();
      else if (k == "eps_2q") c.eps_2q = it.value().get<double>();
      else if (k == "p_prep") c.p_prep = it.value().get<double>();
      else if (k == "p_dark_flip") c.p_dark_flip = it.value().get<double>();
      else if (k == "p_bright_flip") c.p_bright_flip = it.value().get<double>();
      else if (k == "t2_star") c.t2_star = it.value().get<double>();
      else if (k == "ghz_depol_p") c.ghz_depol_p = it.value().get<double>();
      else if (k == "flag_filter") c.flag_filter = it.value().get<bool>();
      else if (k == "seed") c.seed = it.value().get<uint64_t>();
      else throw std::invalid_argument("NoiseConfig: unknown field '" + k + "'");
    }
    c.validate();
    return c;
  }
};

/// Coherent overrotation: R(theta, phi) -> R(theta + eps_1q, phi) and
/// XX(chi) -> XX(chi + eps_2q), deterministically on every instance.
/// Injections, virtual RZ and non-gate ops pass through untouched.
inline GateOp perturb_gate(const GateOp& op, const NoiseConfig& cfg) {
  GateOp out = op;
  if (op.kind == OpKind::R) out.theta += cfg.eps_1q;
  else if (op.kind == OpKind::XX) out.chi += cfg.eps_2q;
  return out;
}

/// Gaussian phase width Delta(t) such that the single-qubit Ramsey contrast
/// E[cos delta] with delta ~ N(0, Delta^2) equals exp(-t/t2_star):
/// Delta(t) = sqrt(2 t / t2_star).
inline double calibrate_delta_z(double t_seconds, double t2_star_seconds) {
  if (t2_star_seconds <= 0.0) throw std::invalid_argument("calibrate_delta_z: t2_star must be > 0");
  if (t_seconds < 0.0) throw std::invalid_argument("calibrate_delta_z: negative time");
  return std::sqrt(2.0 * t_seconds / t2_star_seconds);
}

/// One collective RZ(delta) on every qubit in `mask` (a diagonal pass).
inline void apply_collective_rz(StateVector& state, uint32_t mask, double delta) {
  // Phase per basis state: exp(-i delta/2 * sum_q (1 - 2 b_q)) over masked qubits.
  int n_masked = std::popcount(mask);
  cplx table[17];
  for (int ones = 0; ones <= n_masked; ++ones) {
    table[ones] = std::polar(1.0, -0.5 * delta * (n_masked - 2 * ones));
  }
  for (size_t i = 0; i < state.dim(); ++i) {
    state.set_amplitude(i, state.amplitude(i) * table[std::popcount(uint32_t(i) & mask)]);
  }
}

/// Collective dephasing over a wait of t seconds: draws one angle
/// delta ~ N(0, Delta(t)^2) per call and applies RZ(delta) to every data
/// qubit, so each GHZ row acquires relative phase 3*delta.
inline void apply_collective_dephasing(StateVector& state, double t_seconds,
                                       const NoiseConfig& cfg, RngStream& rng) {
  if (cfg.t2_star <= 0.0 || t_seconds <= 0.0) return;
  double delta = rng.normal(0.0, calibrate_delta_z(t_seconds, cfg.t2_star));
  apply_collective_rz(state, kDataMask & ((1u << state.n_qubits()) - 1), delta);
}

/// Depolarizes each GHZ row independently: with probability p/2 a Z flip
/// lands on the row leader, realizing (1-p) rho + (p/2)(|+><+| + |-><-|)
/// per row on GHZ inputs.
inline void ghz_depolarize(StateVector& state, double p, RngStream& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("ghz_depolarize: p outside [0,1]");
  for (int leader : {1, 4, 7}) {
    if (rng.bernoulli(p / 2.0)) {
      state.apply_pauli(PauliString(state.n_qubits(), 0, 1u << (leader - 1)));
    }
  }
}

/// Independent readout bit flips: 1 -> 0 with p_bright_flip, 0 -> 1 with
/// p_dark_flip. One uniform draw per qubit keeps the stream layout fixed.
inline uint32_t sample_spam(uint32_t bits, uint32_t n_qubits, const NoiseConfig& cfg,
                            RngStream& rng) {
  for (uint32_t q = 0; q < n_qubits; ++q) {
    double u = rng.uniform01();
    bool one = (bits >> q) & 1u;
    if (u < (one ? cfg.p_bright_flip : cfg.p_dark_flip)) bits ^= 1u << q;
  }
  return bits;
}

}  // namespace bslab

#endif  // BSLAB_NOISE_HPP
