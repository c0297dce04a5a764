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

#ifndef BSLAB_DECODE_HPP
#define BSLAB_DECODE_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bslab/executor.hpp"

namespace bslab {

enum class Protocol { Raw, Correction, Detection };

inline const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Raw: return "raw";
    case Protocol::Correction: return "correction";
    default: return "detection";
  }
}

/// Raw parity and the two measured-basis stabilizer eigenvalues from nine
/// data bits. In the Z basis these are Z_L, S1, S2; in the X basis the same
/// bit arithmetic on X-basis bits yields X_L, S3, S4 (the readout rotation
/// and its relabeling put those checks on the identical supports).
struct ParityChecks {
  int raw = +1;
  int stab_a = +1;
  int stab_b = +1;
};

inline ParityChecks parity_and_stabs(uint32_t data_bits, Basis /*basis*/) {
  if (data_bits & ~kDataMask) throw std::invalid_argument("parity_and_stabs: expects 9 data bits");
  ParityChecks out;
  out.raw = (std::popcount(data_bits) & 1) ? -1 : +1;
  out.stab_a = (std::popcount(data_bits & 0x03Fu) & 1) ? -1 : +1;  // qubits 1..6
  out.stab_b = (std::popcount(data_bits & 0x1F8u) & 1) ? -1 : +1;  // qubits 4..9
  return out;
}

struct DecodeResult {
  bool discarded = false;
  int outcome = +1;
};

/// The error-handling logic table: Raw passes the parity through;
/// Correction flips it when either stabilizer reads -1; Detection discards
/// such shots instead.
inline DecodeResult decode(int raw, int stab_a, int stab_b, Protocol protocol) {
  bool violated = stab_a == -1 || stab_b == -1;
  switch (protocol) {
    case Protocol::Raw: return {false, raw};
    case Protocol::Correction: return {false, violated ? -raw : raw};
    default: return violated ? DecodeResult{true, 0} : DecodeResult{false, raw};
  }
}

/// Decodes one shot: applies the circuit's net relabeling to the data bits
/// and runs the logic table in the measured basis.
inline DecodeResult decode_shot(uint32_t bits, const Permutation& perm, Basis basis,
                                Protocol protocol) {
  uint32_t data = perm.apply_to_bits(bits) & kDataMask;
  ParityChecks pc = parity_and_stabs(data, basis);
  return decode(pc.raw, pc.stab_a, pc.stab_b, protocol);
}

/// 95% Wilson score interval for k successes in n trials.
inline std::pair<double, double> wilson_interval(size_t k, size_t n, double z = 1.959963985) {
  if (n == 0) throw std::invalid_argument("wilson_interval: n = 0");
  double p = double(k) / double(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / double(n);
  double center = (p + z2 / (2.0 * double(n))) / denom;
  double half = (z / denom) * std::sqrt(p * (1.0 - p) / double(n) + z2 / (4.0 * double(n) * double(n)));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct ProcessedStats {
  Protocol protocol = Protocol::Raw;
  size_t n_total = 0;
  size_t n_kept = 0;
  size_t n_error = 0;
  double error_rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;

  static std::string csv_header() { return "protocol,n_total,n_kept,n_error,rate,ci_lo,ci_hi"; }

  std::string csv_row() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.9g,%.9g,%.9g", to_string(protocol), n_total,
                  n_kept, n_error, error_rate, ci_lo, ci_hi);
    return buf;
  }
};

/// Error rate of decoded outcomes against the ideal parity, with the 95%
/// Wilson binomial interval. Detection may discard; an empty kept sample is
/// an explicit error.
inline ProcessedStats logical_error_rate(const ShotBatch& shots, int ideal, Protocol protocol) {
  ProcessedStats st;
  st.protocol = protocol;
  st.n_total = shots.size();
  for (size_t i = 0; i < shots.size(); ++i) {
    DecodeResult r = decode_shot(shots.bits[i], shots.perm, shots.basis, protocol);
    if (r.discarded) continue;
    ++st.n_kept;
    if (r.outcome != ideal) ++st.n_error;
  }
  if (st.n_kept == 0) throw std::runtime_error("logical_error_rate: no kept shots");
  st.error_rate = double(st.n_error) / double(st.n_kept);
  auto [lo, hi] = wilson_interval(st.n_error, st.n_kept);
  st.ci_lo = lo;
  st.ci_hi = hi;
  return st;
}

/// Mean decoded outcome (an estimate of <Z>_L or <X>_L) and the kept count.
inline std::pair<double, size_t> mean_outcome(const ShotBatch& shots, Protocol protocol) {
  long sum = 0;
  size_t kept = 0;
  for (size_t i = 0; i < shots.size(); ++i) {
    DecodeResult r = decode_shot(shots.bits[i], shots.perm, shots.basis, protocol);
    if (r.discarded) continue;
    ++kept;
    sum += r.outcome;
  }
  if (kept == 0) throw std::runtime_error("mean_outcome: no kept shots");
  return {double(sum) / double(kept), kept};
}

/// Magic-state fidelity against |H_x>: F = (1 + (<X> + <Z>)/sqrt(2)) / 2.
inline double magic_fidelity(double exp_x, double exp_z) {
  if (std::abs(exp_x) > 1.0 + 1e-12 || std::abs(exp_z) > 1.0 + 1e-12) {
    throw std::invalid_argument("magic_fidelity: expectation outside [-1,1]");
  }
  return 0.5 * (1.0 + (exp_x + exp_z) / std::sqrt(2.0));
}

/// Fidelity bounds against a magic-family target with Bloch vector
/// (sqrt(1/2 - y_t^2), y_t, 1/sqrt(2)), using the Bloch constraint
/// <X>^2 + <Y>^2 + <Z>^2 <= 1 to range the unmeasurable <Y> over
/// [-r, r], r = sqrt(1 - <X>^2 - <Z>^2). With target_y = 0 this reduces to
/// magic_fidelity when r = 0.
inline std::pair<double, double> fidelity_bound(double exp_x, double exp_z, double target_y) {
  double rho2 = exp_x * exp_x + exp_z * exp_z;
  if (rho2 > 1.0 + 1e-12) throw std::invalid_argument("fidelity_bound: infeasible expectations");
  if (std::abs(target_y) > 1.0 / std::sqrt(2.0) + 1e-12) {
    throw std::invalid_argument("fidelity_bound: target outside the magic family");
  }
  double r = std::sqrt(std::max(0.0, 1.0 - rho2));
  double xt = std::sqrt(std::max(0.0, 0.5 - target_y * target_y));
  double zt = 1.0 / std::sqrt(2.0);
  double base = 0.5 * (1.0 + exp_x * xt + exp_z * zt);
  double span = 0.5 * std::abs(target_y) * r;
  return {base - span, base + span};
}

struct StabErrorBudget {
  std::array<double, 4> eps;  // S1..S4
  bool in_range = true;
};

/// The per-ancilla stabilizer error model: eps_S1 = enc + 2X + Z,
/// eps_S2 = enc + 2X + 2Z, eps_S3 = enc + T2* + X, eps_S4 = enc + T2* + 2X.
inline StabErrorBudget stab_error_budget(double eps_enc, double eps_x, double eps_z,
                                         double eps_t2) {
  for (double e : {eps_enc, eps_x, eps_z, eps_t2}) {
    if (e < 0.0 || e > 1.0) throw std::invalid_argument("stab_error_budget: inputs in [0,1]");
  }
  StabErrorBudget out;
  out.eps = {eps_enc + 2 * eps_x + eps_z, eps_enc + 2 * eps_x + 2 * eps_z,
             eps_enc + eps_t2 + eps_x, eps_enc + eps_t2 + 2 * eps_x};
  for (double e : out.eps) {
    if (e < 0.0 || e > 1.0) out.in_range = false;
  }
  return out;
}

namespace detail {
inline double log_choose(size_t n, size_t k) {
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}
}  // namespace detail

/// Two-sided Fisher exact test for k1/n1 vs k2/n2: the total probability of
/// tables (at fixed margins) no more likely than the observed one.
inline double two_proportion_test(size_t k1, size_t n1, size_t k2, size_t n2) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("two_proportion_test: empty sample");
  if (k1 > n1 || k2 > n2) throw std::invalid_argument("two_proportion_test: k > n");
  size_t total_k = k1 + k2;
  size_t lo = total_k > n2 ? total_k - n2 : 0;
  size_t hi = std::min(total_k, n1);
  double log_denom = detail::log_choose(n1 + n2, total_k);
  auto log_p = [&](size_t k) {
    return detail::log_choose(n1, k) + detail::log_choose(n2, total_k - k) - log_denom;
  };
  double lp_obs = log_p(k1);
  double p = 0.0;
  for (size_t k = lo; k <= hi; ++k) {
    double lp = log_p(k);
    if (lp <= lp_obs + 1e-9) p += std::exp(lp);
  }
  return std::min(1.0, p);
}

}  // namespace bslab

#endif  // BSLAB_DECODE_HPP
