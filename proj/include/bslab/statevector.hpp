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

#ifndef BSLAB_STATEVECTOR_HPP
#define BSLAB_STATEVECTOR_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "bslab/pauli.hpp"
#include "bslab/rng.hpp"

namespace bslab {

using cplx = std::complex<double>;

/// Dense state vector over up to 16 qubits, little-endian qubit ordering
/// (qubit 0 is the least significant index bit). All gates are exactly
/// unitary rotations; norm drift beyond 1e-10 is an engine defect, never
/// silently renormalized.
class StateVector {
 public:
  explicit StateVector(uint32_t n_qubits) : n_(n_qubits) {
    if (n_qubits == 0 || n_qubits > 16) {
      throw std::invalid_argument("StateVector: qubit count must be in 1..16");
    }
    amps_.assign(size_t(1) << n_, cplx(0.0, 0.0));
    amps_[0] = 1.0;
  }

  static StateVector basis_state(uint32_t n_qubits, uint32_t bits) {
    StateVector s(n_qubits);
    s.amps_[0] = 0.0;
    s.amps_[bits] = 1.0;
    return s;
  }

  uint32_t n_qubits() const { return n_; }
  size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx amplitude(size_t i) const { return amps_[i]; }
  void set_amplitude(size_t i, cplx v) { amps_[i] = v; }

  /// R(theta, phi): rotation by theta about the axis cos(phi) X + sin(phi) Y,
  /// matrix [[cos t/2, -i e^{-i phi} sin t/2], [-i e^{i phi} sin t/2, cos t/2]].
  void apply_r(uint32_t q, double theta, double phi) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    cplx m01 = cplx(0, -1) * std::polar(s, -phi);
    cplx m10 = cplx(0, -1) * std::polar(s, phi);
    apply_single(q, c, m01, m10, c);
  }

  /// Virtual RZ as an explicit diagonal: diag(e^{-i t/2}, e^{+i t/2}).
  void apply_rz(uint32_t q, double theta) {
    cplx p0 = std::polar(1.0, -theta / 2), p1 = std::polar(1.0, theta / 2);
    uint64_t bit = uint64_t(1) << q;
    for (size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? p1 : p0;
  }

  /// Ising interaction exp(-i chi X(x)X): chi = pi/4 is maximally entangling.
  void apply_xx(uint32_t q1, uint32_t q2, double chi) {
    if (q1 == q2) throw std::invalid_argument("apply_xx: identical qubits");
    check_qubit(q1);
    check_qubit(q2);
    uint64_t m = (uint64_t(1) << q1) | (uint64_t(1) << q2);
    double c = std::cos(chi), s = std::sin(chi);
    cplx is(0, -s);
    for (size_t i = 0; i < amps_.size(); ++i) {
      size_t j = i ^ m;
      if (j < i) continue;
      cplx a = amps_[i], b = amps_[j];
      amps_[i] = c * a + is * b;
      amps_[j] = c * b + is * a;
    }
  }

  /// exp(-i (theta/2) P) for an arbitrary Pauli generator, acting directly
  /// on amplitude pairs. The identity generator is rejected as degenerate.
  void apply_pauli_exp(const PauliString& p, double theta) {
    if (p.n_qubits() != n_) throw std::invalid_argument("apply_pauli_exp: size mismatch");
    if (p.is_identity()) throw std::invalid_argument("apply_pauli_exp: identity generator");
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    uint64_t x = p.x_mask(), z = p.z_mask();
    cplx phase_y = ipow(std::popcount(x & z));
    double sign = p.sign();
    if (x == 0) {
      cplx d0 = cplx(c, -s), d1 = cplx(c, s);  // e^{-i theta/2 * lambda}
      for (size_t i = 0; i < amps_.size(); ++i) {
        double lam = sign * parity_sign(i & z);
        amps_[i] *= (lam > 0) ? d0 : d1;
      }
      return;
    }
    for (size_t i = 0; i < amps_.size(); ++i) {
      size_t j = i ^ x;
      if (j < i) continue;
      // P|b> = sign * i^y * (-1)^{popcount(b & z)} |b ^ x>
      cplx si = sign * phase_y * parity_sign(i & z);
      cplx sj = sign * phase_y * parity_sign(j & z);
      cplx a = amps_[i], b = amps_[j];
      amps_[i] = c * a + cplx(0, -s) * sj * b;
      amps_[j] = c * b + cplx(0, -s) * si * a;
    }
  }

  /// Applies a Pauli operator exactly (as a gate, with its i^y phases).
  void apply_pauli(const PauliString& p) {
    if (p.n_qubits() != n_) throw std::invalid_argument("apply_pauli: size mismatch");
    uint64_t x = p.x_mask(), z = p.z_mask();
    cplx phase = double(p.sign()) * ipow(std::popcount(x & z));
    std::vector<cplx> out(amps_.size());
    for (size_t i = 0; i < amps_.size(); ++i) {
      out[i ^ x] = phase * parity_sign(i & z) * amps_[i];
    }
    amps_.swap(out);
  }

  void apply_x(uint32_t q) { apply_pauli(PauliString(n_, uint32_t(1) << q, 0)); }

  /// Exact <psi|P|psi> (real for the Hermitian representative).
  double expectation(const PauliString& p) const {
    if (p.n_qubits() != n_) throw std::invalid_argument("expectation: size mismatch");
    uint64_t x = p.x_mask(), z = p.z_mask();
    cplx phase = double(p.sign()) * ipow(std::popcount(x & z));
    cplx acc = 0.0;
    for (size_t b = 0; b < amps_.size(); ++b) {
      // <b|P|b^x> = sign * i^y * (-1)^{popcount((b^x) & z)}
      acc += std::conj(amps_[b]) * phase * parity_sign((b ^ x) & z) * amps_[b ^ x];
    }
    return acc.real();
  }

  double norm_sq() const {
    double t = 0;
    for (const auto& a : amps_) t += std::norm(a);
    return t;
  }

  void check_norm(double tol = 1e-10) const {
    if (std::abs(norm_sq() - 1.0) > tol) {
      throw std::runtime_error("StateVector: norm drift " + std::to_string(norm_sq() - 1.0));
    }
  }

  /// i.i.d. samples from |amplitude|^2; deterministic given the stream.
  std::vector<uint32_t> sample_measure_all(size_t shots, RngStream& rng) const {
    std::vector<double> cdf(amps_.size());
    double acc = 0;
    for (size_t i = 0; i < amps_.size(); ++i) cdf[i] = (acc += std::norm(amps_[i]));
    std::vector<uint32_t> out(shots);
    for (size_t s = 0; s < shots; ++s) {
      double u = rng.uniform01() * acc;
      size_t lo = 0, hi = cdf.size() - 1;
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cdf[mid] <= u) lo = mid + 1; else hi = mid;
      }
      out[s] = static_cast<uint32_t>(lo);
    }
    return out;
  }

  std::vector<uint32_t> sample_measure_all(size_t shots, uint64_t seed) const {
    RngStream rng(seed);
    return sample_measure_all(shots, rng);
  }

  /// Single sample with early-exit scan (for per-shot evolved states).
  uint32_t sample_one(RngStream& rng) const {
    double u = rng.uniform01();
    double acc = 0;
    for (size_t i = 0; i < amps_.size(); ++i) {
      acc += std::norm(amps_[i]);
      if (u < acc) return static_cast<uint32_t>(i);
    }
    return static_cast<uint32_t>(amps_.size() - 1);
  }

  /// Binary dump: index order 0..2^n-1, interleaved real/imaginary doubles.
  void save_amplitudes(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("save_amplitudes: cannot open " + path);
    for (const auto& a : amps_) {
      double re = a.real(), im = a.imag();
      std::fwrite(&re, sizeof re, 1, f);
      std::fwrite(&im, sizeof im, 1, f);
    }
    std::fclose(f);
  }

  static StateVector load_amplitudes(uint32_t n_qubits, const std::string& path) {
    StateVector s(n_qubits);
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("load_amplitudes: cannot open " + path);
    for (auto& a : s.amps_) {
      double re = 0, im = 0;
      if (std::fread(&re, sizeof re, 1, f) != 1 || std::fread(&im, sizeof im, 1, f) != 1) {
        std::fclose(f);
        throw std::runtime_error("load_amplitudes: truncated file " + path);
      }
      a = cplx(re, im);
    }
    std::fclose(f);
    return s;
  }

 private:
  void check_qubit(uint32_t q) const {
    if (q >= n_) throw std::invalid_argument("StateVector: qubit index out of range");
  }

  static double parity_sign(uint64_t bits) { return std::popcount(bits) & 1 ? -1.0 : 1.0; }

  static cplx ipow(int k) {
    switch (k & 3) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }

  void apply_single(uint32_t q, cplx m00, cplx m01, cplx m10, cplx m11) {
    check_qubit(q);
    uint64_t bit = uint64_t(1) << q;
    for (size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      size_t j = i | bit;
      cplx a = amps_[i], b = amps_[j];
      amps_[i] = m00 * a + m01 * b;
      amps_[j] = m10 * a + m11 * b;
    }
  }

  uint32_t n_;
  std::vector<cplx> amps_;
};

/// |<a|b>|^2, global-phase insensitive.
inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("fidelity: size mismatch");
  cplx acc = 0.0;
  for (size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amplitude(i)) * b.amplitude(i);
  return std::norm(acc);
}

}  // namespace bslab

#endif  // BSLAB_STATEVECTOR_HPP
