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
//
// Test-only oracles, independent of the library's gate kernels: dense
// matrix construction via Kronecker products, direct codeword builders,
// and qubit relabeling.

#ifndef BSLAB_TESTS_ORACLES_HPP
#define BSLAB_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "bslab/pauli.hpp"
#include "bslab/statevector.hpp"

namespace oracles {

using bslab::cplx;
using bslab::PauliString;
using bslab::StateVector;

// Row-major square matrix.
struct Mat {
  size_t d = 0;
  std::vector<cplx> m;
  Mat() = default;
  explicit Mat(size_t dim) : d(dim), m(dim * dim, cplx(0, 0)) {}
  cplx& at(size_t r, size_t c) { return m[r * d + c]; }
  cplx at(size_t r, size_t c) const { return m[r * d + c]; }
  static Mat eye(size_t dim) {
    Mat out(dim);
    for (size_t i = 0; i < dim; ++i) out.at(i, i) = 1;
    return out;
  }
};

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.d * b.d);
  for (size_t i = 0; i < a.d; ++i)
    for (size_t j = 0; j < a.d; ++j)
      for (size_t k = 0; k < b.d; ++k)
        for (size_t l = 0; l < b.d; ++l)
          out.at(i * b.d + k, j * b.d + l) = a.at(i, j) * b.at(k, l);
  return out;
}

inline Mat mat2(cplx a, cplx b, cplx c, cplx d) {
  Mat out(2);
  out.at(0, 0) = a; out.at(0, 1) = b; out.at(1, 0) = c; out.at(1, 1) = d;
  return out;
}

inline Mat pauli2(char axis) {
  switch (axis) {
    case 'I': return mat2(1, 0, 0, 1);
    case 'X': return mat2(0, 1, 1, 0);
    case 'Y': return mat2(0, cplx(0, -1), cplx(0, 1), 0);
    default:  return mat2(1, 0, 0, -1);
  }
}

inline Mat r_matrix(double theta, double phi) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return mat2(c, cplx(0, -1) * std::polar(s, -phi), cplx(0, -1) * std::polar(s, phi), c);
}

inline Mat rz_matrix(double theta) {
  return mat2(std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2));
}

// Embeds a single-qubit matrix on qubit q of an n-qubit register
// (little-endian: qubit 0 is the least significant index bit).
inline Mat embed_single(const Mat& g, uint32_t q, uint32_t n) {
  Mat out = Mat::eye(1);
  for (int k = int(n) - 1; k >= 0; --k) {
    out = kron(out, uint32_t(k) == q ? g : Mat::eye(2));
  }
  return out;
}

inline Mat dense_pauli(const PauliString& p) {
  Mat out = Mat::eye(1);
  for (int k = int(p.n_qubits()) - 1; k >= 0; --k) {
    bool x = (p.x_mask() >> k) & 1, z = (p.z_mask() >> k) & 1;
    char axis = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    out = kron(out, pauli2(axis));
  }
  if (p.sign() < 0)
    for (auto& v : out.m) v = -v;
  return out;
}

// exp(-i (theta/2) P) = cos(theta/2) I - i sin(theta/2) P for P^2 = I.
inline Mat dense_pauli_exp(const PauliString& p, double theta) {
  Mat out = dense_pauli(p);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  for (size_t i = 0; i < out.d; ++i)
    for (size_t j = 0; j < out.d; ++j)
      out.at(i, j) = (i == j ? c : cplx(0)) + cplx(0, -s) * out.at(i, j);
  return out;
}

// exp(-i chi X(x)X) on qubits (q1, q2).
inline Mat dense_xx(uint32_t q1, uint32_t q2, double chi, uint32_t n) {
  PauliString p(n, (uint32_t(1) << q1) | (uint32_t(1) << q2), 0);
  return dense_pauli_exp(p, 2 * chi);
}

inline StateVector apply_dense(const Mat& g, const StateVector& psi) {
  StateVector out = psi;
  for (size_t i = 0; i < g.d; ++i) {
    cplx acc = 0;
    for (size_t j = 0; j < g.d; ++j) acc += g.at(i, j) * psi.amplitude(j);
    out.set_amplitude(i, acc);
  }
  return out;
}

// ---- Direct codeword construction (independent of any circuit) ----

// Nine-qubit product over the grid rows (labels (1,2,3), (4,5,6), (7,8,9)) of
// (|000> + sign|111>)/sqrt(2).
inline StateVector ghz_rows(int sign) {
  StateVector s(9);
  s.set_amplitude(0, 0.0);
  const double w = 1.0 / (2.0 * std::sqrt(2.0));
  for (uint32_t r1 : {0u, 7u})
    for (uint32_t r2 : {0u, 7u})
      for (uint32_t r3 : {0u, 7u}) {
        int flipped_rows = (r1 ? 1 : 0) + (r2 ? 1 : 0) + (r3 ? 1 : 0);
        double a = w * ((sign < 0 && (flipped_rows & 1)) ? -1.0 : 1.0);
        s.set_amplitude(r1 | (r2 << 3) | (r3 << 6), a);
      }
  return s;
}

// Nine-qubit product over the grid rows of (|+++> + sign|--->)/sqrt(2):
// uniform amplitude 1/2 per row over strings of even (sign +1) or odd
// (sign -1) parity, i.e. the Z-basis logical codewords.
inline StateVector plus_rows(int sign) {
  StateVector s(9);
  s.set_amplitude(0, 0.0);
  for (uint32_t b = 0; b < 512; ++b) {
    double amp = 1.0;
    for (int row = 0; row < 3; ++row) {
      int pc = std::popcount((b >> (3 * row)) & 7u);
      amp *= (1.0 + sign * ((pc & 1) ? -1.0 : 1.0)) / 4.0;
    }
    s.set_amplitude(b, amp);
  }
  return s;
}

// Relabels qubits: bit i of the result reads bit (labels[i]-1) of the input,
// where labels is a 1-based permutation of 1..9. Qubits past 9 stay put.
inline StateVector relabel(const StateVector& psi, const std::array<int, 9>& labels) {
  StateVector res(psi.n_qubits());
  for (size_t idx = 0; idx < psi.dim(); ++idx) {
    size_t dst = 0;
    for (uint32_t i = 0; i < psi.n_qubits(); ++i) {
      uint32_t from = i < 9 ? uint32_t(labels[i] - 1) : i;
      if ((idx >> from) & 1) dst |= size_t(1) << i;
    }
    res.set_amplitude(dst, psi.amplitude(idx));
  }
  return res;
}

}  // namespace oracles

#endif  // BSLAB_TESTS_ORACLES_HPP
