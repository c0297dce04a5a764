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

#ifndef BSLAB_PAULI_HPP
#define BSLAB_PAULI_HPP

#include <bit>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bslab {

/// An n-qubit Pauli operator stored as X/Z bit masks plus a +/-1 sign.
///
/// Bit i of the masks refers to qubit i (0-based). Human-facing labels are
/// 1-based to match the usual grid numbering, so `from_text("X1X2")` sets
/// bits 0 and 1. A qubit with both the X and Z bit set carries a Y factor.
///
/// The sign tracks only the +/-1 subgroup. Products of anticommuting Paulis
/// pick up factors of +/-i; those are folded away (the Hermitian
/// representative is returned) since every consumer in this codebase
/// (syndromes, group membership, logical action) is phase-insensitive.
class PauliString {
 public:
  PauliString() = default;
  PauliString(uint32_t n_qubits, uint32_t x_mask, uint32_t z_mask, int sign = +1)
      : n_(n_qubits), x_(x_mask), z_(z_mask), sign_(sign) {
    if (n_qubits > 32) throw std::invalid_argument("PauliString: at most 32 qubits");
    if (sign != +1 && sign != -1) throw std::invalid_argument("PauliString: sign must be +1 or -1");
    uint32_t valid = n_qubits == 32 ? ~0u : ((1u << n_qubits) - 1);
    if ((x_mask | z_mask) & ~valid) throw std::invalid_argument("PauliString: mask exceeds qubit count");
  }

  static PauliString identity(uint32_t n_qubits) { return PauliString(n_qubits, 0, 0); }

  /// Single Pauli factor on a 1-based qubit label.
  static PauliString single(uint32_t n_qubits, char axis, int label) {
    if (label < 1 || static_cast<uint32_t>(label) > n_qubits) {
      throw std::invalid_argument("PauliString: label out of range");
    }
    uint32_t bit = 1u << (label - 1);
    switch (axis) {
      case 'X': return PauliString(n_qubits, bit, 0);
      case 'Y': return PauliString(n_qubits, bit, bit);
      case 'Z': return PauliString(n_qubits, 0, bit);
      default: throw std::invalid_argument("PauliString: axis must be X, Y or Z");
    }
  }

  /// Parses conventional text like "X1X2X4", "-Z3" or "Y1Z2Z3X4X7".
  static PauliString from_text(uint32_t n_qubits, const std::string& text) {
    PauliString p = identity(n_qubits);
    size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      p.sign_ = text[i] == '-' ? -1 : +1;
      ++i;
    }
    while (i < text.size()) {
      char axis = text[i++];
      if (axis != 'X' && axis != 'Y' && axis != 'Z') {
        throw std::invalid_argument("PauliString: bad axis in '" + text + "'");
      }
      size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) throw std::invalid_argument("PauliString: missing label in '" + text + "'");
      int label = std::stoi(text.substr(start, i - start));
      PauliString f = single(n_qubits, axis, label);
      p.x_ ^= f.x_;
      p.z_ ^= f.z_;
    }
    return p;
  }

  uint32_t n_qubits() const { return n_; }
  uint32_t x_mask() const { return x_; }
  uint32_t z_mask() const { return z_; }
  int sign() const { return sign_; }
  uint32_t support() const { return x_ | z_; }
  int weight() const { return std::popcount(support()); }
  bool is_identity() const { return (x_ | z_) == 0; }

  PauliString with_sign(int s) const { return PauliString(n_, x_, z_, s); }

  /// Restriction to the first k qubits (drops the rest).
  PauliString truncated(uint32_t k) const {
    uint32_t m = k == 32 ? ~0u : ((1u << k) - 1);
    return PauliString(k, x_ & m, z_ & m, sign_);
  }

  /// Same operator embedded in a larger register.
  PauliString extended(uint32_t n_qubits) const {
    if (n_qubits < n_) throw std::invalid_argument("PauliString: cannot shrink via extend");
    return PauliString(n_qubits, x_, z_, sign_);
  }

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && sign_ == o.sign_;
  }
  bool operator!=(const PauliString& o) const { return !(*this == o); }

  /// Renders as e.g. "X1X2" or "-Y1Z2"; the identity renders as "I".
  std::string str() const {
    std::string out;
    if (sign_ < 0) out += '-';
    for (uint32_t q = 0; q < n_; ++q) {
      bool xb = (x_ >> q) & 1, zb = (z_ >> q) & 1;
      if (!xb && !zb) continue;
      out += xb ? (zb ? 'Y' : 'X') : 'Z';
      out += std::to_string(q + 1);
    }
    if (out.empty() || out == "-") out += 'I';
    return out;
  }

 private:
  uint32_t n_ = 0;
  uint32_t x_ = 0;
  uint32_t z_ = 0;
  int sign_ = +1;
};

/// True iff P and Q commute: the symplectic form popcount(Px & Qz) +
/// popcount(Pz & Qx) is even.
inline bool commutes(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) throw std::invalid_argument("commutes: size mismatch");
  int overlaps = std::popcount(p.x_mask() & q.z_mask()) + std::popcount(p.z_mask() & q.x_mask());
  return (overlaps & 1) == 0;
}

/// Group product with masks XORed and the sign tracked over the +/-1
/// subgroup. When P and Q anticommute the true product carries a factor of
/// +/-i; the Hermitian representative is returned (see class docs).
inline PauliString multiply(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) throw std::invalid_argument("multiply: size mismatch");
  uint32_t x = p.x_mask() ^ q.x_mask();
  uint32_t z = p.z_mask() ^ q.z_mask();
  // Phase: p * q = i^(yp + yq - y) * (-1)^|pz & qx| * X^x Z^z with
  // y* counting Y factors. Even exponents contribute a real sign.
  int k = std::popcount(p.x_mask() & p.z_mask()) + std::popcount(q.x_mask() & q.z_mask()) -
          std::popcount(x & z) + 2 * std::popcount(p.z_mask() & q.x_mask());
  k &= 3;
  int sign = p.sign() * q.sign();
  if (k & 2) sign = -sign;  // k in {1,3}: result is i*(sign*Hermitian); the i is dropped.
  return PauliString(p.n_qubits(), x, z, sign);
}

inline PauliString operator*(const PauliString& p, const PauliString& q) { return multiply(p, q); }

}  // namespace bslab

#endif  // BSLAB_PAULI_HPP
