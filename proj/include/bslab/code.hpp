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

#ifndef BSLAB_CODE_HPP
#define BSLAB_CODE_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bslab/gf2.hpp"
#include "bslab/pauli.hpp"

namespace bslab {

/// Action of a trivial-syndrome Pauli on the encoded qubit.
enum class LogicalAction { I, X, Y, Z };

inline char to_char(LogicalAction a) {
  switch (a) {
    case LogicalAction::I: return 'I';
    case LogicalAction::X: return 'X';
    case LogicalAction::Y: return 'Y';
    case LogicalAction::Z: return 'Z';
  }
  return '?';
}

/// Static tables for the nine-data-qubit Bacon-Shor code: the 3x3 grid,
/// the four weight-6 stabilizers, the twelve weight-2 gauge generators,
/// logical operators, and the group-membership queries built on them.
///
/// Data qubits are labeled 1..9 with qubit i at grid row ceil(i/3) and
/// column ((i-1) mod 3) + 1; internally label q maps to mask bit q-1.
/// Ancilla labels 10..13 hold the stabilizer outcomes in circuit form.
class BaconShorCode {
 public:
  static constexpr int kDataQubits = 9;
  static constexpr int kAncillas = 4;

  BaconShorCode() {
    stabilizers_ = {
        PauliString::from_text(9, "Z1Z2Z3Z4Z5Z6"),  // S1: grid rows 1,2
        PauliString::from_text(9, "Z4Z5Z6Z7Z8Z9"),  // S2: grid rows 2,3
        PauliString::from_text(9, "X1X2X4X5X7X8"),  // S3: grid columns 1,2
        PauliString::from_text(9, "X2X3X5X6X8X9"),  // S4: grid columns 2,3
    };
    x_gauges_ = {
        PauliString::from_text(9, "X1X2"), PauliString::from_text(9, "X4X5"),
        PauliString::from_text(9, "X7X8"), PauliString::from_text(9, "X2X3"),
        PauliString::from_text(9, "X5X6"), PauliString::from_text(9, "X8X9"),
    };
    z_gauges_ = {
        PauliString::from_text(9, "Z1Z4"), PauliString::from_text(9, "Z2Z5"),
        PauliString::from_text(9, "Z3Z6"), PauliString::from_text(9, "Z4Z7"),
        PauliString::from_text(9, "Z5Z8"), PauliString::from_text(9, "Z6Z9"),
    };
    logical_z_ = PauliString::from_text(9, "Z1Z2Z3Z4Z5Z6Z7Z8Z9");
    logical_x_ = PauliString::from_text(9, "X1X2X3X4X5X6X7X8X9");
    for (const PauliString& g : x_gauges_) gauge_span_.add(symplectic(g));
    for (const PauliString& g : z_gauges_) gauge_span_.add(symplectic(g));
  }

  static const BaconShorCode& instance() {
    static const BaconShorCode code;
    return code;
  }

  const std::array<PauliString, 4>& stabilizers() const { return stabilizers_; }
  const PauliString& stabilizer(int k) const { return stabilizers_.at(k); }
  const std::array<PauliString, 6>& x_gauges() const { return x_gauges_; }
  const std::array<PauliString, 6>& z_gauges() const { return z_gauges_; }
  const PauliString& logical_z() const { return logical_z_; }
  const PauliString& logical_x() const { return logical_x_; }
  const Gf2Span& gauge_span() const { return gauge_span_; }

  std::vector<PauliString> gauge_generators() const {
    std::vector<PauliString> out(x_gauges_.begin(), x_gauges_.end());
    out.insert(out.end(), z_gauges_.begin(), z_gauges_.end());
    return out;
  }

  /// Ancilla label measuring stabilizer k (0-based): S1->10, S2->11,
  /// S3->12, S4->13.
  static int ancilla_label(int k) {
    if (k < 0 || k > 3) throw std::out_of_range("ancilla_label: stabilizer index");
    return 10 + k;
  }

  static int grid_row(int label) { return (label - 1) / 3 + 1; }
  static int grid_col(int label) { return (label - 1) % 3 + 1; }
  static int label_at(int row, int col) { return (row - 1) * 3 + col; }

  /// Grid-transpose relabeling (2<->4, 3<->7, 6<->8), an involution.
  /// Entry q-1 holds the label whose physical value becomes logical q.
  static std::array<int, 9> transpose_labels() {
    std::array<int, 9> t{};
    for (int label = 1; label <= 9; ++label) {
      t[label - 1] = label_at(grid_col(label), grid_row(label));
    }
    return t;
  }

  /// The symplectic GF(2) vector (x bits | z bits << 9) of a 9-qubit Pauli.
  static uint64_t symplectic(const PauliString& p) {
    return uint64_t(p.x_mask()) | (uint64_t(p.z_mask()) << 9);
  }

  /// The four anticommutation bits of E against S1..S4. Bit k is 1 iff E
  /// anticommutes with stabilizer k+1.
  std::array<int, 4> syndrome(const PauliString& e) const {
    PauliString t = e.n_qubits() == 9 ? e : e.truncated(9);
    std::array<int, 4> s{};
    for (int k = 0; k < 4; ++k) s[k] = commutes(t, stabilizers_[k]) ? 0 : 1;
    return s;
  }

  bool syndrome_trivial(const PauliString& e) const {
    auto s = syndrome(e);
    return s[0] == 0 && s[1] == 0 && s[2] == 0 && s[3] == 0;
  }

  /// Membership in the gauge-stabilizer group, up to sign. Stabilizers are
  /// products of gauge generators, so the twelve-generator span covers them.
  bool in_gauge_stabilizer_group(const PauliString& p) const {
    PauliString t = p.n_qubits() == 9 ? p : p.truncated(9);
    return gauge_span_.contains(symplectic(t));
  }

  /// Classifies a trivial-syndrome Pauli by its action on the logical qubit.
  /// Throws if the syndrome is nontrivial (decode first).
  LogicalAction logical_action(const PauliString& p) const {
    PauliString t = p.n_qubits() == 9 ? p : p.truncated(9);
    if (!syndrome_trivial(t)) {
      throw std::invalid_argument("logical_action: nontrivial syndrome for " + t.str());
    }
    bool anti_z = !commutes(t, logical_z_);
    bool anti_x = !commutes(t, logical_x_);
    if (anti_z && anti_x) return LogicalAction::Y;
    if (anti_z) return LogicalAction::X;
    if (anti_x) return LogicalAction::Z;
    return LogicalAction::I;
  }

 private:
  std::array<PauliString, 4> stabilizers_{};
  std::array<PauliString, 6> x_gauges_{};
  std::array<PauliString, 6> z_gauges_{};
  PauliString logical_z_{};
  PauliString logical_x_{};
  Gf2Span gauge_span_;
};

}  // namespace bslab

#endif  // BSLAB_CODE_HPP
