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

#ifndef BSLAB_CIRCUIT_HPP
#define BSLAB_CIRCUIT_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bslab/code.hpp"
#include "bslab/pauli.hpp"

namespace bslab {

enum class OpKind { PrepZ, R, RZ, XX, PauliExp, InjectPauli, MeasureAll };
enum class Basis { Z, X };
enum class QubitRole { Data, Ancilla, Flag, Idle };

inline const char* to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

/// One native operation. Qubit fields hold 1-based labels (data 1..9,
/// ancillas 10..13). InjectPauli is an error marker, not a physical gate:
/// the noise layer never perturbs it and the auditor treats it as part of
/// the circuit under test rather than a fault location.
struct GateOp {
  OpKind kind = OpKind::R;
  int q1 = 0;
  int q2 = 0;
  double theta = 0.0;
  double phi = 0.0;
  double chi = 0.0;
  int prep_bit = 0;
  PauliString pauli;      // PauliExp generator
  char axis = 'Z';        // InjectPauli axis
  int inject_at = -1;     // interaction index annotation for injections
  Basis basis = Basis::Z; // MeasureAll basis tag
  double cost_us = 0.0;   // wall-clock duration

  bool is_physical_gate() const {
    return kind == OpKind::R || kind == OpKind::RZ || kind == OpKind::XX ||
           kind == OpKind::PauliExp;
  }
};

/// Relabeling of the nine data-qubit labels, applied in post-processing
/// only (never as physical gates). Entry i-1 holds the physical label whose
/// measured value belongs to logical qubit i.
struct Permutation {
  std::array<int, 9> map{1, 2, 3, 4, 5, 6, 7, 8, 9};

  static Permutation identity() { return Permutation{}; }

  static Permutation transpose() {
    Permutation p;
    auto t = BaconShorCode::transpose_labels();
    for (int i = 0; i < 9; ++i) p.map[i] = t[i];
    return p;
  }

  bool is_identity() const {
    for (int i = 0; i < 9; ++i)
      if (map[i] != i + 1) return false;
    return true;
  }

  /// Composition: the relabeling of `next` applied on top of this one.
  Permutation then(const Permutation& next) const {
    Permutation out;
    for (int i = 0; i < 9; ++i) out.map[i] = map[next.map[i] - 1];
    return out;
  }

  /// Reorders measured bits so bit i-1 of the result reads physical bit
  /// map[i-1]-1. Bits beyond the data block are left in place.
  uint32_t apply_to_bits(uint32_t bits) const {
    uint32_t out = bits & ~0x1FFu;
    for (int i = 0; i < 9; ++i) {
      if ((bits >> (map[i] - 1)) & 1u) out |= 1u << i;
    }
    return out;
  }
};

/// Ordered native-gate program over a fixed register, with per-qubit role
/// labels and the net post-processing relabeling accumulated from
/// transversal logical gates. Execution is strictly sequential; MeasureAll
/// appears at most once and only as the final op.
struct Circuit {
  uint32_t n_qubits = 13;
  std::string name;
  std::vector<GateOp> ops;
  std::vector<QubitRole> roles;
  Permutation net_perm;

  explicit Circuit(uint32_t n = 13, std::string label = "")
      : n_qubits(n), name(std::move(label)), roles(n, QubitRole::Idle) {
    for (uint32_t q = 0; q < n && q < 9; ++q) roles[q] = QubitRole::Data;
  }

  bool has_measure() const {
    return !ops.empty() && ops.back().kind == OpKind::MeasureAll;
  }

  Basis measure_basis() const {
    if (!has_measure()) throw std::logic_error("circuit has no MeasureAll");
    return ops.back().basis;
  }

  void check_open() const {
    if (has_measure()) throw std::logic_error("circuit already measured");
  }

  void check_label(int q) const {
    if (q < 1 || uint32_t(q) > n_qubits) throw std::invalid_argument("qubit label out of range");
  }

  void prep_z(int q, int bit) {
    check_open();
    check_label(q);
    GateOp op;
    op.kind = OpKind::PrepZ;
    op.q1 = q;
    op.prep_bit = bit;
    ops.push_back(op);
  }

  void r(int q, double theta, double phi, double cost_us) {
    check_open();
    check_label(q);
    GateOp op;
    op.kind = OpKind::R;
    op.q1 = q;
    op.theta = theta;
    op.phi = phi;
    op.cost_us = cost_us;
    ops.push_back(op);
  }

  void rz(int q, double theta) {
    check_open();
    check_label(q);
    GateOp op;
    op.kind = OpKind::RZ;
    op.q1 = q;
    op.theta = theta;
    ops.push_back(op);  // virtual gate: zero duration
  }

  void xx(int q1, int q2, double chi, double cost_us) {
    check_open();
    check_label(q1);
    check_label(q2);
    if (q1 == q2) throw std::invalid_argument("xx: identical qubits");
    GateOp op;
    op.kind = OpKind::XX;
    op.q1 = q1;
    op.q2 = q2;
    op.chi = chi;
    op.cost_us = cost_us;
    ops.push_back(op);
  }

  void pauli_exp(const PauliString& p, double theta) {
    check_open();
    if (p.n_qubits() != n_qubits) throw std::invalid_argument("pauli_exp: size mismatch");
    if (p.is_identity()) throw std::invalid_argument("pauli_exp: identity generator");
    GateOp op;
    op.kind = OpKind::PauliExp;
    op.pauli = p;
    op.theta = theta;
    ops.push_back(op);
  }

  void inject_pauli(int q, char axis, double theta, int at = -1) {
    check_open();
    check_label(q);
    if (axis != 'X' && axis != 'Y' && axis != 'Z') {
      throw std::invalid_argument("inject_pauli: axis must be X, Y or Z");
    }
    GateOp op;
    op.kind = OpKind::InjectPauli;
    op.q1 = q;
    op.axis = axis;
    op.theta = theta;
    op.inject_at = at;
    ops.push_back(op);
  }

  void measure_all(Basis basis) {
    check_open();
    GateOp op;
    op.kind = OpKind::MeasureAll;
    op.basis = basis;
    ops.push_back(op);
  }

  void append(const Circuit& other) {
    check_open();
    if (other.n_qubits != n_qubits) throw std::invalid_argument("append: register size mismatch");
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
    net_perm = net_perm.then(other.net_perm);
    for (uint32_t q = 0; q < n_qubits; ++q) {
      if (other.roles[q] != QubitRole::Idle) roles[q] = other.roles[q];
    }
  }

  /// 1 + highest label touched by any gate/prep op. Qubits past this point
  /// never leave |0> and can be synthesized at readout.
  uint32_t active_qubits() const {
    int hi = 0;
    for (const auto& op : ops) {
      if (op.kind == OpKind::MeasureAll) continue;
      if (op.kind == OpKind::PauliExp) {
        uint32_t sup = op.pauli.support();
        for (int q = 31; q >= 0; --q) {
          if ((sup >> q) & 1) { hi = std::max(hi, q + 1); break; }
        }
        continue;
      }
      hi = std::max(hi, std::max(op.q1, op.q2));
    }
    return uint32_t(std::max(hi, 1));
  }

  int two_qubit_gate_count() const {
    int n = 0;
    for (const auto& op : ops) n += op.kind == OpKind::XX ? 1 : 0;
    return n;
  }

  double total_duration_us() const {
    double t = 0;
    for (const auto& op : ops) t += op.cost_us;
    return t;
  }

  std::vector<int> flag_labels() const {
    std::vector<int> out;
    for (uint32_t q = 0; q < n_qubits; ++q)
      if (roles[q] == QubitRole::Flag) out.push_back(int(q) + 1);
    return out;
  }

  std::string to_text() const;
  static Circuit from_text(const std::string& text);
};

namespace detail {
inline std::string fmt_angle(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace detail

inline std::string Circuit::to_text() const {
  std::ostringstream out;
  out << "CIRCUIT n=" << n_qubits;
  if (!name.empty()) out << " name=" << name;
  out << "\n";
  for (auto role : {QubitRole::Ancilla, QubitRole::Flag}) {
    std::string line;
    for (uint32_t q = 0; q < n_qubits; ++q) {
      if (roles[q] == role) line += " " + std::to_string(q + 1);
    }
    if (!line.empty()) {
      out << (role == QubitRole::Ancilla ? "ROLE ancilla" : "ROLE flag") << line << "\n";
    }
  }
  if (!net_perm.is_identity()) {
    out << "PERM";
    for (int v : net_perm.map) out << " " << v;
    out << "\n";
  }
  for (const auto& op : ops) {
    switch (op.kind) {
      case OpKind::PrepZ:
        out << "PREPZ q=" << op.q1 << " bit=" << op.prep_bit << "\n";
        break;
      case OpKind::R:
        out << "R q=" << op.q1 << " theta=" << detail::fmt_angle(op.theta)
            << " phi=" << detail::fmt_angle(op.phi) << "\n";
        break;
      case OpKind::RZ:
        out << "RZ q=" << op.q1 << " theta=" << detail::fmt_angle(op.theta) << "\n";
        break;
      case OpKind::XX:
        out << "XX q1=" << op.q1 << " q2=" << op.q2 << " chi=" << detail::fmt_angle(op.chi)
            << "\n";
        break;
      case OpKind::PauliExp:
        out << "PAULIEXP p=" << op.pauli.str() << " theta=" << detail::fmt_angle(op.theta)
            << "\n";
        break;
      case OpKind::InjectPauli:
        out << "INJECT q=" << op.q1 << " axis=" << op.axis
            << " theta=" << detail::fmt_angle(op.theta) << " at=" << op.inject_at << "\n";
        break;
      case OpKind::MeasureAll:
        out << "MEASURE basis=" << to_string(op.basis) << "\n";
        break;
    }
  }
  return out.str();
}

namespace detail {
inline double parse_field(const std::string& tok, const char* key) {
  std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("circuit parse: expected " + prefix + ", got " + tok);
  }
  return std::stod(tok.substr(prefix.size()));
}
}  // namespace detail

inline Circuit Circuit::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Circuit c(13);
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (head == "CIRCUIT") {
      c = Circuit(uint32_t(detail::parse_field(toks.at(0), "n")));
      if (toks.size() > 1 && toks[1].rfind("name=", 0) == 0) c.name = toks[1].substr(5);
      have_header = true;
    } else if (head == "ROLE") {
      QubitRole role = toks.at(0) == "ancilla" ? QubitRole::Ancilla : QubitRole::Flag;
      for (size_t i = 1; i < toks.size(); ++i) c.roles.at(std::stoi(toks[i]) - 1) = role;
    } else if (head == "PERM") {
      for (int i = 0; i < 9; ++i) c.net_perm.map[i] = std::stoi(toks.at(i));
    } else if (head == "PREPZ") {
      c.prep_z(int(detail::parse_field(toks.at(0), "q")), int(detail::parse_field(toks.at(1), "bit")));
    } else if (head == "R") {
      c.r(int(detail::parse_field(toks.at(0), "q")), detail::parse_field(toks.at(1), "theta"),
          detail::parse_field(toks.at(2), "phi"), 10.0);
    } else if (head == "RZ") {
      c.rz(int(detail::parse_field(toks.at(0), "q")), detail::parse_field(toks.at(1), "theta"));
    } else if (head == "XX") {
      c.xx(int(detail::parse_field(toks.at(0), "q1")), int(detail::parse_field(toks.at(1), "q2")),
           detail::parse_field(toks.at(2), "chi"), 225.0);
    } else if (head == "PAULIEXP") {
      std::string p = toks.at(0);
      if (p.rfind("p=", 0) != 0) throw std::invalid_argument("circuit parse: expected p=");
      c.pauli_exp(PauliString::from_text(c.n_qubits, p.substr(2)),
                  detail::parse_field(toks.at(1), "theta"));
    } else if (head == "INJECT") {
      std::string ax = toks.at(1);
      if (ax.rfind("axis=", 0) != 0) throw std::invalid_argument("circuit parse: expected axis=");
      c.inject_pauli(int(detail::parse_field(toks.at(0), "q")), ax.at(5),
                     detail::parse_field(toks.at(2), "theta"),
                     int(detail::parse_field(toks.at(3), "at")));
    } else if (head == "MEASURE") {
      c.measure_all(toks.at(0) == "basis=X" ? Basis::X : Basis::Z);
    } else {
      throw std::invalid_argument("circuit parse: unknown op " + head);
    }
  }
  if (!have_header) throw std::invalid_argument("circuit parse: missing CIRCUIT header");
  return c;
}

}  // namespace bslab

#endif  // BSLAB_CIRCUIT_HPP
