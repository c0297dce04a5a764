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

#ifndef BSLAB_FTAUDIT_HPP
#define BSLAB_FTAUDIT_HPP

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bslab/circuit.hpp"
#include "bslab/code.hpp"
#include "bslab/decode.hpp"

namespace bslab {

enum class FaultClass { Benign, Correctable, LogicalFault };

inline const char* to_string(FaultClass c) {
  switch (c) {
    case FaultClass::Benign: return "benign";
    case FaultClass::Correctable: return "correctable";
    default: return "logical_fault";
  }
}

enum class FaultKind { GateFault, PrepFlip, MeasureFlip };

inline const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::GateFault: return "gate";
    case FaultKind::PrepFlip: return "prep";
    default: return "measure";
  }
}

/// One enumerated fault: a Pauli inserted immediately after op `op_index`.
struct FaultLocation {
  size_t op_index = 0;
  FaultKind kind = FaultKind::GateFault;
  PauliString fault;
};

namespace clifford {

inline bool is_multiple_of(double value, double unit, long* k_out) {
  double k = value / unit;
  double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9) return false;
  *k_out = long(rounded);
  return true;
}

/// Rotation axis of R(theta, phi) at phi = m*pi/2: +/-X or +/-Y.
inline PauliString r_axis(uint32_t n, int q, double phi) {
  long m = 0;
  if (!is_multiple_of(phi, kPi / 2, &m)) {
    throw std::invalid_argument("audit: non-Clifford R axis");
  }
  m = ((m % 4) + 4) % 4;
  char ax = (m % 2 == 0) ? 'X' : 'Y';
  int sign = (m == 2 || m == 3) ? -1 : +1;
  return PauliString::single(n, ax, q).with_sign(sign);
}

/// Conjugates P by exp(-i(theta/2) A) for theta = k*pi/2, A a Pauli:
/// k even: P -> +/-P; k odd and {P,A} = 0: P -> -/+ i P A.
inline PauliString rotate(const PauliString& p, const PauliString& axis, long k) {
  k = ((k % 4) + 4) % 4;
  if (k == 0 || commutes(p, axis)) {
    if (k == 2 && !commutes(p, axis)) return p.with_sign(-p.sign());
    return p;
  }
  if (k == 2) return p.with_sign(-p.sign());
  // Anticommuting, quarter turn: conj = P (cos theta + i sin theta A).
  // multiply() returns H with true product i*(s*H) for anticommuting pairs,
  // so conj = i*i*(s*H) = -s*H for k=1 and +s*H for k=3.
  PauliString h = multiply(p, axis);
  return k == 1 ? h.with_sign(-h.sign()) : h;
}

/// G P G^dag for a single op at Clifford angles. Throws on non-Clifford
/// parameters.
inline PauliString conjugate_through(const GateOp& op, const PauliString& p) {
  uint32_t n = p.n_qubits();
  switch (op.kind) {
    case OpKind::PrepZ: {
      // Reset erases incoming components on the prepared qubit.
      uint32_t bit = 1u << (op.q1 - 1);
      return PauliString(n, p.x_mask() & ~bit, p.z_mask() & ~bit, p.sign());
    }
    case OpKind::R: {
      long k = 0;
      if (!is_multiple_of(op.theta, kPi / 2, &k)) {
        throw std::invalid_argument("audit: non-Clifford R angle");
      }
      return rotate(p, r_axis(n, op.q1, op.phi), k);
    }
    case OpKind::RZ: {
      long k = 0;
      if (!is_multiple_of(op.theta, kPi / 2, &k)) {
        throw std::invalid_argument("audit: non-Clifford RZ angle");
      }
      return rotate(p, PauliString::single(n, 'Z', op.q1), k);
    }
    case OpKind::XX: {
      long k = 0;
      if (!is_multiple_of(op.chi, kPi / 4, &k)) {
        throw std::invalid_argument("audit: non-Clifford XX angle");
      }
      uint32_t m = (1u << (op.q1 - 1)) | (1u << (op.q2 - 1));
      return rotate(p, PauliString(n, m, 0), k);
    }
    case OpKind::PauliExp: {
      long k = 0;
      if (!is_multiple_of(op.theta, kPi / 2, &k)) {
        throw std::invalid_argument("audit: non-Clifford PauliExp angle");
      }
      return rotate(p, op.pauli.truncated(n), k);
    }
    case OpKind::InjectPauli: {
      long k = 0;
      if (!is_multiple_of(op.theta, kPi / 2, &k)) {
        throw std::invalid_argument("audit: non-Clifford injection angle");
      }
      return rotate(p, PauliString::single(n, op.axis, op.q1), k);
    }
    case OpKind::MeasureAll:
      return p;
  }
  return p;
}

}  // namespace clifford

struct PropagationResult {
  PauliString residual_full;  // at measurement time, over the full register
  PauliString residual_data;  // restriction to the nine data qubits
  uint32_t ancilla_flips = 0; // readout flips on qubits 10..13
};

/// Conjugates the fault through every op after its location and reports the
/// residual at measurement time. Rejects non-Clifford circuits.
inline PropagationResult propagate_fault(const Circuit& circuit, const FaultLocation& loc) {
  PauliString p = loc.fault;
  for (size_t i = loc.op_index + 1; i < circuit.ops.size(); ++i) {
    p = clifford::conjugate_through(circuit.ops[i], p);
  }
  PropagationResult out{p, p.truncated(9), 0};
  uint32_t flips = p.x_mask() >> 9;  // X/Y components flip Z readout
  out.ancilla_flips = flips;
  return out;
}

/// Context the classifier needs: the measured basis, the circuit's net
/// relabeling, and the ideal decoded outcome.
struct AuditContext {
  Basis basis = Basis::Z;
  Permutation perm;
  int ideal_outcome = +1;

  static AuditContext for_circuit(const Circuit& c, int ideal) {
    return {c.has_measure() ? c.measure_basis() : Basis::Z, c.net_perm, ideal};
  }
};

/// Benign: the residual lies in the gauge-stabilizer group (decode cannot
/// be affected). Correctable: the error-correction rule applied to the
/// measured-basis flip pattern restores the ideal outcome. LogicalFault:
/// everything else.
inline FaultClass classify(const PauliString& residual_data, uint32_t /*ancilla_flips*/,
                           const AuditContext& ctx) {
  const auto& code = BaconShorCode::instance();
  uint32_t flips = ctx.perm.apply_to_bits(residual_data.x_mask() & kDataMask);
  ParityChecks pc = parity_and_stabs(flips, ctx.basis);
  // pc holds the parity of the flip pattern itself; fold onto the ideals.
  int raw = ctx.ideal_outcome * pc.raw;
  DecodeResult dec = decode(raw, pc.stab_a, pc.stab_b, Protocol::Correction);
  if (dec.outcome != ctx.ideal_outcome) return FaultClass::LogicalFault;
  if (code.in_gauge_stabilizer_group(residual_data)) return FaultClass::Benign;
  return FaultClass::Correctable;
}

/// Minimum weight of the measured-basis flip pattern over the gauge span
/// (the 64 X-gauge combinations), after the circuit relabeling.
inline int gauge_reduced_flip_weight(const PauliString& residual_data, const AuditContext& ctx) {
  const auto& code = BaconShorCode::instance();
  uint32_t flips = ctx.perm.apply_to_bits(residual_data.x_mask() & kDataMask);
  int best = std::popcount(flips);
  for (uint32_t combo = 0; combo < 64; ++combo) {
    uint32_t g = 0;
    for (int i = 0; i < 6; ++i) {
      if ((combo >> i) & 1) g ^= code.x_gauges()[i].x_mask();
    }
    best = std::min(best, std::popcount(flips ^ g));
  }
  return best;
}

struct LocationRecord {
  size_t op_index = 0;
  FaultKind kind = FaultKind::GateFault;
  std::string fault;
  std::string residual;
  uint32_t ancilla_flips = 0;
  FaultClass cls = FaultClass::Benign;
};

struct AuditReport {
  std::string circuit_name;
  size_t n_benign = 0;
  size_t n_correctable = 0;
  size_t n_logical = 0;
  bool ft = true;
  std::vector<LocationRecord> records;

  nlohmann::json to_json() const {
    nlohmann::json locs = nlohmann::json::array();
    for (const auto& r : records) {
      locs.push_back({{"op_index", r.op_index},
                      {"kind", to_string(r.kind)},
                      {"pauli", r.fault},
                      {"residual", r.residual},
                      {"ancilla_flips", r.ancilla_flips},
                      {"class", to_string(r.cls)}});
    }
    return nlohmann::json{{"circuit", circuit_name},
                          {"verdict", ft ? "FT" : "not_FT"},
                          {"benign", n_benign},
                          {"correctable", n_correctable},
                          {"logical_faults", n_logical},
                          {"locations", locs}};
  }

  std::string summary_table() const {
    std::ostringstream out;
    out << circuit_name << ": " << (ft ? "FT" : "NOT FT") << "  (benign " << n_benign
        << ", correctable " << n_correctable << ", logical " << n_logical << ")\n";
    for (const auto& r : records) {
      if (r.cls != FaultClass::LogicalFault) continue;
      out << "  op " << r.op_index << " [" << to_string(r.kind) << "] " << r.fault << " -> "
          << r.residual << "\n";
    }
    return out.str();
  }
};

/// All single-fault locations: every nontrivial Pauli on each gate's
/// support, a bit flip after every preparation, and a readout flip on every
/// measured qubit. Injection markers are part of the circuit under test,
/// not fault locations.
inline std::vector<FaultLocation> enumerate_fault_locations(const Circuit& circuit) {
  std::vector<FaultLocation> out;
  uint32_t n = circuit.n_qubits;
  for (size_t i = 0; i < circuit.ops.size(); ++i) {
    const GateOp& op = circuit.ops[i];
    switch (op.kind) {
      case OpKind::PrepZ:
        out.push_back({i, FaultKind::PrepFlip, PauliString::single(n, 'X', op.q1)});
        break;
      case OpKind::InjectPauli:
        break;  // the experiment's own marker, not a fault location
      case OpKind::R:
      case OpKind::RZ:
        for (char ax : {'X', 'Y', 'Z'}) {
          out.push_back({i, FaultKind::GateFault, PauliString::single(n, ax, op.q1)});
        }
        break;
      case OpKind::XX: {
        uint32_t b1 = 1u << (op.q1 - 1), b2 = 1u << (op.q2 - 1);
        for (int p1 = 0; p1 < 4; ++p1) {
          for (int p2 = 0; p2 < 4; ++p2) {
            if (p1 == 0 && p2 == 0) continue;
            uint32_t x = 0, z = 0;
            if (p1 == 1 || p1 == 2) x |= b1;
            if (p1 == 2 || p1 == 3) z |= b1;
            if (p2 == 1 || p2 == 2) x |= b2;
            if (p2 == 2 || p2 == 3) z |= b2;
            out.push_back({i, FaultKind::GateFault, PauliString(n, x, z)});
          }
        }
        break;
      }
      case OpKind::PauliExp: {
        if (op.pauli.weight() > 2) {
          throw std::invalid_argument("audit: PauliExp fault support too large");
        }
        std::vector<int> qs;
        for (int q = 1; q <= int(n); ++q) {
          if ((op.pauli.support() >> (q - 1)) & 1) qs.push_back(q);
        }
        int combos = qs.size() == 1 ? 4 : 16;
        for (int pick = 1; pick < combos; ++pick) {
          uint32_t x = 0, z = 0;
          for (size_t j = 0; j < qs.size(); ++j) {
            int pj = (pick >> (2 * j)) & 3;
            uint32_t b = 1u << (qs[j] - 1);
            if (pj == 1 || pj == 2) x |= b;
            if (pj == 2 || pj == 3) z |= b;
          }
          out.push_back({i, FaultKind::GateFault, PauliString(n, x, z)});
        }
        break;
      }
      case OpKind::MeasureAll:
        for (uint32_t q = 1; q <= n; ++q) {
          // Insert before the measure op so propagation is a no-op.
          out.push_back({i - 1, FaultKind::MeasureFlip, PauliString::single(n, 'X', int(q))});
        }
        break;
    }
  }
  return out;
}

/// Verifies every op sits at Clifford angles by conjugating a probe
/// through it; throws the same unsupported-circuit error as propagation.
inline void check_clifford(const Circuit& circuit) {
  for (const auto& op : circuit.ops) {
    if (op.kind == OpKind::MeasureAll || op.kind == OpKind::PrepZ) continue;
    PauliString probe = PauliString::single(circuit.n_qubits, 'Z', op.q1 == 0 ? 1 : op.q1);
    clifford::conjugate_through(op, probe);
    if (op.kind == OpKind::R) clifford::r_axis(circuit.n_qubits, op.q1, op.phi);
  }
}

/// Exhaustive single-fault audit. Verdict FT iff no location classifies as
/// a logical fault; deterministic and independent of enumeration order.
inline AuditReport audit(const Circuit& circuit, const AuditContext& ctx) {
  check_clifford(circuit);
  AuditReport report;
  report.circuit_name = circuit.name;
  for (const auto& loc : enumerate_fault_locations(circuit)) {
    PropagationResult prop = propagate_fault(circuit, loc);
    FaultClass cls = classify(prop.residual_data, prop.ancilla_flips, ctx);
    LocationRecord rec;
    rec.op_index = loc.op_index;
    rec.kind = loc.kind;
    rec.fault = loc.fault.str();
    rec.residual = prop.residual_data.with_sign(+1).str();
    rec.ancilla_flips = prop.ancilla_flips;
    rec.cls = cls;
    report.records.push_back(rec);
    switch (cls) {
      case FaultClass::Benign: ++report.n_benign; break;
      case FaultClass::Correctable: ++report.n_correctable; break;
      case FaultClass::LogicalFault: ++report.n_logical; break;
    }
  }
  report.ft = report.n_logical == 0;
  return report;
}

inline AuditReport audit(const Circuit& circuit, int ideal_outcome = +1) {
  return audit(circuit, AuditContext::for_circuit(circuit, ideal_outcome));
}

}  // namespace bslab

#endif  // BSLAB_FTAUDIT_HPP
