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

#ifndef BSLAB_EXPERIMENTS_HPP
#define BSLAB_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bslab/builders.hpp"
#include "bslab/decode.hpp"
#include "bslab/executor.hpp"
#include "bslab/fits.hpp"
#include "bslab/ftaudit.hpp"
#include "bslab/noise.hpp"

namespace bslab {

inline constexpr const char* kVersion = "bslab 0.1.0";

/// Configuration problems exit with a distinct code at the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  size_t shots = 10000;
  NoiseConfig noise = NoiseConfig::none();
  double t_single_us = 10.0;
  nlohmann::json params = nlohmann::json::object();

  BuildOptions build_options() const { return BuildOptions{t_single_us, 225.0}; }

  nlohmann::json to_json() const {
    return nlohmann::json{{"experiment", experiment},
                          {"shots", shots},
                          {"noise", noise.to_json()},
                          {"t_single_us", t_single_us},
                          {"params", params}};
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    static const std::vector<std::string> kIds = {
        "state-prep", "magic",         "t2star",   "logical-gates",
        "stab-inject", "syndrome-table", "ft-audit", "detection-scaling"};
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k == "experiment") cfg.experiment = it.value().get<std::string>();
      else if (k == "shots") cfg.shots = it.value().get<size_t>();
      else if (k == "noise") {
        try {
          cfg.noise = NoiseConfig::from_json(it.value());
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      } else if (k == "t_single_us") cfg.t_single_us = it.value().get<double>();
      else if (k == "params") {
        if (!it.value().is_object()) throw ConfigError("params must be an object");
        cfg.params = it.value();
      } else {
        throw ConfigError("unknown config field '" + k + "'");
      }
    }
    if (std::find(kIds.begin(), kIds.end(), cfg.experiment) == kIds.end()) {
      throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    }
    if (cfg.shots == 0) throw ConfigError("shots must be >= 1");
    return cfg;
  }

  /// FNV-1a over the canonical serialization; recorded in every output.
  uint64_t hash() const {
    std::string s = to_json().dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  /// Validates that params contains only the allowed keys.
  void check_params(const std::vector<std::string>& allowed) const {
    for (auto it = params.begin(); it != params.end(); ++it) {
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
        throw ConfigError("unknown params field '" + it.key() + "' for " + experiment);
      }
    }
  }
};

struct ExperimentResult {
  nlohmann::json json;
  std::string csv;
  std::optional<nlohmann::json> audit;
  std::string stdout_text;
  int exit_code = 0;
};

namespace detail {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline nlohmann::json provenance(const ExperimentConfig& cfg) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  return nlohmann::json{{"version", kVersion},
                        {"experiment", cfg.experiment},
                        {"config_hash", hex},
                        {"seed", cfg.noise.seed}};
}

inline nlohmann::json stats_json(const ProcessedStats& st) {
  return nlohmann::json{{"protocol", to_string(st.protocol)}, {"n_total", st.n_total},
                        {"n_kept", st.n_kept},               {"n_error", st.n_error},
                        {"rate", st.error_rate},             {"ci_lo", st.ci_lo},
                        {"ci_hi", st.ci_hi}};
}

/// Runs shots and applies the crosstalk-flag filter when enabled.
inline ShotBatch run_filtered(const Circuit& c, const NoiseConfig& noise, size_t shots,
                              uint64_t seed, double* discarded = nullptr,
                              double gate_depol_p = 0.0) {
  RunOptions opts{shots, seed};
  opts.gate_depol_p = gate_depol_p;
  ShotBatch batch = Executor::run_shots(c, noise, opts);
  if (noise.flag_filter && batch.flag_mask) return flag_filter(batch, discarded);
  if (discarded) *discarded = 0.0;
  return batch;
}

/// Mean decoded outcome with the 95% binomial CI mapped to [-1, 1]. A
/// fully post-selected-away sample (possible under Detection) is reported
/// with kept = 0 and NaN values rather than an error.
struct MeanPoint {
  double mean = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  size_t kept = 0;
};

inline MeanPoint mean_point(const ShotBatch& batch, Protocol protocol) {
  long sum = 0;
  size_t kept = 0;
  for (size_t i = 0; i < batch.size(); ++i) {
    DecodeResult r = decode_shot(batch.bits[i], batch.perm, batch.basis, protocol);
    if (r.discarded) continue;
    ++kept;
    sum += r.outcome;
  }
  if (kept == 0) {
    double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, 0};
  }
  double mean = double(sum) / double(kept);
  size_t k_plus = size_t(std::llround((mean + 1.0) / 2.0 * double(kept)));
  auto [lo, hi] = wilson_interval(k_plus, kept);
  return {mean, 2 * lo - 1, 2 * hi - 1, kept};
}

constexpr Protocol kProtocols[3] = {Protocol::Raw, Protocol::Correction, Protocol::Detection};

}  // namespace detail

// ---------------------------------------------------------------------------
// state-prep: FT vs nFT encodings of the four basis states.
// ---------------------------------------------------------------------------

inline Circuit build_state_prep_circuit(const std::string& encoding, const std::string& state,
                                        const BuildOptions& opts) {
  bool z_basis = state == "0" || state == "1";
  int sign = (state == "0" || state == "+") ? +1 : -1;
  Circuit c(13);
  if (encoding == "ft") {
    c = build_ft_encode(z_basis ? Basis::Z : Basis::X, sign, opts);
  } else if (encoding == "nft") {
    double theta = state == "0" ? 0.0 : state == "1" ? kPi : kPi / 2;
    double phi = state == "-" ? -kPi / 2 : kPi / 2;
    c = build_nft_encode(theta, phi, opts);
  } else {
    throw ConfigError("encoding must be 'ft' or 'nft'");
  }
  if (z_basis) measure_in_z(c);
  else measure_in_x(c, opts);
  return c;
}

inline ExperimentResult run_state_prep(const ExperimentConfig& cfg) {
  cfg.check_params({"encodings", "states", "gate_depol_p"});
  std::vector<std::string> encodings = cfg.params.value("encodings", std::vector<std::string>{"ft", "nft"});
  std::vector<std::string> states = cfg.params.value("states", std::vector<std::string>{"0", "1", "+", "-"});
  double gate_depol_p = cfg.params.value("gate_depol_p", 0.0);
  ExperimentResult out;
  std::ostringstream csv;
  csv << "encoding,state," << ProcessedStats::csv_header() << "\n";
  nlohmann::json conditions = nlohmann::json::array();
  uint64_t seq = 0;
  for (const auto& enc : encodings) {
    for (const auto& st : states) {
      Circuit c = build_state_prep_circuit(enc, st, cfg.build_options());
      double discarded = 0;
      ShotBatch batch = detail::run_filtered(c, cfg.noise, cfg.shots,
                                             cfg.noise.seed + (seq++) * 1000003, &discarded,
                                             gate_depol_p);
      int ideal = (st == "0" || st == "+") ? +1 : -1;
      nlohmann::json cond{{"encoding", enc}, {"state", st}, {"flag_discard_fraction", discarded}};
      for (Protocol p : detail::kProtocols) {
        ProcessedStats s = logical_error_rate(batch, ideal, p);
        csv << enc << "," << st << "," << s.csv_row() << "\n";
        cond["stats"].push_back(detail::stats_json(s));
      }
      conditions.push_back(cond);
    }
  }
  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)}, {"conditions", conditions}};
  return out;
}

// ---------------------------------------------------------------------------
// magic: H_x / H_y preparation fidelity from <X>, <Z> under each protocol.
// ---------------------------------------------------------------------------

inline ExperimentResult run_magic(const ExperimentConfig& cfg) {
  cfg.check_params({"state"});
  std::string which = cfg.params.value("state", std::string("hx"));
  if (which != "hx" && which != "hy") throw ConfigError("magic state must be 'hx' or 'hy'");
  double phi = which == "hx" ? kPi / 2 : 0.0;
  BuildOptions opts = cfg.build_options();

  Circuit cz = build_nft_encode(kPi / 4, phi, opts);
  measure_in_z(cz);
  Circuit cx = build_nft_encode(kPi / 4, phi, opts);
  measure_in_x(cx, opts);

  ShotBatch bz = detail::run_filtered(cz, cfg.noise, cfg.shots, cfg.noise.seed);
  ShotBatch bx = detail::run_filtered(cx, cfg.noise, cfg.shots, cfg.noise.seed + 1);

  ExperimentResult out;
  std::ostringstream csv;
  csv << "protocol,exp_x,exp_z,fidelity,f_lo,f_hi\n";
  nlohmann::json rows = nlohmann::json::array();
  for (Protocol p : detail::kProtocols) {
    auto mx = detail::mean_point(bx, p);
    auto mz = detail::mean_point(bz, p);
    nlohmann::json row{{"protocol", to_string(p)}, {"exp_x", mx.mean}, {"exp_z", mz.mean},
                       {"n_kept_x", mx.kept},      {"n_kept_z", mz.kept}};
    double f_lo = 0, f_hi = 0;
    if (which == "hx") {
      double f = magic_fidelity(std::clamp(mx.mean, -1.0, 1.0), std::clamp(mz.mean, -1.0, 1.0));
      row["fidelity"] = f;
      f_lo = f_hi = f;
    } else {
      double x = std::clamp(mx.mean, -1.0, 1.0), z = std::clamp(mz.mean, -1.0, 1.0);
      double r2 = x * x + z * z;
      if (r2 > 1.0) {
        double s = std::sqrt(1.0 / r2);
        x *= s;
        z *= s;
      }
      std::tie(f_lo, f_hi) = fidelity_bound(x, z, 1.0 / std::sqrt(2.0));
      row["fidelity"] = 0.5 * (f_lo + f_hi);
      row["f_lo"] = f_lo;
      row["f_hi"] = f_hi;
    }
    rows.push_back(row);
    csv << to_string(p) << "," << detail::fmt(mx.mean) << "," << detail::fmt(mz.mean) << ","
        << detail::fmt(row["fidelity"].get<double>()) << "," << detail::fmt(f_lo) << ","
        << detail::fmt(f_hi) << "\n";
  }
  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)},
                            {"state", which},
                            {"results", rows}};
  return out;
}

// ---------------------------------------------------------------------------
// t2star: logical coherence of |+>_L under collective dephasing.
// ---------------------------------------------------------------------------

inline ExperimentResult run_t2star(const ExperimentConfig& cfg) {
  cfg.check_params({"wait_times_ms", "phi_points"});
  std::vector<double> waits_ms =
      cfg.params.value("wait_times_ms", std::vector<double>{0, 5, 10, 20, 40, 80});
  int phi_points = cfg.params.value("phi_points", 13);
  if (phi_points < 5) throw ConfigError("phi_points must be >= 5");
  BuildOptions opts = cfg.build_options();

  // Deterministic (coherent-noise) encode state, evolved once.
  Circuit enc = build_ft_encode(Basis::X, +1, opts);
  StateVector base = Executor::run_state(enc, cfg.noise);
  double readout_theta = -kPi / 2 + cfg.noise.eps_1q;
  uint32_t flag_mask = 0b1111u << 9;

  ExperimentResult out;
  std::ostringstream csv;
  csv << "t_ms,phi,protocol,y,ci_lo,ci_hi\n";
  nlohmann::json fringes = nlohmann::json::array();
  nlohmann::json amplitudes;
  std::map<Protocol, std::vector<LsPoint>> amp_series;

  uint64_t stream = 0;
  for (double t_ms : waits_ms) {
    double t_s = t_ms * 1e-3;
    std::map<Protocol, std::vector<MlePoint>> fringe_data;
    std::vector<std::array<double, 3>> row_proj(3, {0, 0, 0});  // sum E*cos, sum cos^2, points
    for (int ip = 0; ip < phi_points; ++ip) {
      double phi = 2 * kPi * ip / double(phi_points - 1);
      ShotBatch batch;
      batch.basis = Basis::X;
      batch.n_qubits = 13;
      batch.flag_mask = flag_mask;
      batch.perm = Permutation::identity();
      batch.bits.reserve(cfg.shots);
      uint64_t seed = cfg.noise.seed + 7919 * (stream++);
      for (size_t s = 0; s < cfg.shots; ++s) {
        RngStream rng(seed, s);
        StateVector state = base;
        if (cfg.noise.ghz_depol_p > 0) ghz_depolarize(state, cfg.noise.ghz_depol_p, rng);
        if (cfg.noise.t2_star > 0 && t_s > 0) apply_collective_dephasing(state, t_s, cfg.noise, rng);
        apply_collective_rz(state, kDataMask, phi);
        for (int q = 0; q < 9; ++q) state.apply_r(q, readout_theta, kPi / 2);
        uint32_t bits = state.sample_one(rng);
        batch.bits.push_back(sample_spam(bits, 13, cfg.noise, rng));
      }
      if (cfg.noise.flag_filter) batch = flag_filter(batch);
      for (Protocol p : detail::kProtocols) {
        auto mp = detail::mean_point(batch, p);
        csv << detail::fmt(t_ms) << "," << detail::fmt(phi) << "," << to_string(p) << ","
            << detail::fmt(mp.mean) << "," << detail::fmt(mp.ci_lo) << "," << detail::fmt(mp.ci_hi)
            << "\n";
        if (mp.kept > 0) {
          size_t k_plus = size_t(std::llround((mp.mean + 1.0) / 2.0 * double(mp.kept)));
          fringe_data[p].push_back({phi, k_plus, mp.kept});
        }
      }
      // Per-row GHZ contrast from the same shots: row parity fringe
      // projected onto cos(3 phi).
      for (int row = 0; row < 3; ++row) {
        uint32_t mask = 0x7u << (3 * row);
        double sum = 0;
        for (uint32_t b : batch.bits) sum += (std::popcount(b & mask) & 1) ? -1.0 : 1.0;
        double e = batch.bits.empty() ? 0.0 : sum / double(batch.bits.size());
        row_proj[row][0] += e * std::cos(3 * phi);
        row_proj[row][1] += std::cos(3 * phi) * std::cos(3 * phi);
      }
    }
    nlohmann::json trow{{"t_ms", t_ms}};
    for (Protocol p : detail::kProtocols) {
      ModelId model = p == Protocol::Raw ? ModelId::RamseyRaw
                      : p == Protocol::Correction ? ModelId::RamseyCorr
                                                  : ModelId::RamseyDet;
      FitResult fit = fit_binomial_mle(model, fringe_data[p]);
      trow[to_string(p)] = {{"amplitude", fit.params[0]},
                            {"ci", fit.ci_half_width[0]},
                            {"converged", fit.converged}};
      amp_series[p].push_back({t_ms, fit.params[0], std::max(1e-4, fit.ci_half_width[0] / 1.96)});
    }
    nlohmann::json rows = nlohmann::json::array();
    for (int row = 0; row < 3; ++row) {
      rows.push_back(row_proj[row][1] > 0 ? row_proj[row][0] / row_proj[row][1] : 0.0);
    }
    trow["ghz_row_contrast"] = rows;
    fringes.push_back(trow);
  }

  bool all_converged = true;
  for (Protocol p : detail::kProtocols) {
    if (amp_series[p].size() < 2) {
      amplitudes[to_string(p)] = {{"fitted", false}};
      continue;
    }
    FitResult decay = fit_least_squares(ModelId::ExpDecay, amp_series[p]);
    all_converged = all_converged && decay.converged;
    amplitudes[to_string(p)] = {{"T", decay.params[1]},
                                {"A", decay.params[0]},
                                {"T_ci", decay.ci_half_width[1]},
                                {"converged", decay.converged},
                                {"degenerate", decay.degenerate}};
  }
  out.exit_code = all_converged ? 0 : 3;
  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)},
                            {"fringes", fringes},
                            {"decay_fits", amplitudes}};
  return out;
}

// ---------------------------------------------------------------------------
// logical-gates: transversal FT steps vs continuous nFT rotation.
// ---------------------------------------------------------------------------

inline ExperimentResult run_logical_gates(const ExperimentConfig& cfg) {
  cfg.check_params({"branches", "ft_steps_max", "theta_points", "theta_max", "gate_depol_p"});
  std::vector<std::string> branches =
      cfg.params.value("branches", std::vector<std::string>{"ft", "nft"});
  int ft_steps = cfg.params.value("ft_steps_max", 12);
  int theta_points = cfg.params.value("theta_points", 9);
  double theta_max = cfg.params.value("theta_max", 2 * kPi);
  double gate_depol_p = cfg.params.value("gate_depol_p", 0.0);
  BuildOptions opts = cfg.build_options();

  ExperimentResult out;
  std::ostringstream csv;
  csv << "branch,theta,protocol,y,ci_lo,ci_hi\n";
  nlohmann::json fits_json;
  nlohmann::json theta_pi = nlohmann::json::array();
  uint64_t stream = 0;
  bool all_converged = true;

  for (const auto& branch : branches) {
    if (branch != "ft" && branch != "nft") throw ConfigError("branch must be 'ft' or 'nft'");
    std::map<Protocol, std::vector<LsPoint>> series;
    std::vector<double> thetas;
    if (branch == "ft") {
      for (int n = 0; n <= ft_steps; ++n) thetas.push_back(n * kPi / 2);
    } else {
      for (int i = 0; i < theta_points; ++i)
        thetas.push_back(theta_max * i / double(theta_points - 1));
    }
    for (double theta : thetas) {
      Circuit c = build_ft_encode(Basis::Z, +1, opts);
      if (branch == "ft") {
        int steps = int(std::llround(theta / (kPi / 2)));
        for (int s = 0; s < steps; ++s) c.append(build_transversal_yl(+1, opts).first);
      } else {
        c.append(build_nft_yl(theta, opts));
      }
      measure_in_z(c);
      ShotBatch batch = detail::run_filtered(c, cfg.noise, cfg.shots,
                                             cfg.noise.seed + 104729 * (stream++), nullptr,
                                             gate_depol_p);
      for (Protocol p : detail::kProtocols) {
        auto mp = detail::mean_point(batch, p);
        csv << branch << "," << detail::fmt(theta) << "," << to_string(p) << ","
            << detail::fmt(mp.mean) << "," << detail::fmt(mp.ci_lo) << "," << detail::fmt(mp.ci_hi)
            << "\n";
        series[p].push_back({theta, mp.mean, (mp.ci_hi - mp.ci_lo) / (2 * 1.96) + 1e-4});
        if (std::abs(theta - kPi) < 1e-9) {
          ProcessedStats st = logical_error_rate(batch, -1, p);
          theta_pi.push_back({{"branch", branch},
                              {"protocol", to_string(p)},
                              {"rate", st.error_rate},
                              {"ci_lo", st.ci_lo},
                              {"ci_hi", st.ci_hi},
                              {"n_kept", st.n_kept}});
        }
      }
    }
    for (Protocol p : detail::kProtocols) {
      FitResult fit = fit_least_squares(ModelId::DecaySinusoid, series[p]);
      all_converged = all_converged && fit.converged;
      fits_json[branch][to_string(p)] = {{"A", fit.params[0]},
                                         {"Gamma", fit.params[1]},
                                         {"A_ci", fit.ci_half_width[0]},
                                         {"Gamma_ci", fit.ci_half_width[1]},
                                         {"converged", fit.converged}};
    }
  }
  out.exit_code = all_converged ? 0 : 3;
  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)},
                            {"fits", fits_json},
                            {"theta_pi", theta_pi}};
  return out;
}

// ---------------------------------------------------------------------------
// stab-inject: Z(theta) injected on the ancilla mid-measurement.
// ---------------------------------------------------------------------------

inline ExperimentResult run_stab_inject(const ExperimentConfig& cfg) {
  cfg.check_params({"stabilizer", "orderings", "theta_points", "theta_max", "after_k",
                    "include_baseline", "gate_depol_p"});
  double gate_depol_p = cfg.params.value("gate_depol_p", 0.0);
  int stab = cfg.params.value("stabilizer", 3);  // S3
  if (stab < 1 || stab > 4) throw ConfigError("stabilizer must be 1..4");
  std::vector<std::string> orderings =
      cfg.params.value("orderings", std::vector<std::string>{"ft", "nft"});
  int theta_points = cfg.params.value("theta_points", 13);
  double theta_max = cfg.params.value("theta_max", 2 * kPi);
  int after_k = cfg.params.value("after_k", 3);
  bool include_baseline = cfg.params.value("include_baseline", true);
  BuildOptions opts = cfg.build_options();

  ExperimentResult out;
  std::ostringstream csv;
  csv << "ordering,theta,protocol,y,ci_lo,ci_hi\n";
  nlohmann::json summary;
  uint64_t stream = 0;

  if (include_baseline) {
    Circuit c = build_ft_encode(Basis::Z, +1, opts);
    measure_in_z(c);
    ShotBatch batch = detail::run_filtered(c, cfg.noise, cfg.shots, cfg.noise.seed + 17, nullptr,
                                           gate_depol_p);
    for (Protocol p : detail::kProtocols) {
      ProcessedStats st = logical_error_rate(batch, +1, p);
      summary["baseline"].push_back(detail::stats_json(st));
      auto mp = detail::mean_point(batch, p);
      csv << "baseline,0," << to_string(p) << "," << detail::fmt(mp.mean) << ","
          << detail::fmt(mp.ci_lo) << "," << detail::fmt(mp.ci_hi) << "\n";
    }
  }

  for (const auto& ord_name : orderings) {
    StabOrdering ord = ord_name == "ft" ? StabOrdering::FT
                       : ord_name == "nft"
                           ? StabOrdering::nFT
                           : throw ConfigError("ordering must be 'ft' or 'nft'");
    for (int it = 0; it < theta_points; ++it) {
      double theta = theta_max * it / double(theta_points - 1);
      Circuit c = build_ft_encode(Basis::Z, +1, opts);
      c.append(build_stab_measure(stab - 1, ord, InjectSpec{'Z', theta, after_k}, opts));
      measure_in_z(c);
      ShotBatch batch = detail::run_filtered(c, cfg.noise, cfg.shots,
                                             cfg.noise.seed + 31 * (stream++) + 101, nullptr,
                                             gate_depol_p);
      for (Protocol p : detail::kProtocols) {
        auto mp = detail::mean_point(batch, p);
        csv << ord_name << "," << detail::fmt(theta) << "," << to_string(p) << ","
            << detail::fmt(mp.mean) << "," << detail::fmt(mp.ci_lo) << ","
            << detail::fmt(mp.ci_hi) << "\n";
        if (it == 0) {
          ProcessedStats st = logical_error_rate(batch, +1, p);
          summary["theta0"][ord_name].push_back(detail::stats_json(st));
        }
      }
    }
  }

  // Significance of the theta = 0 corrected-rate difference when both
  // orderings ran.
  if (summary.contains("theta0") && summary["theta0"].contains("ft") &&
      summary["theta0"].contains("nft")) {
    auto& ft = summary["theta0"]["ft"][1];
    auto& nft = summary["theta0"]["nft"][1];
    summary["theta0_p_value"] =
        two_proportion_test(nft["n_error"].get<size_t>(), nft["n_kept"].get<size_t>(),
                            ft["n_error"].get<size_t>(), ft["n_kept"].get<size_t>());
  }

  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)},
                            {"stabilizer", stab},
                            {"after_k", after_k},
                            {"summary", summary}};
  return out;
}

// ---------------------------------------------------------------------------
// syndrome-table: ancilla patterns for every injected single-qubit Pauli.
// ---------------------------------------------------------------------------

inline ExperimentResult run_syndrome_table(const ExperimentConfig& cfg) {
  cfg.check_params({"errors", "include_no_error"});
  std::vector<std::string> errors;
  if (cfg.params.contains("errors") && cfg.params["errors"].is_array()) {
    errors = cfg.params["errors"].get<std::vector<std::string>>();
  } else {
    for (char ax : {'X', 'Y', 'Z'}) {
      for (int q = 1; q <= 9; ++q) errors.push_back(std::string(1, ax) + std::to_string(q));
    }
  }
  bool include_none = cfg.params.value("include_no_error", true);
  BuildOptions opts = cfg.build_options();
  const auto& code = BaconShorCode::instance();

  ExperimentResult out;
  std::ostringstream csv;
  csv << "error,ancilla,ideal,measured_p1,ci_lo,ci_hi\n";
  nlohmann::json cases = nlohmann::json::array();
  std::array<double, 4> deviation_sum{0, 0, 0, 0};
  size_t n_cases = 0;
  uint64_t stream = 0;

  auto run_case = [&](const std::string& label, std::optional<std::pair<int, char>> inject) {
    Circuit c = build_ft_encode(Basis::Z, +1, opts);
    c.append(build_full_syndrome(inject, opts));
    measure_in_z(c);
    ShotBatch batch =
        detail::run_filtered(c, cfg.noise, cfg.shots, cfg.noise.seed + 557 * (stream++));
    std::array<int, 4> ideal{0, 0, 0, 0};
    if (inject) ideal = code.syndrome(PauliString::single(9, inject->second, inject->first));
    nlohmann::json case_json{{"error", label}};
    for (int k = 0; k < 4; ++k) {
      int bit = BaconShorCode::ancilla_label(k) - 1;
      size_t ones = 0;
      for (uint32_t b : batch.bits) ones += (b >> bit) & 1u;
      double p1 = batch.bits.empty() ? 0.0 : double(ones) / double(batch.bits.size());
      auto [lo, hi] = wilson_interval(ones, std::max<size_t>(batch.bits.size(), 1));
      csv << label << "," << BaconShorCode::ancilla_label(k) << "," << ideal[k] << ","
          << detail::fmt(p1) << "," << detail::fmt(lo) << "," << detail::fmt(hi) << "\n";
      case_json["ancilla"].push_back({{"label", BaconShorCode::ancilla_label(k)},
                                      {"ideal", ideal[k]},
                                      {"p1", p1}});
      deviation_sum[k] += std::abs(p1 - double(ideal[k]));
    }
    ++n_cases;
    cases.push_back(case_json);
  };

  if (include_none) run_case("none", std::nullopt);
  for (const auto& e : errors) {
    if (e.size() < 2 || (e[0] != 'X' && e[0] != 'Y' && e[0] != 'Z')) {
      throw ConfigError("bad error spec '" + e + "'");
    }
    int q = std::stoi(e.substr(1));
    if (q < 1 || q > 9) throw ConfigError("error qubit must be 1..9");
    run_case(e, std::make_pair(q, e[0]));
  }

  nlohmann::json dev;
  for (int k = 0; k < 4; ++k) {
    dev[std::to_string(BaconShorCode::ancilla_label(k))] =
        n_cases ? deviation_sum[k] / double(n_cases) : 0.0;
  }
  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)},
                            {"cases", cases},
                            {"mean_ancilla_deviation", dev}};
  return out;
}

// ---------------------------------------------------------------------------
// ft-audit: certificates for the canonical circuits.
// ---------------------------------------------------------------------------

inline ExperimentResult run_ft_audit(const ExperimentConfig& cfg) {
  cfg.check_params({"circuits"});
  std::vector<std::string> names = cfg.params.value(
      "circuits", std::vector<std::string>{"ft-encode-z", "nft-encode", "stab-s3-ft",
                                           "stab-s3-nft"});
  BuildOptions opts = cfg.build_options();

  ExperimentResult out;
  nlohmann::json reports = nlohmann::json::array();
  std::ostringstream csv, table;
  csv << "circuit,verdict,benign,correctable,logical_faults\n";
  bool violation = false;

  for (const auto& name : names) {
    Circuit c(13);
    bool expect_ft = false;
    if (name == "ft-encode-z") {
      c = build_ft_encode(Basis::Z, +1, opts);
      measure_in_z(c);
      expect_ft = true;
    } else if (name == "ft-encode-x") {
      c = build_ft_encode(Basis::X, +1, opts);
      measure_in_x(c, opts);
      expect_ft = true;
    } else if (name == "nft-encode") {
      c = build_nft_encode(0.0, 0.0, opts);
      measure_in_z(c);
    } else if (name == "stab-s3-ft" || name == "stab-s3-nft") {
      c = build_stab_measure(2, name == "stab-s3-ft" ? StabOrdering::FT : StabOrdering::nFT,
                             std::nullopt, opts);
      measure_in_z(c);
      expect_ft = name == "stab-s3-ft";
    } else if (name == "stab-s1-ft" || name == "stab-s1-nft") {
      c = build_stab_measure(0, name == "stab-s1-ft" ? StabOrdering::FT : StabOrdering::nFT,
                             std::nullopt, opts);
      measure_in_x(c, opts);
      expect_ft = name == "stab-s1-ft";
    } else {
      throw ConfigError("unknown audit circuit '" + name + "'");
    }
    c.name = name;
    AuditReport report = audit(c, +1);
    if (expect_ft && !report.ft) violation = true;
    reports.push_back(report.to_json());
    csv << name << "," << (report.ft ? "FT" : "not_FT") << "," << report.n_benign << ","
        << report.n_correctable << "," << report.n_logical << "\n";
    table << report.summary_table();
  }
  out.csv = csv.str();
  out.audit = reports;
  out.stdout_text = table.str();
  out.exit_code = violation ? 4 : 0;
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)}, {"reports", reports}};
  return out;
}

// ---------------------------------------------------------------------------
// detection-scaling: failure-rate slopes under stochastic per-gate faults.
// ---------------------------------------------------------------------------

namespace detail {

/// Pauli-frame fast path for Clifford prep circuits: propagate each gate's
/// possible faults once, then XOR sampled flip patterns onto clean shots.
struct FaultTable {
  struct Entry {
    std::vector<uint32_t> flip_patterns;  // measured-basis flips per Pauli
  };
  std::vector<Entry> gates;
  Permutation perm;
};

inline FaultTable build_fault_table(const Circuit& c) {
  FaultTable table;
  table.perm = c.net_perm;
  for (size_t i = 0; i < c.ops.size(); ++i) {
    const GateOp& op = c.ops[i];
    if (op.kind != OpKind::R && op.kind != OpKind::XX) continue;
    FaultTable::Entry entry;
    auto add = [&](const PauliString& fault) {
      PropagationResult prop = propagate_fault(c, {i, FaultKind::GateFault, fault});
      entry.flip_patterns.push_back(prop.residual_data.x_mask() & kDataMask);
    };
    if (op.kind == OpKind::R) {
      for (char ax : {'X', 'Y', 'Z'}) add(PauliString::single(c.n_qubits, ax, op.q1));
    } else {
      uint32_t b1 = 1u << (op.q1 - 1), b2 = 1u << (op.q2 - 1);
      for (int pick = 1; pick < 16; ++pick) {
        uint32_t x = 0, z = 0;
        int p1 = pick & 3, p2 = (pick >> 2) & 3;
        if (p1 == 1 || p1 == 2) x |= b1;
        if (p1 == 2 || p1 == 3) z |= b1;
        if (p2 == 1 || p2 == 2) x |= b2;
        if (p2 == 2 || p2 == 3) z |= b2;
        add(PauliString(c.n_qubits, x, z));
      }
    }
    table.gates.push_back(std::move(entry));
  }
  return table;
}

}  // namespace detail

inline ExperimentResult run_detection_scaling(const ExperimentConfig& cfg) {
  cfg.check_params({"fault_rates", "preps"});
  std::vector<double> rates = cfg.params.value(
      "fault_rates", std::vector<double>{0.004, 0.008, 0.016, 0.032, 0.064});
  std::vector<std::string> preps = cfg.params.value("preps", std::vector<std::string>{"ft", "nft"});
  BuildOptions opts = cfg.build_options();

  ExperimentResult out;
  std::ostringstream csv;
  csv << "prep,fault_rate,n_kept,n_failures,failure_rate\n";
  nlohmann::json slopes;
  uint64_t stream = 0;

  for (const auto& prep : preps) {
    Circuit c(13);
    if (prep == "ft") c = build_ft_encode(Basis::Z, +1, opts);
    else if (prep == "nft") c = build_nft_encode(0.0, 0.0, opts);
    else throw ConfigError("prep must be 'ft' or 'nft'");
    measure_in_z(c);
    detail::FaultTable table = detail::build_fault_table(c);

    std::vector<std::pair<double, double>> loglog;
    for (double p : rates) {
      if (p <= 0 || p >= 1) throw ConfigError("fault_rates must be in (0,1)");
      uint64_t seed = cfg.noise.seed + 6007 * (stream++);
      size_t kept = 0, failures = 0;
      for (size_t s = 0; s < cfg.shots; ++s) {
        RngStream rng(seed, s);
        // Clean |0>_L readout: rows uniform over even-parity strings.
        uint32_t bits = 0;
        for (int row = 0; row < 3; ++row) {
          uint32_t b0 = uint32_t(rng.bernoulli(0.5)), b1 = uint32_t(rng.bernoulli(0.5));
          bits |= (b0 | (b1 << 1) | ((b0 ^ b1) << 2)) << (3 * row);
        }
        uint32_t flips = 0;
        for (const auto& gate : table.gates) {
          if (!rng.bernoulli(p)) continue;
          flips ^= gate.flip_patterns[rng.below(gate.flip_patterns.size())];
        }
        DecodeResult r = decode_shot(bits ^ flips, table.perm, Basis::Z, Protocol::Detection);
        if (r.discarded) continue;
        ++kept;
        if (r.outcome != +1) ++failures;
      }
      double rate = kept ? double(failures) / double(kept) : 0.0;
      csv << prep << "," << detail::fmt(p) << "," << kept << "," << failures << ","
          << detail::fmt(rate) << "\n";
      if (failures >= 3) loglog.push_back({std::log(p), std::log(rate)});
    }
    // Least-squares slope through the resolvable points.
    double slope = 0;
    if (loglog.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (auto [x, y] : loglog) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      double n = double(loglog.size());
      slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    slopes[prep] = {{"slope", slope}, {"points_used", loglog.size()}};
  }
  out.csv = csv.str();
  out.json = nlohmann::json{{"provenance", detail::provenance(cfg)}, {"slopes", slopes}};
  return out;
}

// ---------------------------------------------------------------------------

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "state-prep") return run_state_prep(cfg);
  if (cfg.experiment == "magic") return run_magic(cfg);
  if (cfg.experiment == "t2star") return run_t2star(cfg);
  if (cfg.experiment == "logical-gates") return run_logical_gates(cfg);
  if (cfg.experiment == "stab-inject") return run_stab_inject(cfg);
  if (cfg.experiment == "syndrome-table") return run_syndrome_table(cfg);
  if (cfg.experiment == "ft-audit") return run_ft_audit(cfg);
  if (cfg.experiment == "detection-scaling") return run_detection_scaling(cfg);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace bslab

#endif  // BSLAB_EXPERIMENTS_HPP
