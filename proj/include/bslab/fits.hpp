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

#ifndef BSLAB_FITS_HPP
#define BSLAB_FITS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bslab {

enum class ModelId {
  ExpDecay,        // A exp(-t/T)
  GaussDecay,      // A exp(-(t/T)^2)
  DecaySinusoid,   // A cos(theta) exp(-Gamma theta / (pi/2))
  RamseyRaw,       // A cos(3 theta)^3
  RamseyCorr,      // A (c^6 + 3c^4 s^2 - 3c^2 s^4 - s^6)
  RamseyDet,       // A (c^6 - s^6)/(c^6 + s^6)
  RamseyRawDepol,  // A (1-p)^3 cos(3 theta)^3
  RamseyCorrDepol,
  RamseyDetDepol,
};

inline const char* to_string(ModelId m) {
  switch (m) {
    case ModelId::ExpDecay: return "exp_decay";
    case ModelId::GaussDecay: return "gauss_decay";
    case ModelId::DecaySinusoid: return "decay_sinusoid";
    case ModelId::RamseyRaw: return "ramsey_raw";
    case ModelId::RamseyCorr: return "ramsey_corr";
    case ModelId::RamseyDet: return "ramsey_det";
    case ModelId::RamseyRawDepol: return "ramsey_raw_depol";
    case ModelId::RamseyCorrDepol: return "ramsey_corr_depol";
    default: return "ramsey_det_depol";
  }
}

inline ModelId model_from_string(const std::string& s) {
  for (ModelId m : {ModelId::ExpDecay, ModelId::GaussDecay, ModelId::DecaySinusoid,
                    ModelId::RamseyRaw, ModelId::RamseyCorr, ModelId::RamseyDet,
                    ModelId::RamseyRawDepol, ModelId::RamseyCorrDepol, ModelId::RamseyDetDepol}) {
    if (s == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown model '" + s + "'");
}

namespace fringe {
// Shared building blocks of the three-row Ramsey fringe family, with
// c = cos(3 theta / 2) and s = sin(3 theta / 2).
inline double raw(double theta) {
  double v = std::cos(3 * theta);
  return v * v * v;
}
inline double corrected(double theta) {
  double c = std::cos(1.5 * theta), s = std::sin(1.5 * theta);
  double c2 = c * c, s2 = s * s;
  return c2 * c2 * c2 + 3 * c2 * c2 * s2 - 3 * c2 * s2 * s2 - s2 * s2 * s2;
}
inline double detected(double theta) {
  double c = std::cos(1.5 * theta), s = std::sin(1.5 * theta);
  double c6 = std::pow(c, 6.0), s6 = std::pow(s, 6.0);
  return (c6 - s6) / (c6 + s6);
}
inline double corrected_depol(double theta, double p) {
  double c = std::cos(1.5 * theta), s = std::sin(1.5 * theta);
  double c2 = c * c, s2 = s * s;
  double q = 1 - p;
  double a = q * q * q + 3 * q * q * p + 1.5 * p * p * q;
  double b = 3 * q * q * q + 3 * q * q * p + 1.5 * p * p * q;
  return a * (c2 * c2 * c2 - s2 * s2 * s2) + b * (s2 * c2 * c2 - s2 * s2 * c2);
}
inline double detected_depol(double theta, double p) {
  double c = std::cos(1.5 * theta), s = std::sin(1.5 * theta);
  double q = 1 - p;
  auto term = [&](int k) {
    double ck = std::pow(c, k), sk = std::pow(s, k);
    return (ck - sk) / (ck + sk);
  };
  return q * q * q * term(6) + 1.5 * p * q * q * term(4) + 0.75 * p * p * q * term(2);
}
}  // namespace fringe

struct ParamSpec {
  const char* name;
  double lo;
  double hi;
  bool scales_with_x;  // bounds multiply the data's x span (decay times)
};

struct ModelFn {
  ModelId id;
  std::vector<ParamSpec> params;

  static ModelFn get(ModelId id) {
    switch (id) {
      case ModelId::ExpDecay:
      case ModelId::GaussDecay:
        return {id, {{"A", 0.0, 1.5, false}, {"T", 1e-3, 1e3, true}}};
      case ModelId::DecaySinusoid:
        return {id, {{"A", 0.0, 1.5, false}, {"Gamma", 0.0, 1.0, false}}};
      case ModelId::RamseyRaw:
      case ModelId::RamseyCorr:
      case ModelId::RamseyDet:
        return {id, {{"A", 0.0, 1.2, false}}};
      default:
        return {id, {{"A", 0.0, 1.2, false}, {"p", 0.0, 1.0, false}}};
    }
  }

  size_t n_params() const { return params.size(); }

  double eval(const std::vector<double>& p, double x) const {
    switch (id) {
      case ModelId::ExpDecay: return p[0] * std::exp(-x / p[1]);
      case ModelId::GaussDecay: return p[0] * std::exp(-(x / p[1]) * (x / p[1]));
      case ModelId::DecaySinusoid: return p[0] * std::cos(x) * std::exp(-p[1] * x / (kFitPi / 2));
      case ModelId::RamseyRaw: return p[0] * fringe::raw(x);
      case ModelId::RamseyCorr: return p[0] * fringe::corrected(x);
      case ModelId::RamseyDet: return p[0] * fringe::detected(x);
      case ModelId::RamseyRawDepol: {
        double q = 1 - p[1];
        return p[0] * q * q * q * fringe::raw(x);
      }
      case ModelId::RamseyCorrDepol: return p[0] * fringe::corrected_depol(x, p[1]);
      default: return p[0] * fringe::detected_depol(x, p[1]);
    }
  }

 private:
  static constexpr double kFitPi = 3.14159265358979323846;
};

struct FitResult {
  ModelId model = ModelId::ExpDecay;
  std::vector<double> params;
  std::vector<double> ci_half_width;  // 95%
  double residual_norm = 0.0;
  bool converged = false;
  bool degenerate = false;

  nlohmann::json to_json() const {
    return nlohmann::json{{"model", to_string(model)},
                          {"params", params},
                          {"ci", ci_half_width},
                          {"residual_norm", residual_norm},
                          {"converged", converged},
                          {"degenerate", degenerate}};
  }
};

struct LsPoint {
  double x;
  double y;
  double sigma;  // <= 0 means unit weight
};

struct MlePoint {
  double x;   // fringe phase
  size_t k;   // successes (outcome +1)
  size_t n;   // trials
};

namespace detail {

constexpr double kNmTol = 1e-10;

/// Derivative-free Nelder-Mead over a box, parameters projected into
/// bounds. Returns the best point found from the given start.
inline double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& lo, const std::vector<double>& hi,
                          std::vector<double>& point) {
  size_t d = point.size();
  auto clamp = [&](std::vector<double> p) {
    for (size_t i = 0; i < d; ++i) p[i] = std::min(hi[i], std::max(lo[i], p[i]));
    return p;
  };
  std::vector<std::vector<double>> simplex{clamp(point)};
  for (size_t i = 0; i < d; ++i) {
    auto v = simplex[0];
    double step = 0.1 * (hi[i] - lo[i]);
    v[i] = v[i] + step <= hi[i] ? v[i] + step : v[i] - step;
    simplex.push_back(clamp(v));
  }
  std::vector<double> fv(d + 1);
  for (size_t i = 0; i <= d; ++i) fv[i] = f(simplex[i]);

  size_t max_iter = 600 * (d + 1);
  for (size_t iter = 0; iter < max_iter; ++iter) {
    // Order simplex.
    std::vector<size_t> idx(d + 1);
    for (size_t i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> sx(d + 1);
    std::vector<double> sf(d + 1);
    for (size_t i = 0; i <= d; ++i) {
      sx[i] = simplex[idx[i]];
      sf[i] = fv[idx[i]];
    }
    simplex = sx;
    fv = sf;
    if (fv[d] - fv[0] <= kNmTol * (std::abs(fv[0]) + 1e-12)) break;

    std::vector<double> centroid(d, 0.0);
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= double(d);

    auto blend = [&](double t) {
      std::vector<double> p(d);
      for (size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (centroid[j] - simplex[d][j]);
      return clamp(p);
    };
    auto reflect = blend(1.0);
    double fr = f(reflect);
    if (fr < fv[0]) {
      auto expand = blend(2.0);
      double fe = f(expand);
      simplex[d] = fe < fr ? expand : reflect;
      fv[d] = std::min(fe, fr);
    } else if (fr < fv[d - 1]) {
      simplex[d] = reflect;
      fv[d] = fr;
    } else {
      auto contract = blend(fr < fv[d] ? 0.5 : -0.5);
      double fc = f(contract);
      if (fc < std::min(fr, fv[d])) {
        simplex[d] = contract;
        fv[d] = fc;
      } else {
        for (size_t i = 1; i <= d; ++i) {
          for (size_t j = 0; j < d; ++j) simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
          simplex[i] = clamp(simplex[i]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  size_t best = 0;
  for (size_t i = 1; i <= d; ++i)
    if (fv[i] < fv[best]) best = i;
  point = simplex[best];
  return fv[best];
}

/// Deterministic multi-start: fixed fractional positions across the box
/// plus the caller's init; ties resolve to the lowest start index.
inline double multi_start_minimize(const std::function<double(const std::vector<double>&)>& f,
                                   const std::vector<double>& lo, const std::vector<double>& hi,
                                   const std::vector<double>& init, std::vector<double>& best_point) {
  size_t d = lo.size();
  static const double fractions[5][2] = {{0.5, 0.5}, {0.25, 0.25}, {0.75, 0.75}, {0.3, 0.7}, {0.9, 0.1}};
  std::vector<std::vector<double>> starts;
  if (!init.empty()) starts.push_back(init);
  for (const auto& fr : fractions) {
    std::vector<double> p(d);
    for (size_t j = 0; j < d; ++j) p[j] = lo[j] + fr[j % 2] * (hi[j] - lo[j]);
    starts.push_back(p);
  }
  double best = 0;
  bool first = true;
  for (auto& start : starts) {
    std::vector<double> point = start;
    double val = nelder_mead(f, lo, hi, point);
    if (first || val < best) {
      best = val;
      best_point = point;
      first = false;
    }
  }
  return best;
}

/// 95% half-widths from the Gauss-Newton curvature at the optimum
/// (finite-difference Jacobian; models here have at most two parameters).
inline std::vector<double> ls_intervals(const ModelFn& model, const std::vector<LsPoint>& data,
                                        const std::vector<double>& p, double ssr) {
  size_t d = p.size(), n = data.size();
  std::array<double, 4> jtj{0, 0, 0, 0};
  for (const auto& pt : data) {
    double w = pt.sigma > 0 ? 1.0 / pt.sigma : 1.0;
    std::array<double, 2> grad{0, 0};
    for (size_t j = 0; j < d; ++j) {
      double h = std::max(1e-7, 1e-7 * std::abs(p[j]));
      auto pp = p, pm = p;
      pp[j] += h;
      pm[j] -= h;
      grad[j] = w * (model.eval(pp, pt.x) - model.eval(pm, pt.x)) / (2 * h);
    }
    jtj[0] += grad[0] * grad[0];
    jtj[1] += grad[0] * grad[1];
    jtj[2] += grad[1] * grad[0];
    jtj[3] += grad[1] * grad[1];
  }
  double s2 = n > d ? ssr / double(n - d) : 1.0;
  std::vector<double> out(d, 0.0);
  if (d == 1) {
    out[0] = jtj[0] > 0 ? 1.96 * std::sqrt(s2 / jtj[0]) : 0.0;
  } else {
    double det = jtj[0] * jtj[3] - jtj[1] * jtj[2];
    if (det > 0) {
      out[0] = 1.96 * std::sqrt(s2 * jtj[3] / det);
      out[1] = 1.96 * std::sqrt(s2 * jtj[0] / det);
    }
  }
  return out;
}

}  // namespace detail

/// Weighted nonlinear least squares via derivative-free simplex descent
/// with deterministic multi-start over the bound box. Data ordering cannot
/// matter: points are sorted before accumulation.
inline FitResult fit_least_squares(ModelId id, std::vector<LsPoint> data,
                                   std::vector<double> init = {}) {
  ModelFn model = ModelFn::get(id);
  if (data.size() < model.n_params()) {
    throw std::invalid_argument("fit_least_squares: fewer points than parameters");
  }
  std::sort(data.begin(), data.end(), [](const LsPoint& a, const LsPoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  double x_span = std::max(1e-12, std::abs(data.back().x));
  std::vector<double> lo, hi;
  for (const auto& ps : model.params) {
    lo.push_back(ps.scales_with_x ? ps.lo * x_span : ps.lo);
    hi.push_back(ps.scales_with_x ? ps.hi * x_span : ps.hi);
  }
  auto ssr = [&](const std::vector<double>& p) {
    double acc = 0;
    for (const auto& pt : data) {
      double r = (pt.y - model.eval(p, pt.x)) / (pt.sigma > 0 ? pt.sigma : 1.0);
      acc += r * r;
    }
    return acc;
  };
  FitResult out;
  out.model = id;
  double best = detail::multi_start_minimize(ssr, lo, hi, init, out.params);
  out.residual_norm = std::sqrt(best);
  out.converged = std::isfinite(best);
  out.ci_half_width = detail::ls_intervals(model, data, out.params, best);
  // Decay models lose their time constant when the amplitude vanishes.
  if ((id == ModelId::ExpDecay || id == ModelId::GaussDecay || id == ModelId::DecaySinusoid) &&
      std::abs(out.params[0]) < 1e-4) {
    out.degenerate = true;
  }
  return out;
}

/// Binomial maximum likelihood for fringe data: k of n shots decoded +1 at
/// phase x, success probability (1 + model(x))/2 clipped away from 0 and 1.
/// Intervals are profile-likelihood at delta logL = 1.92.
inline FitResult fit_binomial_mle(ModelId id, std::vector<MlePoint> data,
                                  std::vector<double> init = {}) {
  ModelFn model = ModelFn::get(id);
  if (data.empty()) throw std::invalid_argument("fit_binomial_mle: empty data");
  for (const auto& pt : data) {
    if (pt.n < 1 || pt.k > pt.n) throw std::invalid_argument("fit_binomial_mle: bad counts");
  }
  std::sort(data.begin(), data.end(), [](const MlePoint& a, const MlePoint& b) {
    return a.x != b.x ? a.x < b.x : a.k < b.k;
  });
  std::vector<double> lo, hi;
  for (const auto& ps : model.params) {
    lo.push_back(ps.lo);
    hi.push_back(ps.hi);
  }
  auto neg_log_l = [&](const std::vector<double>& p) {
    double acc = 0;
    for (const auto& pt : data) {
      double f = std::clamp(model.eval(p, pt.x), -1.0 + 1e-9, 1.0 - 1e-9);
      double prob = 0.5 * (1.0 + f);
      acc -= double(pt.k) * std::log(prob) + double(pt.n - pt.k) * std::log1p(-prob);
    }
    return acc;
  };
  FitResult out;
  out.model = id;
  double best = detail::multi_start_minimize(neg_log_l, lo, hi, init, out.params);
  out.residual_norm = best;
  out.converged = std::isfinite(best);

  // Profile each parameter to the 1.92 log-likelihood drop.
  size_t d = model.n_params();
  out.ci_half_width.assign(d, 0.0);
  for (size_t j = 0; j < d; ++j) {
    auto profile = [&](double value) {
      if (d == 1) return neg_log_l({value});
      // Re-optimize the other parameter with the j-th fixed.
      size_t other = 1 - j;
      std::vector<double> plo{lo[other]}, phi{hi[other]};
      std::vector<double> pbest{out.params[other]};
      auto f1 = [&](const std::vector<double>& q) {
        std::vector<double> full(2);
        full[j] = value;
        full[other] = q[0];
        return neg_log_l(full);
      };
      return detail::nelder_mead(f1, plo, phi, pbest);
    };
    auto cross = [&](double direction) {
      double step = 0.02 * (hi[j] - lo[j]);
      double prev = out.params[j];
      for (int it = 0; it < 200; ++it) {
        double cand = prev + direction * step;
        if (cand < lo[j] || cand > hi[j]) return std::abs((cand < lo[j] ? lo[j] : hi[j]) - out.params[j]);
        if (profile(cand) - best > 1.92) {
          // Bisect between prev and cand.
          double a = prev, b = cand;
          for (int bi = 0; bi < 40; ++bi) {
            double mid = 0.5 * (a + b);
            (profile(mid) - best > 1.92 ? b : a) = mid;
          }
          return std::abs(0.5 * (a + b) - out.params[j]);
        }
        prev = cand;
      }
      return std::abs((direction > 0 ? hi[j] : lo[j]) - out.params[j]);
    };
    out.ci_half_width[j] = 0.5 * (cross(+1.0) + cross(-1.0));
  }
  return out;
}

}  // namespace bslab

#endif  // BSLAB_FITS_HPP
