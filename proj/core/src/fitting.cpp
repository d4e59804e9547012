// Copyright 2026 The qcal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcal/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "qcal/errors.hpp"

namespace qcal {
namespace {

constexpr double kPi = 3.14159265358979323846;
// Relative finite-difference step. Truncation error grows with the step
// while subtractive cancellation grows as it shrinks; 3e-9 balances the two
// for parameters whose curvature scale sits well below their magnitude
// (a GHz-scale center against a MHz-scale width) as well as for the
// near-linear columns.
const double kFdStep = 3e-9;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0
                   : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

// Solves the symmetric positive definite system A x = b in place.
// Returns false when the Cholesky factorization breaks down.
bool cholesky_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                    std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return false;
        a[i][i] = std::sqrt(s);
      } else {
        a[i][j] = s / a[j][j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k][ii] * x[k];
    x[ii] = s / a[ii][ii];
  }
  return true;
}

// Inverse of a symmetric positive definite matrix; false on breakdown.
bool spd_inverse(const std::vector<std::vector<double>>& a,
                 std::vector<std::vector<double>>& inv) {
  const std::size_t n = a.size();
  inv.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<double> e(n, 0.0), x(n, 0.0);
    e[col] = 1.0;
    if (!cholesky_solve(a, e, x)) return false;
    for (std::size_t r = 0; r < n; ++r) inv[r][col] = x[r];
  }
  return true;
}

std::vector<double> residuals(const ModelFn& model, std::span<const double> x,
                              std::span<const double> y,
                              std::span<const double> p) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = model(x[i], p) - y[i];
  return r;
}

double sum_sq(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return s;
}

void clamp_into(std::vector<double>& p, const std::optional<Bounds>& bounds) {
  if (!bounds) return;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j < bounds->lower.size()) p[j] = std::max(p[j], bounds->lower[j]);
    if (j < bounds->upper.size()) p[j] = std::min(p[j], bounds->upper[j]);
  }
}

}  // namespace

double FitResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == name) return values[i];
  throw DimensionMismatch("fit '" + model + "' has no parameter '" + name + "'");
}

double FitResult::sigma(const std::string& name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i)
    if (param_names[i] == name) return sigmas[i];
  throw DimensionMismatch("fit '" + model + "' has no parameter '" + name + "'");
}

double robust_noise(std::span<const double> y) {
  if (y.size() < 2) return 0.0;
  std::vector<double> diff(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    diff[i] = std::fabs(y[i + 1] - y[i]);
  // |N(0, sigma sqrt(2))| has median 0.6745 * sigma * sqrt(2).
  return 1.4826 * median_of(std::move(diff)) / std::sqrt(2.0);
}

std::vector<std::vector<double>> forward_jacobian(const ModelFn& model,
                                                  std::span<const double> x,
                                                  std::span<const double> p) {
  const std::size_t n = x.size(), k = p.size();
  std::vector<double> base(n), pp(p.begin(), p.end());
  for (std::size_t i = 0; i < n; ++i) base[i] = model(x[i], pp);
  std::vector<std::vector<double>> jac(n, std::vector<double>(k));
  for (std::size_t j = 0; j < k; ++j) {
    double h = kFdStep * std::fabs(pp[j]);
    if (h == 0.0) h = kFdStep;
    double saved = pp[j];
    volatile double shifted = saved + h;  // exactly representable step
    h = shifted - saved;
    pp[j] = shifted;
    for (std::size_t i = 0; i < n; ++i)
      jac[i][j] = (model(x[i], pp) - base[i]) / h;
    pp[j] = saved;
  }
  return jac;
}

std::vector<std::vector<double>> central_jacobian(const ModelFn& model,
                                                  std::span<const double> x,
                                                  std::span<const double> p) {
  const std::size_t n = x.size(), k = p.size();
  std::vector<double> pp(p.begin(), p.end());
  std::vector<std::vector<double>> jac(n, std::vector<double>(k));
  for (std::size_t j = 0; j < k; ++j) {
    double h = kFdStep * std::fabs(pp[j]);
    if (h == 0.0) h = kFdStep;
    double saved = pp[j];
    volatile double up = saved + h;
    volatile double dn = saved - h;
    pp[j] = up;
    std::vector<double> hi(n);
    for (std::size_t i = 0; i < n; ++i) hi[i] = model(x[i], pp);
    pp[j] = dn;
    for (std::size_t i = 0; i < n; ++i)
      jac[i][j] = (hi[i] - model(x[i], pp)) / (up - dn);
    pp[j] = saved;
  }
  return jac;
}

FitResult least_squares(const ModelFn& model, std::span<const double> x,
                        std::span<const double> y, std::vector<double> init,
                        const std::optional<Bounds>& bounds,
                        const FitOptions& options) {
  if (x.size() != y.size())
    throw DimensionMismatch("x has " + std::to_string(x.size()) +
                            " points, y has " + std::to_string(y.size()));
  if (x.size() < init.size())
    throw DimensionMismatch("need at least as many points as parameters");

  const std::size_t n = x.size(), k = init.size();
  FitResult out;
  out.param_names.resize(k);
  clamp_into(init, bounds);
  std::vector<double> p = init;
  std::vector<double> r = residuals(model, x, y, p);
  double rss = sum_sq(r);
  double lambda = 1e-3;
  bool singular = false;

  int iter = 0;
  for (; iter < options.max_iterations && !out.converged && !singular; ++iter) {
    auto jac = forward_jacobian(model, x, p);
    std::vector<std::vector<double>> jtj(k, std::vector<double>(k, 0.0));
    std::vector<double> g(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        g[a] += jac[i][a] * r[i];
        for (std::size_t b = 0; b <= a; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
      }
    }
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) jtj[a][b] = jtj[b][a];

    double pnorm = std::sqrt(sum_sq(p));
    bool accepted = false;
    while (!accepted) {
      auto damped = jtj;
      for (std::size_t a = 0; a < k; ++a) {
        double d = jtj[a][a];
        damped[a][a] = d > 0.0 ? d * (1.0 + lambda) : 1e-300;
      }
      std::vector<double> neg_g(k), step(k, 0.0);
      for (std::size_t a = 0; a < k; ++a) neg_g[a] = -g[a];
      if (!cholesky_solve(damped, neg_g, step)) {
        singular = true;
        out.diagnostic = "SingularJacobian";
        break;
      }
      std::vector<double> pn(k);
      for (std::size_t a = 0; a < k; ++a) pn[a] = p[a] + step[a];
      clamp_into(pn, bounds);
      std::vector<double> actual(k);
      for (std::size_t a = 0; a < k; ++a) actual[a] = pn[a] - p[a];
      if (std::sqrt(sum_sq(actual)) <=
          options.rel_tol * (pnorm + options.rel_tol)) {
        out.converged = true;
        // Take the step anyway if it still improves.
        std::vector<double> rn = residuals(model, x, y, pn);
        double rss_n = sum_sq(rn);
        if (rss_n < rss) {
          p = pn;
          r = std::move(rn);
          rss = rss_n;
        }
        break;
      }
      std::vector<double> rn = residuals(model, x, y, pn);
      double rss_n = sum_sq(rn);
      if (std::isfinite(rss_n) && rss_n < rss) {
        p = pn;
        r = std::move(rn);
        rss = rss_n;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e18) {
          // No direction improves; the next step would be negligible.
          out.converged = true;
          break;
        }
      }
    }
  }

  out.iterations = iter;
  out.values = p;
  out.rss = rss;
  out.sigmas.assign(k, 0.0);

  // Covariance from the undamped normal matrix at the solution.
  auto jac = forward_jacobian(model, x, p);
  std::vector<std::vector<double>> jtj(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
  std::vector<std::vector<double>> cov;
  if (spd_inverse(jtj, cov)) {
    double s2 = n > k ? rss / static_cast<double>(n - k) : 0.0;
    for (std::size_t a = 0; a < k; ++a)
      out.sigmas[a] = std::sqrt(std::max(cov[a][a] * s2, 0.0));
  } else {
    out.converged = false;
    out.diagnostic = "SingularJacobian";
  }
  return out;
}

ModelFn model_function(const std::string& model) {
  if (model == "lorentzian") {
    return [](double x, std::span<const double> p) {
      double hw = 0.5 * p[1];
      double d = x - p[0];
      return p[3] + p[2] * hw * hw / (d * d + hw * hw);
    };
  }
  if (model == "oscillation") {
    return [](double x, std::span<const double> p) {
      return p[2] * std::cos(2.0 * kPi * p[0] * x + p[1]) + p[3];
    };
  }
  if (model == "damped_oscillation") {
    return [](double x, std::span<const double> p) {
      return p[2] * std::cos(2.0 * kPi * p[0] * x + p[1]) *
                 std::exp(-x / p[4]) +
             p[3];
    };
  }
  if (model == "exp_decay") {
    return [](double x, std::span<const double> p) {
      return p[1] * std::exp(-x / p[0]) + p[2];
    };
  }
  if (model == "rb_decay") {
    return [](double x, std::span<const double> p) {
      return p[0] * std::pow(p[1], x) + p[2];
    };
  }
  if (model == "filtered_rb_decay") {
    return [](double x, std::span<const double> p) {
      return p[0] * std::pow(p[1], x);
    };
  }
  throw DimensionMismatch("unknown model '" + model + "'");
}

FitResult fit_lorentzian(std::span<const double> x, std::span<const double> y,
                         PeakSign sign) {
  if (x.size() != y.size()) throw DimensionMismatch("x/y length mismatch");
  if (x.size() < 8)
    throw DimensionMismatch("lorentzian fit needs at least 8 points");
  const std::size_t n = x.size();

  double offset0 = median_of({y.begin(), y.end()});
  // 3-point moving average keeps single-sample noise spikes from faking a
  // feature.
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i > 0 ? i - 1 : 0;
    std::size_t hi = i + 1 < n ? i + 1 : n - 1;
    smooth[i] = (y[lo] + y[i] + y[hi]) / 3.0;
  }
  auto deviation = [&](double v) {
    return sign == PeakSign::dip ? offset0 - v : v - offset0;
  };
  std::size_t ext_s = 0, ext_r = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (deviation(smooth[i]) > deviation(smooth[ext_s])) ext_s = i;
    if (deviation(y[i]) > deviation(y[ext_r])) ext_r = i;
  }
  double depth = deviation(smooth[ext_s]);
  double noise = robust_noise(y);
  if (depth <= 3.0 * noise)
    throw NoFeature("extremum depth " + std::to_string(depth) +
                    " below 3x noise estimate " + std::to_string(noise));
  if (ext_s == 0 || ext_s == n - 1)
    throw NoFeature("extremum sits at the sweep edge; feature outside the "
                    "window");

  double mean_dx = (x.back() - x.front()) / static_cast<double>(n - 1);
  int above = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (deviation(y[i]) > 0.5 * depth) ++above;
  double fwhm0 = std::max(1, above) * std::fabs(mean_dx);
  double amp0 = sign == PeakSign::dip ? -depth : depth;

  FitResult fit = least_squares(model_function("lorentzian"), x, y,
                                {x[ext_r], fwhm0, amp0, offset0});
  fit.model = "lorentzian";
  fit.param_names = {"center", "fwhm", "amplitude", "offset"};
  fit.values[1] = std::fabs(fit.values[1]);
  return fit;
}

FitResult fit_oscillation(std::span<const double> x, std::span<const double> y,
                          bool damped) {
  if (x.size() != y.size()) throw DimensionMismatch("x/y length mismatch");
  if (x.size() < 10)
    throw DimensionMismatch("oscillation fit needs at least 10 points");
  const std::size_t n = x.size();
  const double span = x.back() - x.front();
  if (span <= 0) throw DimensionMismatch("x must be increasing");

  double mean = mean_of(y);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = y[i] - mean;

  // Frequency seed from the DFT peak of the mean-subtracted data.
  std::size_t kmax = n / 2;
  std::vector<double> mag(kmax + 1, 0.0);
  std::vector<std::complex<double>> coef(kmax + 1);
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::complex<double> c{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      double a = -2.0 * kPi * static_cast<double>(k * j) / n;
      c += z[j] * std::complex<double>(std::cos(a), std::sin(a));
    }
    coef[k] = c;
    mag[k] = std::abs(c);
  }
  std::size_t kpk = 1;
  for (std::size_t k = 2; k <= kmax; ++k)
    if (mag[k] > mag[kpk]) kpk = k;
  std::vector<double> others;
  for (std::size_t k = 1; k <= kmax; ++k)
    if (k != kpk) others.push_back(mag[k]);
  double floor = others.empty() ? 0.0 : median_of(std::move(others));
  if (mag[kpk] <= 3.0 * floor)
    throw NoOscillation("spectral peak " + std::to_string(mag[kpk]) +
                        " below 3x noise floor " + std::to_string(floor));

  double dx = span / static_cast<double>(n - 1);
  double f0 = static_cast<double>(kpk) / (n * dx);
  double amp0 = 2.0 * mag[kpk] / n;
  double phi0 = std::arg(coef[kpk]) - 2.0 * kPi * f0 * x.front();

  std::vector<double> init = {f0, phi0, amp0, mean};
  std::string model = "oscillation";
  std::optional<Bounds> bounds;
  if (damped) {
    model = "damped_oscillation";
    init.push_back(span);
    Bounds b;
    b.lower = {0.0, -1e30, -1e30, -1e30, span * 1e-6};
    bounds = b;
  }
  FitResult fit = least_squares(model_function(model), x, y, init, bounds);
  fit.model = model;
  fit.param_names = {"frequency", "phase", "amplitude", "offset"};
  if (damped) fit.param_names.push_back("decay_time");

  // Canonical form: positive frequency and amplitude, phase in (-pi, pi].
  if (fit.values[0] < 0) {
    fit.values[0] = -fit.values[0];
    fit.values[1] = -fit.values[1];
  }
  if (fit.values[2] < 0) {
    fit.values[2] = -fit.values[2];
    fit.values[1] += kPi;
  }
  fit.values[1] = std::remainder(fit.values[1], 2.0 * kPi);

  if (fit.values[0] * span < 0.75)
    throw NoOscillation("fewer than 0.75 oscillation periods in window");
  if (fit.values[2] <= 2.0 * fit.sigmas[2])
    throw NoOscillation("amplitude consistent with zero at 2 sigma");
  return fit;
}

FitResult fit_exp_decay(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("x/y length mismatch");
  if (x.size() < 6)
    throw DimensionMismatch("exponential fit needs at least 6 points");
  const std::size_t n = x.size();
  const double span = x.back() - x.front();
  if (span <= 0) throw DimensionMismatch("x must be increasing");

  double ymin = *std::min_element(y.begin(), y.end());
  double ymax = *std::max_element(y.begin(), y.end());
  if (ymax - ymin <= 0.0)
    throw NoDecay("amplitude consistent with 0 (constant data)");

  // Log-linear seed on (y - min).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double zi = y[i] - ymin;
    if (zi <= 0) continue;
    double ly = std::log(zi);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++m;
  }
  double tau0 = 0.5 * span, amp0 = ymax - ymin;
  if (m >= 2) {
    double denom = m * sxx - sx * sx;
    if (denom > 0) {
      double slope = (m * sxy - sx * sy) / denom;
      double intercept = (sy - slope * sx) / m;
      if (slope < 0) {
        tau0 = -1.0 / slope;
        amp0 = std::exp(intercept);
      }
    }
  }

  Bounds b;
  b.lower = {span * 1e-6, -1e30, -1e30};
  FitResult fit = least_squares(model_function("exp_decay"), x, y,
                                {tau0, amp0, ymin}, b);
  fit.model = "exp_decay";
  fit.param_names = {"t_decay", "amplitude", "offset"};

  double tau = fit.values[0];
  if (tau > 100.0 * span)
    throw NoDecay("best-fit decay time exceeds 100x the sampled span");
  if (std::fabs(fit.values[1]) <= 2.0 * fit.sigmas[1])
    throw NoDecay("amplitude consistent with 0 at 2 sigma");
  if (span < tau)
    fit.diagnostic = "window spans less than one decay constant";
  return fit;
}

FitResult fit_rb_decay(std::span<const double> depths,
                       std::span<const double> survival) {
  if (depths.size() != survival.size())
    throw DimensionMismatch("depths/survival length mismatch");
  std::vector<double> distinct(depths.begin(), depths.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (distinct.size() < 4)
    throw DimensionMismatch("need at least 4 distinct depths");
  for (double s : survival)
    if (s < -1e-9 || s > 1.0 + 1e-9)
      throw DimensionMismatch("survival outside [0,1]");

  double smin = *std::min_element(survival.begin(), survival.end());
  double smax = *std::max_element(survival.begin(), survival.end());
  if (smax - smin <= 1e-12) {
    // Constant survival carries no decay information; the noiseless-device
    // reading is p = 1.
    FitResult flat;
    flat.model = "rb_decay";
    flat.param_names = {"A", "p", "B"};
    double mean = mean_of(survival);
    flat.values = {0.0, 1.0, mean};
    flat.sigmas = {0.0, 0.0, 0.0};
    double rss = 0.0;
    for (double s : survival) rss += (s - mean) * (s - mean);
    flat.rss = rss;
    flat.converged = true;
    flat.derived["avg_gate_fidelity"] = 1.0;
    return flat;
  }

  auto depth_mean = [&](double d) {
    double s = 0.0;
    int c = 0;
    for (std::size_t i = 0; i < depths.size(); ++i)
      if (depths[i] == d) {
        s += survival[i];
        ++c;
      }
    return s / c;
  };
  double m_first = distinct.front(), m_last = distinct.back();
  double m_mid = distinct[distinct.size() / 2];
  double b0 = depth_mean(m_last);
  double first = depth_mean(m_first), mid = depth_mean(m_mid);
  double p0 = 0.95;
  if (std::fabs(first - b0) > 1e-12 && (mid - b0) / (first - b0) > 0) {
    p0 = std::pow((mid - b0) / (first - b0), 1.0 / (m_mid - m_first));
    p0 = std::clamp(p0, 0.5, 0.99999);
  }
  double a0 = (first - b0) / std::pow(p0, m_first);

  Bounds b;
  b.lower = {-1e30, 1e-9, -1e30};
  b.upper = {1e30, 1.0, 1e30};
  FitResult fit = least_squares(model_function("rb_decay"), depths, survival,
                                {a0, p0, b0}, b);
  fit.model = "rb_decay";
  fit.param_names = {"A", "p", "B"};
  for (double v : fit.values)
    if (!std::isfinite(v)) throw FitDiverged("non-finite decay estimate");
  fit.derived["avg_gate_fidelity"] = 1.0 - (1.0 - fit.values[1]) / 2.0;
  return fit;
}

FitResult train_classifier(std::span<const IqPoint> ground,
                           std::span<const IqPoint> excited) {
  if (ground.size() < 100 || excited.size() < 100)
    throw DimensionMismatch("classifier training needs >= 100 shots per state");

  auto mean2 = [](std::span<const IqPoint> pts) {
    double mi = 0, mq = 0;
    for (const auto& p : pts) {
      mi += p.i;
      mq += p.q;
    }
    return IqPoint{mi / pts.size(), mq / pts.size()};
  };
  IqPoint m0 = mean2(ground), m1 = mean2(excited);
  auto spread2 = [](std::span<const IqPoint> pts, const IqPoint& m) {
    double s = 0;
    for (const auto& p : pts)
      s += (p.i - m.i) * (p.i - m.i) + (p.q - m.q) * (p.q - m.q);
    return s / (2.0 * pts.size());  // per-axis variance
  };
  double pooled =
      std::sqrt(0.5 * (spread2(ground, m0) + spread2(excited, m1)));
  double di = m1.i - m0.i, dq = m1.q - m0.q;
  double sep = std::hypot(di, dq);
  if (sep < pooled / 10.0)
    throw DegenerateClouds("cloud separation " + std::to_string(sep) +
                           " below sigma/10 = " + std::to_string(pooled / 10));

  double angle = -std::atan2(dq, di);
  double ca = std::cos(angle), sa = std::sin(angle);
  auto project = [&](const IqPoint& p) { return ca * p.i - sa * p.q; };

  // Scan thresholds over the merged sorted projections; maximize
  // 1 - (P(assign 1 | 0) + P(assign 0 | 1)) / 2.
  struct Tagged {
    double v;
    int label;
  };
  std::vector<Tagged> pts;
  pts.reserve(ground.size() + excited.size());
  for (const auto& p : ground) pts.push_back({project(p), 0});
  for (const auto& p : excited) pts.push_back({project(p), 1});
  std::sort(pts.begin(), pts.end(),
            [](const Tagged& a, const Tagged& b) { return a.v < b.v; });

  const double n0 = static_cast<double>(ground.size());
  const double n1 = static_cast<double>(excited.size());
  // Threshold below all points: every shot assigned "excited".
  double err = 1.0;  // P(1|0) = 1, P(0|1) = 0
  double best_err = err;
  std::size_t best_after = 0;  // threshold placed after this many points
  std::size_t g_below = 0, e_below = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].label == 0)
      ++g_below;
    else
      ++e_below;
    if (i + 1 < pts.size() && pts[i + 1].v == pts[i].v) continue;
    err = 0.5 * ((n0 - g_below) / n0 + e_below / n1);
    if (err < best_err) {
      best_err = err;
      best_after = i + 1;
    }
  }
  double threshold;
  if (best_after == 0)
    threshold = pts.front().v - 1.0;
  else if (best_after >= pts.size())
    threshold = pts.back().v + 1.0;
  else
    threshold = 0.5 * (pts[best_after - 1].v + pts[best_after].v);

  FitResult out;
  out.model = "iq_classifier";
  out.param_names = {"iq_angle", "threshold", "assignment_fidelity"};
  out.values = {angle, threshold, 1.0 - best_err};
  out.sigmas = {0.0, 0.0, 0.0};
  out.converged = true;
  out.derived["separation"] = sep;
  out.derived["sigma_pooled"] = pooled;
  return out;
}

std::vector<double> evaluate_model(const std::string& model,
                                   const std::map<std::string, double>& params,
                                   std::span<const double> xs) {
  static const std::map<std::string, std::vector<std::string>> kOrder = {
      {"lorentzian", {"center", "fwhm", "amplitude", "offset"}},
      {"oscillation", {"frequency", "phase", "amplitude", "offset"}},
      {"damped_oscillation",
       {"frequency", "phase", "amplitude", "offset", "decay_time"}},
      {"exp_decay", {"t_decay", "amplitude", "offset"}},
      {"rb_decay", {"A", "p", "B"}},
      {"filtered_rb_decay", {"A", "p"}},
  };
  auto it = kOrder.find(model);
  if (it == kOrder.end())
    throw DimensionMismatch("unknown model '" + model + "'");
  std::vector<double> p;
  for (const auto& name : it->second) {
    auto pit = params.find(name);
    if (pit == params.end())
      throw DimensionMismatch("model '" + model + "' missing parameter '" +
                              name + "'");
    p.push_back(pit->second);
  }
  ModelFn fn = model_function(model);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i], p);
  return out;
}

}  // namespace qcal
