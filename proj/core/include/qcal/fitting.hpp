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

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qcal {

/// Named parameter estimates with 1-sigma uncertainties from the linearized
/// covariance, plus fit diagnostics.
struct FitResult {
  std::string model;
  std::vector<std::string> param_names;
  std::vector<double> values;
  std::vector<double> sigmas;
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string diagnostic;
  std::map<std::string, double> derived;

  double value(const std::string& name) const;
  double sigma(const std::string& name) const;
};

/// Scalar model y = f(x; params).
using ModelFn =
    std::function<double(double, std::span<const double>)>;

struct FitOptions {
  int max_iterations = 200;
  double rel_tol = 1e-8;
};

/// Component-wise box bounds; empty vectors mean unbounded.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Damped Gauss-Newton (Levenberg-Marquardt schedule, lambda starts at 1e-3,
/// x10 on a rejected step, /10 on an accepted one) with a forward-difference
/// Jacobian. Converges when the relative parameter change drops below
/// rel_tol or after max_iterations. Covariance is (J^T J)^-1 scaled by the
/// residual variance.
FitResult least_squares(const ModelFn& model, std::span<const double> x,
                        std::span<const double> y,
                        std::vector<double> init,
                        const std::optional<Bounds>& bounds = std::nullopt,
                        const FitOptions& options = {});

enum class PeakSign { dip, peak };

/// Lorentzian feature fit; params {center, fwhm, amplitude, offset} with
/// amplitude signed (negative for a dip). Throws NoFeature when the
/// extremum depth stays below 3x the MAD-based noise estimate.
FitResult fit_lorentzian(std::span<const double> x, std::span<const double> y,
                         PeakSign sign);

/// Cosine fit A*cos(2 pi f x + phi) * exp(-x/tau) + B (tau only when
/// damped); params {frequency, phase, amplitude, offset[, decay_time]}.
/// Frequency is seeded from the DFT peak of the mean-subtracted data.
FitResult fit_oscillation(std::span<const double> x, std::span<const double> y,
                          bool damped);

/// Exponential decay A*exp(-x/tau) + B; params {t_decay, amplitude, offset}.
FitResult fit_exp_decay(std::span<const double> x, std::span<const double> y);

/// Benchmarking decay A*p^m + B over integer depths, 0 < p <= 1; the
/// derived map carries avg_gate_fidelity = 1 - (1-p)/2.
FitResult fit_rb_decay(std::span<const double> depths,
                       std::span<const double> survival);

struct IqPoint {
  double i = 0.0;
  double q = 0.0;
};

/// Rotates the IQ plane so the inter-mean axis is the first coordinate and
/// picks the threshold maximizing the empirical assignment fidelity.
/// Result model is "iq_classifier" with params {iq_angle, threshold,
/// assignment_fidelity}.
FitResult train_classifier(std::span<const IqPoint> ground,
                           std::span<const IqPoint> excited);

/// Evaluates a shipped model by name from named parameters (used to draw
/// fitted curves without re-running the fit).
std::vector<double> evaluate_model(const std::string& model,
                                   const std::map<std::string, double>& params,
                                   std::span<const double> xs);

/// Finite-difference Jacobians of the residual vector, exposed for
/// verification; rows follow x, columns follow params.
std::vector<std::vector<double>> forward_jacobian(const ModelFn& model,
                                                  std::span<const double> x,
                                                  std::span<const double> p);
std::vector<std::vector<double>> central_jacobian(const ModelFn& model,
                                                  std::span<const double> x,
                                                  std::span<const double> p);

/// Outlier-resistant noise scale: 1.4826 times the median absolute
/// first difference, rescaled to a per-sample sigma. Differencing keeps a
/// smooth feature from inflating its own noise floor.
double robust_noise(std::span<const double> y);

/// Shipped model functions by name, shared by the fit entry points above.
ModelFn model_function(const std::string& model);

}  // namespace qcal
