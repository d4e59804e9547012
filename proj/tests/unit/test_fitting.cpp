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

#include <doctest.h>

#include <cmath>
#include <random>

#include "qcal/errors.hpp"
#include "qcal/fitting.hpp"
#include "support.hpp"

using namespace qcal;

TEST_SUITE_BEGIN("fitting");

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  return out;
}

double binomial_mean(std::mt19937& gen, double p, int n) {
  std::binomial_distribution<int> dist(n, std::clamp(p, 0.0, 1.0));
  return static_cast<double>(dist(gen)) / n;
}

}  // namespace

TEST_CASE("linear model is recovered to machine precision") {
  std::vector<double> x = linspace(0, 10, 20), y;
  for (double xi : x) y.push_back(2.0 * xi + 1.0);
  ModelFn model = [](double xi, std::span<const double> p) {
    return p[0] * xi + p[1];
  };
  FitResult fit = least_squares(model, x, y, {0.0, 0.0});
  CHECK(fit.converged);
  CHECK(fit.values[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.values[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("constant model reproduces mean and standard error") {
  // Closed-form oracle: the least-squares constant is the sample mean and
  // its 1-sigma uncertainty is s/sqrt(n).
  std::vector<double> x = {0.0, 1.0, 2.0};
  std::vector<double> y = {1.0, 2.0, 4.5};
  double mean = (1.0 + 2.0 + 4.5) / 3.0;
  double var = 0.0;
  for (double yi : y) var += (yi - mean) * (yi - mean);
  var /= 2.0;  // n - k with one parameter
  double sem = std::sqrt(var / 3.0);

  ModelFn model = [](double, std::span<const double> p) { return p[0]; };
  FitResult fit = least_squares(model, x, y, {0.0});
  CHECK(fit.values[0] == doctest::Approx(mean).epsilon(1e-9));
  CHECK(fit.sigmas[0] == doctest::Approx(sem).epsilon(1e-6));
}

TEST_CASE("mismatched lengths are rejected") {
  ModelFn model = [](double, std::span<const double> p) { return p[0]; };
  std::vector<double> x = {1, 2, 3}, y = {1, 2};
  CHECK_THROWS_AS(least_squares(model, x, y, {0.0}), DimensionMismatch);
}

TEST_CASE("a dead parameter is reported as singular, not hidden") {
  // p[1] never enters the model: the normal matrix cannot be inverted.
  ModelFn model = [](double xi, std::span<const double> p) {
    return p[0] * xi;
  };
  std::vector<double> x = {0, 1, 2, 3}, y = {0, 2, 4, 6};
  FitResult fit = least_squares(model, x, y, {1.0, 5.0});
  CHECK(!fit.converged);
  CHECK(fit.diagnostic == "SingularJacobian");
  // The identifiable parameter still converged to its value.
  CHECK(fit.values[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("noiseless lorentzian dip is located precisely") {
  std::vector<double> x = linspace(7.0e9 - 1e7, 7.0e9 + 1e7, 101), y;
  for (double xi : x) {
    double hw = 0.5e6;
    y.push_back(1.0 - 0.8 * hw * hw / ((xi - 7.0e9) * (xi - 7.0e9) + hw * hw));
  }
  FitResult fit = fit_lorentzian(x, y, PeakSign::dip);
  CHECK(fit.converged);
  CHECK(std::fabs(fit.value("center") - 7.0e9) < 1e3);
  CHECK(std::fabs(fit.value("fwhm") - 1.0e6) / 1.0e6 < 0.01);
  CHECK(fit.value("amplitude") < 0);  // dip
}

TEST_CASE("flat noise raises NoFeature") {
  std::mt19937 gen(7);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> x = linspace(0, 1, 100), y;
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(1.0 + noise(gen));
  CHECK_THROWS_AS(fit_lorentzian(x, y, PeakSign::dip), NoFeature);
  std::vector<double> flat(x.size(), 1.0);
  CHECK_THROWS_AS(fit_lorentzian(x, flat, PeakSign::dip), NoFeature);
}

TEST_CASE("noisy lorentzian centers within fwhm/20 (Monte Carlo)") {
  // Oracle: synthesize from known truth with 5%-of-depth noise, measure the
  // 95th-percentile center error over many seeds.
  const double center = 7.0e9, fwhm = 1.0e6, depth = 0.8;
  int ok = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    std::mt19937 gen(1000 + t);
    std::normal_distribution<double> noise(0.0, 0.05 * depth);
    std::vector<double> x = linspace(center - 5e6, center + 5e6, 100), y;
    for (double xi : x) {
      double hw = fwhm / 2;
      y.push_back(1.0 - depth * hw * hw / ((xi - center) * (xi - center) + hw * hw) +
                  noise(gen));
    }
    try {
      FitResult fit = fit_lorentzian(x, y, PeakSign::dip);
      if (std::fabs(fit.value("center") - center) < fwhm / 20) ++ok;
    } catch (const Error&) {
    }
  }
  CHECK(ok >= 95);
}

TEST_CASE("rabi-style oscillation frequency within 1%") {
  std::vector<double> x = linspace(0, 1, 50), y;
  for (double a : x) y.push_back(std::pow(std::sin(kPi * a / 0.8), 2));
  FitResult fit = fit_oscillation(x, y, false);
  CHECK(fit.converged);
  CHECK(fit.value("frequency") == doctest::Approx(1.25).epsilon(0.01));
  // Implied pi-pulse amplitude: first maximum of sin^2.
  CHECK(1.0 / (2.0 * fit.value("frequency")) ==
        doctest::Approx(0.4).epsilon(0.01));
}

TEST_CASE("constant data raises NoOscillation") {
  std::vector<double> x = linspace(0, 1, 40);
  std::vector<double> y(x.size(), 0.5);
  CHECK_THROWS_AS(fit_oscillation(x, y, false), NoOscillation);
}

TEST_CASE("a quarter period is not an oscillation") {
  std::vector<double> x = linspace(0, 0.1, 20), y;
  for (double a : x) y.push_back(std::pow(std::sin(kPi * a / 0.8), 2));
  CHECK_THROWS_AS(fit_oscillation(x, y, false), NoOscillation);
}

TEST_CASE("ramsey synthetic recovers detuning and T2 (Monte Carlo)") {
  // Oracle: binomially sampled fringes from the closed-form model; the
  // detuning lands within 2e4 Hz and T2 within 15% for almost all seeds.
  const double delta = 0.5e6, t2 = 30e-6;
  int ok = 0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    std::mt19937 gen(500 + t);
    std::vector<double> x = linspace(0, 60e-6, 60), y;
    for (double dt : x) {
      double p = 0.5 * (1 + std::cos(2 * kPi * delta * dt) * std::exp(-dt / t2));
      y.push_back(binomial_mean(gen, p, 1024));
    }
    try {
      FitResult fit = fit_oscillation(x, y, true);
      bool good = std::fabs(fit.value("frequency") - delta) < 2e4 &&
                  std::fabs(fit.value("decay_time") - t2) / t2 < 0.15;
      if (good) ++ok;
    } catch (const Error&) {
    }
  }
  CHECK(ok >= trials * 9 / 10);
}

TEST_CASE("noiseless exponential decay within 0.1%") {
  std::vector<double> x = linspace(0, 5e-5, 30), y;
  for (double xi : x) y.push_back(std::exp(-xi / 1e-5));
  FitResult fit = fit_exp_decay(x, y);
  CHECK(fit.converged);
  CHECK(fit.value("t_decay") == doctest::Approx(1e-5).epsilon(1e-3));
}

TEST_CASE("constant unity data raises NoDecay") {
  std::vector<double> x = linspace(0, 1e-4, 20);
  std::vector<double> y(x.size(), 1.0);
  CHECK_THROWS_AS(fit_exp_decay(x, y), NoDecay);
}

TEST_CASE("t1-style decay within 5% at 1024 shots (Monte Carlo)") {
  const double t1 = 50e-6;
  int ok = 0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    std::mt19937 gen(900 + t);
    std::vector<double> x = linspace(0, 150e-6, 40), y;
    for (double dt : x) y.push_back(binomial_mean(gen, std::exp(-dt / t1), 1024));
    try {
      FitResult fit = fit_exp_decay(x, y);
      if (std::fabs(fit.value("t_decay") - t1) / t1 < 0.05) ++ok;
    } catch (const Error&) {
    }
  }
  CHECK(ok >= trials * 9 / 10);
}

TEST_CASE("short window flags an unreliable decay") {
  // Delays out to 0.05*T1: either NoDecay or a diagnostic about the span.
  std::mt19937 gen(31);
  const double t1 = 50e-6;
  std::vector<double> x = linspace(0, 0.05 * t1, 12), y;
  for (double dt : x) y.push_back(binomial_mean(gen, std::exp(-dt / t1), 1024));
  try {
    FitResult fit = fit_exp_decay(x, y);
    bool flagged = !fit.diagnostic.empty() ||
                   fit.sigma("t_decay") > 0.5 * fit.value("t_decay");
    CHECK(flagged);
  } catch (const NoDecay&) {
    CHECK(true);
  }
}

TEST_CASE("rb decay identities") {
  std::vector<double> depths = {1, 2, 5, 10, 20, 50, 100, 200};
  SUBCASE("exact A p^m + B") {
    std::vector<double> survival;
    for (double m : depths) survival.push_back(0.5 * std::pow(0.98, m) + 0.5);
    FitResult fit = fit_rb_decay(depths, survival);
    CHECK(fit.value("p") == doctest::Approx(0.98).epsilon(1e-9));
    CHECK(fit.derived.at("avg_gate_fidelity") ==
          doctest::Approx(0.99).epsilon(1e-9));
  }
  SUBCASE("all-unit survival means a perfect gate") {
    std::vector<double> survival(depths.size(), 1.0);
    FitResult fit = fit_rb_decay(depths, survival);
    CHECK(fit.value("p") == 1.0);
    CHECK(fit.derived.at("avg_gate_fidelity") == 1.0);
  }
  SUBCASE("fewer than 4 distinct depths") {
    std::vector<double> d = {5, 5, 5}, s = {0.9, 0.91, 0.89};
    CHECK_THROWS_AS(fit_rb_decay(d, s), DimensionMismatch);
  }
}

TEST_CASE("rb decay recovery is exact on noiseless inputs") {
  // Property over random (A, p, B); p stays below 1 to keep the model
  // identifiable.
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> uab(0.1, 0.9), up(0.8, 0.999);
  std::vector<double> depths = {1, 2, 5, 10, 20, 50};
  for (int t = 0; t < 100; ++t) {
    // A + B <= 1 keeps the synthetic survival inside the model's [0,1]
    // precondition.
    double a = uab(gen), p = up(gen);
    double b = std::min(uab(gen), 1.0 - a);
    std::vector<double> survival;
    for (double m : depths) survival.push_back(a * std::pow(p, m) + b);
    FitResult fit = fit_rb_decay(depths, survival);
    CHECK(std::fabs(fit.value("A") - a) < 1e-6);
    CHECK(std::fabs(fit.value("p") - p) < 1e-6);
    CHECK(std::fabs(fit.value("B") - b) < 1e-6);
  }
}

TEST_CASE("classifier behaviour across separations") {
  std::mt19937 gen(4242);
  auto cloud = [&](double cx, double cy, double sigma, int n) {
    std::normal_distribution<double> d(0.0, sigma);
    std::vector<IqPoint> pts;
    for (int i = 0; i < n; ++i) pts.push_back({cx + d(gen), cy + d(gen)});
    return pts;
  };

  SUBCASE("identical distributions carry no real separation") {
    // The scan picks the empirically best threshold, so on finite samples
    // of indistinguishable states the reported fidelity sits somewhat
    // above 1/2 (it maximizes over noise); it must stay far from a usable
    // discriminator.
    auto g = cloud(0.0, 0.0, 1.0, 150);
    auto e = cloud(0.0, 0.0, 1.0, 150);
    FitResult fit = train_classifier(g, e);
    CHECK(fit.value("assignment_fidelity") >= 0.5);
    CHECK(fit.value("assignment_fidelity") < 0.68);
  }
  SUBCASE("exactly coincident means degenerate") {
    auto g = cloud(0.0, 0.0, 1.0, 200);
    CHECK_THROWS_AS(train_classifier(g, g), DegenerateClouds);
  }
  SUBCASE("separation of 20 sigma is essentially perfect") {
    auto g = cloud(0.0, 0.0, 1.0, 1000);
    auto e = cloud(20.0, 0.0, 1.0, 1000);
    FitResult fit = train_classifier(g, e);
    CHECK(fit.value("assignment_fidelity") > 0.999);
  }
  SUBCASE("separation of 4 sigma matches the gaussian overlap") {
    // Oracle: optimal threshold fidelity Phi(d / 2 sigma) = Phi(2).
    auto g = cloud(0.0, 0.0, 1.0, 5000);
    auto e = cloud(4.0, 0.0, 1.0, 5000);
    FitResult fit = train_classifier(g, e);
    CHECK(std::fabs(fit.value("assignment_fidelity") - testsupport::phi(2.0)) <
          0.01);
  }
  SUBCASE("too few shots") {
    auto g = cloud(0.0, 0.0, 1.0, 10);
    auto e = cloud(4.0, 0.0, 1.0, 10);
    CHECK_THROWS_AS(train_classifier(g, e), DimensionMismatch);
  }
  SUBCASE("angle and threshold separate the clouds") {
    auto g = cloud(0.75, -0.30, 0.125, 2000);
    auto e = cloud(1.05, 0.10, 0.125, 2000);
    FitResult fit = train_classifier(g, e);
    double theta = fit.value("iq_angle");
    CHECK(theta == doctest::Approx(-std::atan2(0.4, 0.3)).epsilon(0.05));
    double c = std::cos(theta), s = std::sin(theta);
    // Rotated ground cloud sits below the threshold, excited above.
    CHECK(c * 0.75 - s * -0.30 < fit.value("threshold"));
    CHECK(c * 1.05 - s * 0.10 > fit.value("threshold"));
  }
}

TEST_CASE("forward and central jacobians agree at the optimum") {
  // All shipped models, each at the solution of a synthetic fit.
  struct Case {
    std::string model;
    std::vector<double> params;
    std::vector<double> x;
  };
  std::vector<Case> cases = {
      {"lorentzian", {7.0e9, 1.0e6, -0.8, 1.0}, linspace(6.99e9, 7.01e9, 60)},
      {"oscillation", {1.25, 0.3, 0.5, 0.5}, linspace(0, 1, 60)},
      {"damped_oscillation",
       {5e5, 0.1, 0.5, 0.5, 3e-5},
       linspace(0, 8e-5, 60)},
      {"exp_decay", {5e-5, 1.0, 0.02}, linspace(0, 1.5e-4, 60)},
      {"rb_decay", {0.5, 0.99, 0.5}, linspace(1, 200, 60)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.model);
    ModelFn fn = model_function(c.model);
    auto fwd = forward_jacobian(fn, c.x, c.params);
    auto cen = central_jacobian(fn, c.x, c.params);
    // Column scale from the central differences; guards entries near zero.
    for (std::size_t j = 0; j < c.params.size(); ++j) {
      double scale = 0.0;
      for (std::size_t i = 0; i < c.x.size(); ++i)
        scale = std::max(scale, std::fabs(cen[i][j]));
      REQUIRE(scale > 0.0);
      for (std::size_t i = 0; i < c.x.size(); ++i) {
        double rel = std::fabs(fwd[i][j] - cen[i][j]) /
                     std::max(std::fabs(cen[i][j]), scale * 1e-3);
        CHECK(rel < 1e-4);
      }
    }
  }
}

TEST_CASE("lorentzian fits are shift and scale equivariant") {
  std::mt19937 gen(11);
  std::normal_distribution<double> noise(0.0, 0.002);
  std::vector<double> x = linspace(-4.0, 6.0, 120), y;
  for (double xi : x) {
    double hw = 0.35;
    y.push_back(0.1 + 0.9 * hw * hw / ((xi - 1.2) * (xi - 1.2) + hw * hw) +
                noise(gen));
  }
  FitResult base = fit_lorentzian(x, y, PeakSign::peak);

  const double alpha = 2.5e6, beta = 7.0e9;
  std::vector<double> xs;
  for (double xi : x) xs.push_back(alpha * xi + beta);
  FitResult mapped = fit_lorentzian(xs, y, PeakSign::peak);

  CHECK(mapped.value("center") ==
        doctest::Approx(alpha * base.value("center") + beta).epsilon(1e-6));
  CHECK(mapped.value("fwhm") ==
        doctest::Approx(alpha * base.value("fwhm")).epsilon(1e-6));
}

TEST_CASE("refinement never worsens the seed residual") {
  // 100 random seeded problems across the shipped model shapes.
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ModelFn exp_model = model_function("exp_decay");
  ModelFn osc_model = model_function("oscillation");
  for (int t = 0; t < 100; ++t) {
    bool use_exp = t % 2 == 0;
    const ModelFn& fn = use_exp ? exp_model : osc_model;
    std::vector<double> truth =
        use_exp ? std::vector<double>{0.2 + u01(gen), 0.5 + u01(gen), u01(gen)}
                : std::vector<double>{0.5 + 2.0 * u01(gen), u01(gen),
                                      0.3 + u01(gen), u01(gen)};
    std::vector<double> x = linspace(0.0, 2.0, 40), y;
    std::normal_distribution<double> noise(0.0, 0.05);
    for (double xi : x) y.push_back(fn(xi, truth) + noise(gen));
    // Perturbed initial guess.
    std::vector<double> init = truth;
    for (double& p : init) p *= 0.5 + u01(gen);

    double rss0 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = fn(x[i], init) - y[i];
      rss0 += r * r;
    }
    FitResult fit = least_squares(fn, x, y, init);
    CHECK(fit.rss <= rss0 + 1e-12);
  }
}

TEST_CASE("evaluate_model matches the fitted models") {
  std::map<std::string, double> params = {
      {"t_decay", 1e-5}, {"amplitude", 1.0}, {"offset", 0.0}};
  auto ys = evaluate_model("exp_decay", params, std::vector<double>{0.0, 1e-5});
  CHECK(ys[0] == doctest::Approx(1.0));
  CHECK(ys[1] == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(
      evaluate_model("no_such_model", params, std::vector<double>{0.0}),
      DimensionMismatch);
}

TEST_SUITE_END();
