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

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "qcal/gateset.hpp"
#include "qcal/platform.hpp"
#include "support.hpp"

using namespace qcal;
using testsupport::TempDir;

TEST_SUITE_BEGIN("gateset");

namespace {

// Independent enumeration oracle for the Clifford closure, written against
// its own matrix type so it shares nothing with the library path.
namespace oracle {

using Mat = std::array<std::complex<double>, 4>;

Mat mul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

bool equivalent(const Mat& a, const Mat& b) {
  std::complex<double> tr = std::conj(a[0]) * b[0] + std::conj(a[2]) * b[2] +
                            std::conj(a[1]) * b[1] + std::conj(a[3]) * b[3];
  return std::fabs(std::abs(tr) - 2.0) < 1e-9;
}

std::vector<Mat> closure() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat id = {1, 0, 0, 1};
  Mat h = {s, s, s, -s};
  Mat sg = {1, 0, 0, std::complex<double>(0, 1)};
  std::vector<Mat> group = {id};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Mat> next = group;
    for (const Mat& g : group) {
      for (const Mat& gen : {h, sg}) {
        Mat prod = mul(gen, g);
        bool known = false;
        for (const Mat& k : next)
          if (equivalent(k, prod)) {
            known = true;
            break;
          }
        if (!known) {
          next.push_back(prod);
          grew = true;
        }
      }
    }
    group = std::move(next);
  }
  return group;
}

}  // namespace oracle

}  // namespace

TEST_CASE("clifford group has exactly 24 elements") {
  GateSet gs = clifford_group();
  CHECK(gs.size() == 24);

  // Brute-force closure oracle agrees, element for element.
  std::vector<oracle::Mat> reference = oracle::closure();
  CHECK(reference.size() == 24);
  for (const Unitary2& u : gs.elements) {
    oracle::Mat m = {u.u00, u.u01, u.u10, u.u11};
    int matches = 0;
    for (const auto& r : reference)
      if (oracle::equivalent(r, m)) ++matches;
    CHECK(matches == 1);
  }
}

TEST_CASE("group axioms hold exhaustively") {
  GateSet gs = clifford_group();
  // Identity at index 0.
  CHECK(same_up_to_phase(gs.elements[0], {1, 0, 0, 1}));
  for (int g = 0; g < gs.size(); ++g) {
    CHECK(gs.compose(0, g) == g);
    CHECK(gs.compose(g, 0) == g);
    CHECK(gs.compose(g, gs.inverse(g)) == 0);
    CHECK(gs.compose(gs.inverse(g), g) == 0);
  }
  // Closure: all 576 pairs compose to a group element whose matrix matches.
  for (int a = 0; a < gs.size(); ++a) {
    for (int b = 0; b < gs.size(); ++b) {
      int c = gs.compose(a, b);
      REQUIRE(c >= 0);
      REQUIRE(c < gs.size());
      CHECK(same_up_to_phase(gs.elements[a] * gs.elements[b], gs.elements[c]));
    }
  }
}

TEST_CASE("associativity holds on 1000 random triples") {
  GateSet gs = clifford_group();
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> pick(0, gs.size() - 1);
  for (int t = 0; t < 1000; ++t) {
    int a = pick(gen), b = pick(gen), c = pick(gen);
    CHECK(gs.compose(gs.compose(a, b), c) == gs.compose(a, gs.compose(b, c)));
  }
}

TEST_CASE("small gate sets have the expected structure") {
  GateSet xid = xid_gateset();
  CHECK(xid.size() == 2);
  CHECK(xid.compose(1, 1) == 0);  // X * X = I
  CHECK(xid.abelian);

  GateSet pauli = pauli_gateset();
  CHECK(pauli.size() == 4);
  CHECK(pauli.abelian);
  for (int g = 0; g < pauli.size(); ++g) {
    CHECK(pauli.inverse(g) == g);  // every element self-inverse
    for (int h = 0; h < pauli.size(); ++h) {
      int c = pauli.compose(g, h);
      CHECK(c >= 0);
      CHECK(c < 4);
    }
  }
}

TEST_CASE("characters are orthogonal sign homomorphisms") {
  for (const GateSet& gs : {xid_gateset(), pauli_gateset()}) {
    CAPTURE(gs.name);
    CHECK(gs.characters.size() == static_cast<std::size_t>(gs.size()));
    // Trivial irrep first.
    for (double c : gs.characters[0]) CHECK(c == 1.0);
    for (const auto& chi : gs.characters)
      for (int a = 0; a < gs.size(); ++a)
        for (int b = 0; b < gs.size(); ++b)
          CHECK(chi[gs.compose(a, b)] == chi[a] * chi[b]);
    // Row orthogonality.
    for (std::size_t i = 0; i < gs.characters.size(); ++i) {
      for (std::size_t j = 0; j < gs.characters.size(); ++j) {
        double dot = 0;
        for (int g = 0; g < gs.size(); ++g)
          dot += gs.characters[i][g] * gs.characters[j][g];
        CHECK(dot == doctest::Approx(i == j ? gs.size() : 0.0));
      }
    }
  }
}

TEST_CASE("sampled circuits compose to the identity when inverted") {
  CircuitEnsembleSpec spec;
  spec.gate_set = clifford_group();
  spec.depths = {0, 1, 3, 7, 20};
  spec.circuits_per_depth = 20;
  spec.append_inverse = true;
  spec.seed = 12;
  std::vector<Circuit> circuits = sample_circuits(spec);
  CHECK(circuits.size() == spec.depths.size() * 20);
  for (const Circuit& c : circuits) {
    CHECK(static_cast<int>(c.gates.size()) == c.depth + 1);
    CHECK(spec.gate_set.compose_sequence(c.gates) == 0);
  }
  // Depth 0 with an appended inverse is the identity gate alone.
  CHECK(circuits[0].depth == 0);
  CHECK(circuits[0].gates == std::vector<int>{0});
}

TEST_CASE("sampling is deterministic and uniform") {
  CircuitEnsembleSpec spec;
  spec.gate_set = clifford_group();
  spec.depths = {10000};
  spec.circuits_per_depth = 1;
  spec.append_inverse = false;
  spec.seed = 31337;
  std::vector<Circuit> again = sample_circuits(spec);
  CHECK(sample_circuits(spec)[0].gates == again[0].gates);

  // Chi-square uniformity oracle on 10^4 draws over the 24 gates.
  const auto& draws = again[0].gates;
  std::vector<int> counts(24, 0);
  for (int g : draws) ++counts[g];
  double expected = draws.size() / 24.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9th percentile of chi-square with 23 dof.
  CHECK(chi2 < 49.73);
  // And every bin within 3 sigma of the multinomial expectation.
  double sigma = std::sqrt(expected * (1.0 - 1.0 / 24.0));
  for (int c : counts) CHECK(std::fabs(c - expected) < 3.0 * sigma);
}

TEST_CASE("estimator equals fit_rb_decay on synthetic records") {
  // Dyadic survival values are exactly representable as counts/1024.
  const double a = 0.5, b = 0.4375, p = 0.5;
  std::vector<int> depths = {1, 2, 3, 4, 5};
  std::vector<CircuitRecord> records;
  std::vector<double> d, s;
  for (int m : depths) {
    double surv = a * std::pow(p, m) + b;
    long c0 = std::lround(surv * 1024);
    REQUIRE(static_cast<double>(c0) / 1024 == surv);
    for (int rep = 0; rep < 3; ++rep)
      records.push_back({m, {}, c0, 1024 - c0});
    d.push_back(m);
    s.push_back(surv);
  }
  FitResult via_pipeline = standard_rb_estimate(records);
  FitResult direct = fit_rb_decay(d, s);
  CHECK(via_pipeline.values == direct.values);
  CHECK(via_pipeline.derived.at("avg_gate_fidelity") ==
        direct.derived.at("avg_gate_fidelity"));
}

TEST_CASE("aggregation is permutation invariant within depth groups") {
  std::vector<CircuitRecord> records = {
      {1, {}, 900, 124}, {1, {}, 880, 144}, {5, {}, 700, 324},
      {5, {}, 730, 294}, {9, {}, 650, 374},
  };
  auto surv = [](const CircuitRecord& r) { return r.survival(); };
  DepthAggregate a = aggregate_by_depth(records, surv);
  std::reverse(records.begin(), records.end());
  std::swap(records[0], records[1]);
  DepthAggregate b = aggregate_by_depth(records, surv);
  CHECK(a.depths == b.depths);
  CHECK(a.means == b.means);
  CHECK(a.sems == b.sems);
}

TEST_CASE("noiseless device yields unit fidelity") {
  TempDir tmp;
  testsupport::write_file(tmp / "clean.json",
                          R"({"qubits": [{"depolarizing_parameter": 1.0,
                              "readout_flip_probability": 0.0}]})");
  auto platform = load_platform("sim_1q", tmp / "clean.json", 1);
  CircuitEnsembleSpec spec;
  spec.gate_set = clifford_group();
  spec.depths = {1, 2, 5, 10, 20};
  spec.circuits_per_depth = 10;
  spec.shots_per_circuit = 128;
  spec.seed = 5;
  StandardRbResult rb = run_standard_rb(*platform, 0, spec);
  for (const auto& r : rb.records) CHECK(r.survival() == 1.0);
  CHECK(rb.fit.value("p") == 1.0);
  CHECK(rb.avg_gate_fidelity == 1.0);
}

TEST_CASE("standard rb needs at least four depths") {
  auto platform = load_platform("sim_1q", std::nullopt, 1);
  CircuitEnsembleSpec spec;
  spec.gate_set = clifford_group();
  spec.depths = {5};
  CHECK_THROWS_AS(run_standard_rb(*platform, 0, spec), InvalidSpec);
}

TEST_CASE("filtered rb on a noiseless device shows no decay") {
  TempDir tmp;
  testsupport::write_file(tmp / "clean.json",
                          R"({"qubits": [{"depolarizing_parameter": 1.0,
                              "readout_flip_probability": 0.0}]})");
  auto platform = load_platform("sim_1q", tmp / "clean.json", 2);
  CircuitEnsembleSpec spec;
  spec.gate_set = xid_gateset();
  spec.depths = {1, 2, 4, 8, 16};
  spec.circuits_per_depth = 20;
  spec.shots_per_circuit = 128;
  spec.seed = 9;
  FilteredRbResult res = run_filtered_rb(*platform, 0, spec);
  REQUIRE(res.irreps.size() == 2);
  CHECK(res.irreps[0].trivial);
  CHECK(!res.irreps[0].fit.has_value());  // reported, not fitted
  const IrrepResult& sign = res.irreps[1];
  REQUIRE(sign.fit.has_value());
  CHECK(std::fabs(sign.fit->value("p") - 1.0) <= 1e-6);
}

TEST_SUITE_END();
