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

#include <random>

#include "qcal/platform.hpp"
#include "qcal/runcard.hpp"

using namespace qcal;

TEST_SUITE_BEGIN("runcard");

namespace {

const char* kMinimal = R"(platform: sim_1q
qubits: [0]
format: csv
actions:
  resonator_spectroscopy:
    freq_width: 2.0e7
    freq_step: 2.0e5
    nshots: 1024
)";

}  // namespace

TEST_CASE("minimal well-formed document parses") {
  Runcard rc = parse_runcard(kMinimal);
  CHECK(rc.platform == "sim_1q");
  CHECK(rc.qubits == std::vector<int>{0});
  CHECK(rc.format == StorageFormat::csv);
  REQUIRE(rc.actions.size() == 1);
  CHECK(rc.actions[0].name == "resonator_spectroscopy");
  CHECK(std::get<double>(rc.actions[0].parameters.at("freq_width")) == 2.0e7);
  CHECK(std::get<std::int64_t>(rc.actions[0].parameters.at("nshots")) == 1024);
}

TEST_CASE("missing actions key names the field") {
  const char* doc = "platform: sim_1q\nqubits: [0]\nformat: csv\n";
  CHECK_THROWS_WITH_AS(parse_runcard(doc),
                       doctest::Contains("actions"), SchemaError);
}

TEST_CASE("duplicate qubit id is rejected") {
  std::string doc = kMinimal;
  doc.replace(doc.find("[0]"), 3, "[0, 0]");
  CHECK_THROWS_WITH_AS(parse_runcard(doc),
                       doctest::Contains("duplicate qubit"), SchemaError);
}

TEST_CASE("unknown top-level key is rejected") {
  std::string doc = std::string(kMinimal) + "extra: 1\n";
  CHECK_THROWS_WITH_AS(parse_runcard(doc), doctest::Contains("extra"),
                       SchemaError);
}

TEST_CASE("malformed yaml reports a line number") {
  const char* doc = "platform: sim_1q\nqubits: [0\nformat: csv\n";
  CHECK_THROWS_WITH_AS(parse_runcard(doc), doctest::Contains("line"),
                       SyntaxError);
}

TEST_CASE("numbers accept underscores and scientific notation") {
  const char* doc = R"(platform: sim_1q
qubits: [0]
format: json
actions:
  resonator_spectroscopy:
    freq_width: 20_000_000
    freq_step: 2.5e+5
    nshots: 1_024
)";
  Runcard rc = parse_runcard(doc);
  CHECK(rc.format == StorageFormat::json);
  CHECK(std::get<std::int64_t>(rc.actions[0].parameters.at("freq_width")) ==
        20000000);
  CHECK(std::get<double>(rc.actions[0].parameters.at("freq_step")) == 2.5e5);
  CHECK(std::get<std::int64_t>(rc.actions[0].parameters.at("nshots")) == 1024);
}

TEST_CASE("bad format value is rejected") {
  std::string doc = kMinimal;
  doc.replace(doc.find("csv"), 3, "xml");
  CHECK_THROWS_WITH_AS(parse_runcard(doc), doctest::Contains("format"),
                       SchemaError);
}

TEST_CASE("action order is preserved") {
  const char* doc = R"(platform: sim_1q
qubits: [0]
format: csv
actions:
  t1: {}
  resonator_spectroscopy: {}
  rabi_amplitude: {}
)";
  Runcard rc = parse_runcard(doc);
  REQUIRE(rc.actions.size() == 3);
  CHECK(rc.actions[0].name == "t1");
  CHECK(rc.actions[1].name == "resonator_spectroscopy");
  CHECK(rc.actions[2].name == "rabi_amplitude");

  auto platform = load_platform("sim_1q", std::nullopt, 0);
  ValidatedPlan plan =
      validate_plan(rc, ProtocolRegistry::standard(), *platform);
  REQUIRE(plan.actions.size() == 3);
  CHECK(plan.actions[0].name == "t1");
  CHECK(plan.actions[1].name == "resonator_spectroscopy");
  CHECK(plan.actions[2].name == "rabi_amplitude");
}

TEST_CASE("serialize/parse round trip") {
  // Structured generator over parameter shapes the schema allows.
  std::mt19937 gen(42);
  auto rand_int = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  };
  for (int iter = 0; iter < 50; ++iter) {
    Runcard rc;
    rc.platform = iter % 2 ? "sim_1q" : "sim_5q";
    int nq = static_cast<int>(rand_int(1, 5));
    for (int q = 0; q < nq; ++q) rc.qubits.push_back(q);
    rc.format = iter % 3 ? StorageFormat::csv : StorageFormat::json;
    int na = static_cast<int>(rand_int(1, 4));
    for (int a = 0; a < na; ++a) {
      Action act;
      act.name = "action_" + std::to_string(a);
      int np = static_cast<int>(rand_int(0, 5));
      for (int p = 0; p < np; ++p) {
        std::string key = "p" + std::to_string(p);
        switch (rand_int(0, 4)) {
          case 0: act.parameters[key] = rand_int(-1000000, 1000000); break;
          case 1:
            act.parameters[key] =
                std::ldexp(static_cast<double>(rand_int(1, 1 << 30)),
                           static_cast<int>(rand_int(-40, 40)));
            break;
          case 2: act.parameters[key] = std::string("text value"); break;
          case 3:
            act.parameters[key] =
                std::vector<std::int64_t>{rand_int(0, 9), rand_int(10, 99)};
            break;
          default:
            act.parameters[key] = std::vector<double>{0.5, 2.25, -1.75};
        }
      }
      rc.actions.push_back(std::move(act));
    }
    Runcard reparsed = parse_runcard(serialize_runcard(rc));
    CHECK(reparsed == rc);
    // Serialization is canonical: a second pass is byte-identical.
    CHECK(serialize_runcard(reparsed) == serialize_runcard(rc));
  }
}

TEST_CASE("validate_plan resolves known protocols") {
  auto platform = load_platform("sim_1q", std::nullopt, 0);
  Runcard rc = parse_runcard(kMinimal);
  ValidatedPlan plan =
      validate_plan(rc, ProtocolRegistry::standard(), *platform);
  REQUIRE(plan.actions.size() == 1);
  CHECK(plan.actions[0].protocol != nullptr);
  // Defaults are filled in.
  CHECK(plan.actions[0].params.count("freq_width") == 1);
  CHECK(plan.actions[0].params.count("nshots") == 1);
}

TEST_CASE("typo suggests nearest protocol names") {
  auto platform = load_platform("sim_1q", std::nullopt, 0);
  Runcard rc = parse_runcard(kMinimal);
  rc.actions[0].name = "qubit_spectroscpy";
  CHECK_THROWS_WITH_AS(
      validate_plan(rc, ProtocolRegistry::standard(), *platform),
      doctest::Contains("qubit_spectroscopy"), UnknownProtocol);
}

TEST_CASE("qubit beyond the platform size is rejected") {
  auto platform = load_platform("sim_5q", std::nullopt, 0);
  Runcard rc = parse_runcard(kMinimal);
  rc.qubits = {7};
  CHECK_THROWS_AS(validate_plan(rc, ProtocolRegistry::standard(), *platform),
                  UnknownQubit);
}

TEST_CASE("parameter violations carry per-field messages") {
  auto platform = load_platform("sim_1q", std::nullopt, 0);
  Runcard rc = parse_runcard(kMinimal);

  SUBCASE("unknown parameter") {
    rc.actions[0].parameters["frqe_width"] = 1.0;
    CHECK_THROWS_WITH_AS(
        validate_plan(rc, ProtocolRegistry::standard(), *platform),
        doctest::Contains("frqe_width"), ParameterError);
  }
  SUBCASE("non-positive step") {
    rc.actions[0].parameters["freq_step"] = 0.0;
    CHECK_THROWS_WITH_AS(
        validate_plan(rc, ProtocolRegistry::standard(), *platform),
        doctest::Contains("freq_step"), ParameterError);
  }
  SUBCASE("nshots below one") {
    rc.actions[0].parameters["nshots"] = std::int64_t{0};
    CHECK_THROWS_WITH_AS(
        validate_plan(rc, ProtocolRegistry::standard(), *platform),
        doctest::Contains("nshots"), ParameterError);
  }
  SUBCASE("float where integer expected") {
    rc.actions[0].parameters["nshots"] = 12.5;
    CHECK_THROWS_AS(
        validate_plan(rc, ProtocolRegistry::standard(), *platform),
        ParameterError);
  }
}

TEST_CASE("validation leaves the platform untouched") {
  auto platform = load_platform("sim_1q", std::nullopt, 7);
  QubitCalibration before = platform->calibration(0);
  Runcard rc = parse_runcard(kMinimal);
  validate_plan(rc, ProtocolRegistry::standard(), *platform);
  QubitCalibration after = platform->calibration(0);
  for (const auto& name : calibration_field_names()) {
    CHECK(calibration_field(before, name)->value ==
          calibration_field(after, name)->value);
    CHECK(calibration_field(before, name)->calibrated ==
          calibration_field(after, name)->calibrated);
  }
}

TEST_SUITE_END();
