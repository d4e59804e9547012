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

#include "sim_platform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcal/errors.hpp"
#include "qcal/rng.hpp"

namespace qcal::detail {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw ParameterFileError(std::string(what) + " is not finite");
}

void validate_truth(const TrueQubitParams& p, int k) {
  auto fail = [&](const std::string& msg) {
    throw ParameterFileError("qubit " + std::to_string(k) + ": " + msg);
  };
  if (p.resonator_frequency <= 0 || p.qubit_frequency <= 0)
    fail("frequencies must be positive");
  if (p.resonator_linewidth <= 0) fail("resonator_linewidth must be positive");
  if (p.iq_sigma <= 0) fail("iq_sigma must be positive");
  if (p.pi_pulse_amplitude <= 0 || p.pi_pulse_amplitude > 1)
    fail("pi_pulse_amplitude must be in (0,1]");
  if (p.pi_pulse_duration <= 0) fail("pi_pulse_duration must be positive");
  if (p.t1 <= 0 || p.t2 <= 0) fail("t1 and t2 must be positive");
  if (p.t2 > 2 * p.t1) fail("t2 must not exceed 2*t1");
  if (p.depolarizing_parameter <= 0 || p.depolarizing_parameter > 1)
    fail("depolarizing_parameter must be in (0,1]");
  if (p.readout_flip_probability < 0 || p.readout_flip_probability > 0.5)
    fail("readout_flip_probability must be in [0,0.5]");
  if (p.iq_center_ground_i == p.iq_center_excited_i &&
      p.iq_center_ground_q == p.iq_center_excited_q)
    fail("IQ centers must differ");
  if (p.readout_baseline <= 0 || p.readout_dip_depth <= 0 ||
      p.readout_dip_depth > p.readout_baseline)
    fail("readout baseline/depth must satisfy 0 < depth <= baseline");
}

double require_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number())
    throw ParameterFileError("field '" + key + "' must be a number");
  double d = v.get<double>();
  check_finite(d, key.c_str());
  return d;
}

TrueQubitParams parse_qubit_entry(const nlohmann::json& obj, int k) {
  TrueQubitParams p = default_qubit_params(k);
  if (!obj.is_object())
    throw ParameterFileError("qubit entry " + std::to_string(k) +
                             " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    if (key == "resonator_frequency") p.resonator_frequency = require_number(v, key);
    else if (key == "resonator_linewidth") p.resonator_linewidth = require_number(v, key);
    else if (key == "dispersive_shift") p.dispersive_shift = require_number(v, key);
    else if (key == "qubit_frequency") p.qubit_frequency = require_number(v, key);
    else if (key == "pi_pulse_amplitude") p.pi_pulse_amplitude = require_number(v, key);
    else if (key == "pi_pulse_duration") p.pi_pulse_duration = require_number(v, key);
    else if (key == "t1") p.t1 = require_number(v, key);
    else if (key == "t2") p.t2 = require_number(v, key);
    else if (key == "iq_sigma") p.iq_sigma = require_number(v, key);
    else if (key == "readout_baseline") p.readout_baseline = require_number(v, key);
    else if (key == "readout_dip_depth") p.readout_dip_depth = require_number(v, key);
    else if (key == "depolarizing_parameter") p.depolarizing_parameter = require_number(v, key);
    else if (key == "readout_flip_probability") p.readout_flip_probability = require_number(v, key);
    else if (key == "initial_readout_detuning") p.initial_readout_detuning = require_number(v, key);
    else if (key == "initial_drive_detuning") p.initial_drive_detuning = require_number(v, key);
    else if (key == "initial_pi_amplitude_guess") p.initial_pi_amplitude_guess = require_number(v, key);
    else if (key == "iq_center_ground" || key == "iq_center_excited") {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParameterFileError("field '" + key + "' must be a [i, q] pair");
      if (key == "iq_center_ground") {
        p.iq_center_ground_i = v[0].get<double>();
        p.iq_center_ground_q = v[1].get<double>();
      } else {
        p.iq_center_excited_i = v[0].get<double>();
        p.iq_center_excited_q = v[1].get<double>();
      }
    } else {
      throw ParameterFileError("unknown field '" + key + "' in qubit entry " +
                               std::to_string(k));
    }
  }
  return p;
}

std::vector<TrueQubitParams> load_parameter_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterFileError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterFileError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("qubits"))
    throw ParameterFileError("document must be an object with a 'qubits' array");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "qubits")
      throw ParameterFileError("unknown top-level field '" + it.key() + "'");
  const auto& arr = doc["qubits"];
  if (!arr.is_array() || arr.empty())
    throw ParameterFileError("'qubits' must be a non-empty array");
  std::vector<TrueQubitParams> out;
  for (int k = 0; k < static_cast<int>(arr.size()); ++k)
    out.push_back(parse_qubit_entry(arr[k], k));
  return out;
}

// 2x2 density matrix; only the entries needed for single-qubit evolution.
struct Density {
  std::complex<double> r00, r01, r10, r11;
};

Density apply_gate(const Density& rho, const Unitary2& u) {
  // U rho U^dag
  std::complex<double> a00 = u.u00 * rho.r00 + u.u01 * rho.r10;
  std::complex<double> a01 = u.u00 * rho.r01 + u.u01 * rho.r11;
  std::complex<double> a10 = u.u10 * rho.r00 + u.u11 * rho.r10;
  std::complex<double> a11 = u.u10 * rho.r01 + u.u11 * rho.r11;
  Unitary2 ud = u.adjoint();
  return {a00 * ud.u00 + a01 * ud.u10, a00 * ud.u01 + a01 * ud.u11,
          a10 * ud.u00 + a11 * ud.u10, a10 * ud.u01 + a11 * ud.u11};
}

Density depolarize(const Density& rho, double p) {
  return {p * rho.r00 + (1 - p) * 0.5, p * rho.r01, p * rho.r10,
          p * rho.r11 + (1 - p) * 0.5};
}

class SimPlatform final : public Platform {
 public:
  SimPlatform(std::string name, std::vector<TrueQubitParams> truth,
              std::uint64_t seed)
      : name_(std::move(name)), truth_(std::move(truth)), seed_(seed) {
    for (int k = 0; k < static_cast<int>(truth_.size()); ++k) {
      validate_truth(truth_[k], k);
      const TrueQubitParams& t = truth_[k];
      QubitCalibration c;
      c.readout_frequency = {t.resonator_frequency + t.initial_readout_detuning, false};
      c.drive_frequency = {t.qubit_frequency + t.initial_drive_detuning, false};
      c.pi_pulse_amplitude = {t.initial_pi_amplitude_guess, false};
      c.pi_pulse_duration = {t.pi_pulse_duration, false};
      cal_.push_back(c);
    }
  }

  const std::string& name() const override { return name_; }
  int num_qubits() const override { return static_cast<int>(truth_.size()); }
  std::uint64_t seed() const override { return seed_; }

  const QubitCalibration& calibration(int qubit) const override {
    check_qubit(qubit);
    return cal_[qubit];
  }

  void update_calibration(int qubit, const CalibrationUpdate& u) override {
    check_qubit(qubit);
    QubitCalibration next = cal_[qubit];
    apply(next, u);
    validate_calibration(next);
    cal_[qubit] = next;
  }

  std::vector<DataSet> execute(const ExperimentSpec& spec) override {
    validate_targets(spec);
    std::uint64_t call = call_counter_++;
    std::vector<DataSet> out;
    out.reserve(spec.qubits.size());
    for (std::size_t i = 0; i < spec.qubits.size(); ++i) {
      int q = spec.qubits[i];
      CounterRng rng(seed_, static_cast<std::uint64_t>(q), call);
      out.push_back(std::visit(
          [&](const auto& kind) { return run_kind(kind, q, i, spec, rng); },
          spec.kind));
    }
    return out;
  }

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= num_qubits())
      throw InvalidSpec("qubit " + std::to_string(q) + " does not exist on " +
                        name_ + " (" + std::to_string(num_qubits()) + " qubits)");
  }

  void validate_targets(const ExperimentSpec& spec) const {
    if (spec.qubits.empty()) throw InvalidSpec("no target qubits");
    for (std::size_t i = 0; i < spec.qubits.size(); ++i) {
      check_qubit(spec.qubits[i]);
      for (std::size_t j = i + 1; j < spec.qubits.size(); ++j)
        if (spec.qubits[i] == spec.qubits[j])
          throw InvalidSpec("duplicate target qubit " +
                            std::to_string(spec.qubits[i]));
    }
  }

  static void apply(QubitCalibration& c, const CalibrationUpdate& u) {
    auto set = [](CalValue& f, const std::optional<double>& v) {
      if (v) f = {*v, true};
    };
    set(c.readout_frequency, u.readout_frequency);
    set(c.drive_frequency, u.drive_frequency);
    set(c.pi_pulse_amplitude, u.pi_pulse_amplitude);
    set(c.pi_pulse_duration, u.pi_pulse_duration);
    set(c.t1, u.t1);
    set(c.t2, u.t2);
    set(c.iq_angle, u.iq_angle);
    set(c.threshold, u.threshold);
    set(c.assignment_fidelity, u.assignment_fidelity);
  }

  static void validate_calibration(const QubitCalibration& c) {
    for (const auto& name : calibration_field_names()) {
      const CalValue* f = calibration_field(c, name);
      if (!std::isfinite(f->value))
        throw InvariantViolation("field " + name + " is not finite");
    }
    if (c.readout_frequency.value <= 0 || c.drive_frequency.value <= 0)
      throw InvariantViolation("frequencies must be positive");
    if (c.pi_pulse_amplitude.value <= 0 || c.pi_pulse_amplitude.value > 1)
      throw InvariantViolation("pi_pulse_amplitude must be in (0,1]");
    if (c.pi_pulse_duration.value <= 0)
      throw InvariantViolation("pi_pulse_duration must be positive");
    if (c.t1.calibrated && c.t1.value <= 0)
      throw InvariantViolation("t1 must be positive");
    if (c.t2.calibrated && c.t2.value <= 0)
      throw InvariantViolation("t2 must be positive");
    if (c.t1.calibrated && c.t2.calibrated && c.t2.value > 2 * c.t1.value)
      throw InvariantViolation("t2 exceeds 2*t1");
    if (c.assignment_fidelity.calibrated &&
        (c.assignment_fidelity.value < 0 || c.assignment_fidelity.value > 1))
      throw InvariantViolation("assignment_fidelity must be in [0,1]");
  }

  static void check_sweep(const std::vector<double>& xs, const char* what) {
    if (xs.empty()) throw InvalidSpec(std::string(what) + " sweep is empty");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (!(xs[i] < xs[i + 1]))
        throw InvalidSpec(std::string(what) + " sweep must be strictly increasing");
    for (double x : xs)
      if (!std::isfinite(x))
        throw InvalidSpec(std::string(what) + " sweep has a non-finite value");
  }

  static void check_shots(int nshots) {
    if (nshots < 1) throw InvalidSpec("nshots must be >= 1");
  }

  std::map<std::string, double> base_meta(int q, int nshots) const {
    const QubitCalibration& c = cal_[q];
    return {{"nshots", static_cast<double>(nshots)},
            {"readout_frequency", c.readout_frequency.value},
            {"drive_frequency", c.drive_frequency.value},
            {"pi_pulse_amplitude", c.pi_pulse_amplitude.value},
            {"pi_pulse_duration", c.pi_pulse_duration.value}};
  }

  // Complex readout transmission at frequency f with the qubit in `state`.
  std::complex<double> transmission(const TrueQubitParams& t, double f,
                                    int state) const {
    double fr = t.resonator_frequency + state * t.dispersive_shift;
    double hw = 0.5 * t.resonator_linewidth;
    double mag = t.readout_baseline -
                 t.readout_dip_depth * hw * hw /
                     ((f - fr) * (f - fr) + hw * hw);
    double ph = std::atan2(2.0 * (f - fr), t.resonator_linewidth);
    return std::polar(mag, ph);
  }

  DataSet run_kind(const ResonatorSweep& s, int q, std::size_t target_index,
                   const ExperimentSpec& spec, CounterRng& rng) const {
    if (s.freqs.size() != spec.qubits.size())
      throw InvalidSpec("one frequency sweep required per target qubit");
    const std::vector<double>& freqs = s.freqs[target_index];
    check_sweep(freqs, "frequency");
    check_shots(s.nshots);
    if (s.prepared_state != 0 && s.prepared_state != 1)
      throw InvalidSpec("prepared_state must be 0 or 1");
    const TrueQubitParams& t = truth_[q];
    DataSet ds;
    ds.protocol = "resonator_sweep";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.meta["prepared_state"] = s.prepared_state;
    ds.add_numeric_column("freq");
    ds.add_numeric_column("msr");
    ds.add_numeric_column("phase");
    ds.add_numeric_column("i");
    ds.add_numeric_column("q");
    double noise = t.iq_sigma / std::sqrt(static_cast<double>(s.nshots));
    for (double f : freqs) {
      std::complex<double> sig = transmission(t, f, s.prepared_state);
      double iv = sig.real() + noise * rng.next_gaussian();
      double qv = sig.imag() + noise * rng.next_gaussian();
      ds.add_row({f, std::hypot(iv, qv), std::atan2(qv, iv), iv, qv});
    }
    return ds;
  }

  DataSet run_kind(const QubitDriveSweep& s, int q, std::size_t target_index,
                   const ExperimentSpec& spec, CounterRng& rng) const {
    if (s.drive_freqs.size() != spec.qubits.size())
      throw InvalidSpec("one frequency sweep required per target qubit");
    const std::vector<double>& freqs = s.drive_freqs[target_index];
    check_sweep(freqs, "drive frequency");
    check_shots(s.nshots);
    if (s.drive_amplitude < 0 || s.drive_duration <= 0)
      throw InvalidSpec("drive amplitude must be >= 0 and duration > 0");
    const TrueQubitParams& t = truth_[q];
    // Rabi rate in Hz chosen so that amplitude a_pi over pi_pulse_duration
    // is a pi rotation.
    double omega = s.drive_amplitude /
                   (2.0 * t.pi_pulse_amplitude * s.drive_duration);
    DataSet ds;
    ds.protocol = "qubit_drive_sweep";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.meta["drive_amplitude"] = s.drive_amplitude;
    ds.meta["drive_duration"] = s.drive_duration;
    ds.add_numeric_column("freq");
    ds.add_numeric_column("prob");
    for (double f : freqs) {
      double d = f - t.qubit_frequency;
      double pe = omega > 0 ? 0.5 * omega * omega / (omega * omega + d * d) : 0.0;
      ds.add_row({f, sample_probability(pe, s.nshots, rng)});
    }
    return ds;
  }

  DataSet run_kind(const RabiAmplitude& s, int q, std::size_t,
                   const ExperimentSpec&, CounterRng& rng) const {
    check_sweep(s.amplitudes, "amplitude");
    check_shots(s.nshots);
    if (s.amplitudes.front() < 0)
      throw InvalidSpec("amplitudes must be non-negative");
    if (s.duration <= 0) throw InvalidSpec("duration must be positive");
    const TrueQubitParams& t = truth_[q];
    DataSet ds;
    ds.protocol = "rabi_amplitude";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.meta["duration"] = s.duration;
    ds.add_numeric_column("amplitude");
    ds.add_numeric_column("prob");
    for (double a : s.amplitudes) {
      double theta = kPi * a * s.duration /
                     (t.pi_pulse_amplitude * t.pi_pulse_duration);
      double pe = std::sin(0.5 * theta) * std::sin(0.5 * theta);
      ds.add_row({a, sample_probability(pe, s.nshots, rng)});
    }
    return ds;
  }

  DataSet run_kind(const T1Delay& s, int q, std::size_t, const ExperimentSpec&,
                   CounterRng& rng) const {
    check_sweep(s.delays, "delay");
    check_shots(s.nshots);
    if (s.delays.front() < 0) throw InvalidSpec("delays must be non-negative");
    const TrueQubitParams& t = truth_[q];
    DataSet ds;
    ds.protocol = "t1_delay";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.add_numeric_column("delay");
    ds.add_numeric_column("prob");
    for (double dt : s.delays) {
      double pe = std::exp(-dt / t.t1);
      ds.add_row({dt, sample_probability(pe, s.nshots, rng)});
    }
    return ds;
  }

  DataSet run_kind(const Ramsey& s, int q, std::size_t, const ExperimentSpec&,
                   CounterRng& rng) const {
    check_sweep(s.delays, "delay");
    check_shots(s.nshots);
    if (s.delays.front() < 0) throw InvalidSpec("delays must be non-negative");
    const TrueQubitParams& t = truth_[q];
    // Fringe frequency = programmed detuning plus the residual error of the
    // currently calibrated drive frequency.
    double delta = s.detuning + (t.qubit_frequency - cal_[q].drive_frequency.value);
    DataSet ds;
    ds.protocol = "ramsey";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.meta["detuning"] = s.detuning;
    ds.add_numeric_column("delay");
    ds.add_numeric_column("prob");
    for (double dt : s.delays) {
      double pe = 0.5 * (1.0 + std::cos(2.0 * kPi * delta * dt) *
                                   std::exp(-dt / t.t2));
      ds.add_row({dt, sample_probability(pe, s.nshots, rng)});
    }
    return ds;
  }

  DataSet run_kind(const SingleShot& s, int q, std::size_t,
                   const ExperimentSpec&, CounterRng& rng) const {
    check_shots(s.nshots);
    const TrueQubitParams& t = truth_[q];
    const QubitCalibration& c = cal_[q];
    // Excited preparation goes through the calibrated pulse; an amplitude
    // or duration error leaves a ground-state admixture in the cloud.
    double theta = kPi * c.pi_pulse_amplitude.value * c.pi_pulse_duration.value /
                   (t.pi_pulse_amplitude * t.pi_pulse_duration);
    double prep = std::sin(0.5 * theta) * std::sin(0.5 * theta);
    DataSet ds;
    ds.protocol = "single_shot";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.add_numeric_column("state");
    ds.add_numeric_column("i");
    ds.add_numeric_column("q");
    for (int n = 0; n < s.nshots; ++n) {
      for (int prep_state = 0; prep_state <= 1; ++prep_state) {
        int state = prep_state == 1 ? (rng.bernoulli(prep) ? 1 : 0) : 0;
        if (rng.bernoulli(t.readout_flip_probability)) state = 1 - state;
        double mi = state ? t.iq_center_excited_i : t.iq_center_ground_i;
        double mq = state ? t.iq_center_excited_q : t.iq_center_ground_q;
        ds.add_row({static_cast<double>(prep_state),
                    mi + t.iq_sigma * rng.next_gaussian(),
                    mq + t.iq_sigma * rng.next_gaussian()});
      }
    }
    return ds;
  }

  DataSet run_kind(const GateSequence& s, int q, std::size_t target_index,
                   const ExperimentSpec& spec, CounterRng& rng) const {
    check_shots(s.nshots);
    if (s.sequences.size() != spec.qubits.size())
      throw InvalidSpec("one gate sequence required per target qubit");
    if (s.gates.empty()) throw InvalidSpec("empty gate vocabulary");
    const std::vector<int>& seq = s.sequences[target_index];
    for (int idx : seq)
      if (idx < 0 || idx >= static_cast<int>(s.gates.size()))
        throw InvalidSpec("gate index " + std::to_string(idx) +
                          " out of range");
    const TrueQubitParams& t = truth_[q];
    Density rho{1.0, 0.0, 0.0, 0.0};
    for (int idx : seq) {
      rho = apply_gate(rho, s.gates[idx]);
      rho = depolarize(rho, t.depolarizing_parameter);
    }
    double p0 = std::clamp(rho.r00.real(), 0.0, 1.0);
    double eps = t.readout_flip_probability;
    double p0_meas = (1 - eps) * p0 + eps * (1 - p0);
    int count0 = 0;
    for (int n = 0; n < s.nshots; ++n)
      if (rng.bernoulli(p0_meas)) ++count0;
    DataSet ds;
    ds.protocol = "gate_sequence";
    ds.qubit = q;
    ds.meta = base_meta(q, s.nshots);
    ds.add_numeric_column("count0");
    ds.add_numeric_column("count1");
    ds.add_row({static_cast<double>(count0),
                static_cast<double>(s.nshots - count0)});
    return ds;
  }

  static double sample_probability(double p, int nshots, CounterRng& rng) {
    int k = 0;
    for (int n = 0; n < nshots; ++n)
      if (rng.bernoulli(p)) ++k;
    return static_cast<double>(k) / nshots;
  }

  std::string name_;
  std::vector<TrueQubitParams> truth_;
  std::vector<QubitCalibration> cal_;
  std::uint64_t seed_;
  std::uint64_t call_counter_ = 0;
};

}  // namespace

TrueQubitParams default_qubit_params(int k) {
  TrueQubitParams p;
  p.resonator_frequency = 7.0e9 + 1.0e8 * k;
  p.resonator_linewidth = 1.0e6 + 5.0e4 * k;
  p.qubit_frequency = 5.0e9 + 6.0e7 * k;
  p.pi_pulse_amplitude = 0.4 + 0.02 * k;
  p.t1 = (50.0 - 3.0 * k) * 1e-6;
  p.t2 = 0.6 * p.t1;
  return p;
}

std::unique_ptr<Platform> make_sim_platform(
    const std::string& name, int default_num_qubits,
    const std::optional<std::filesystem::path>& parameter_file,
    std::uint64_t seed) {
  std::vector<TrueQubitParams> truth;
  if (parameter_file) {
    truth = load_parameter_file(*parameter_file);
  } else {
    for (int k = 0; k < default_num_qubits; ++k)
      truth.push_back(default_qubit_params(k));
  }
  return std::make_unique<SimPlatform>(name, std::move(truth), seed);
}

}  // namespace qcal::detail
