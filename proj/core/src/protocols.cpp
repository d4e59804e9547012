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

#include "qcal/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcal/gateset.hpp"
#include "qcal/rng.hpp"
#include "util.hpp"

namespace qcal {
namespace {

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> out;
  if (step <= 0 || hi < lo) return out;
  int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(lo + i * step);
  return out;
}

void stream_dataset(RowSink* sink, const DataSet& ds) {
  if (!sink) return;
  DataSet header = ds;
  for (auto& c : header.columns) {
    c.values.clear();
    c.strings.clear();
  }
  sink->begin_dataset(header);
  for (std::size_t r = 0; r < ds.num_rows(); ++r)
    sink->append_row(ds.qubit, ds.row(r));
}

ParamSpec num_param(std::string name, double def, std::optional<double> min,
                    std::optional<double> max, bool excl, std::string desc) {
  return {std::move(name), ParamType::number, def, min, max, excl,
          std::move(desc)};
}

ParamSpec int_param(std::string name, std::int64_t def,
                    std::optional<double> min, std::string desc) {
  return {std::move(name), ParamType::integer, def, min, std::nullopt, false,
          std::move(desc)};
}

// ---------------------------------------------------------------------
// Sweep-style protocols share the acquire -> analyze -> update structure.

class SweepProtocol : public Protocol {
 public:
  std::vector<QubitOutcome> run(Platform& platform,
                                std::span<const int> qubits,
                                const ParamMap& params,
                                const ProtocolContext& ctx,
                                RowSink* sink) const override {
    ExperimentSpec spec = acquire(platform, qubits, params, ctx);
    std::vector<DataSet> acquired = platform.execute(spec);
    std::vector<QubitOutcome> out;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      QubitOutcome o;
      o.qubit = qubits[i];
      o.data = std::move(acquired[i]);
      o.data.protocol = info().name;
      stream_dataset(sink, o.data);
      finish(platform, o, params);
      out.push_back(std::move(o));
    }
    return out;
  }

 protected:
  virtual ExperimentSpec acquire(Platform& platform,
                                 std::span<const int> qubits,
                                 const ParamMap& params,
                                 const ProtocolContext& ctx) const = 0;

  virtual CalibrationUpdate update_from(const FitResult& fit,
                                        const ParamMap& params,
                                        const QubitCalibration& cal) const = 0;

  void finish(Platform& platform, QubitOutcome& o,
              const ParamMap& params) const {
    try {
      FitResult fit = analyze(o.data, params);
      o.update = update_from(fit, params, platform.calibration(o.qubit));
      o.fit = std::move(fit);
      o.succeeded = true;
    } catch (const Error& e) {
      o.succeeded = false;
      o.error = e.what();
    }
  }
};

// ---------------------------------------------------------------------

class ResonatorSpectroscopy final : public SweepProtocol {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "resonator_spectroscopy",
        "Locates the readout resonator dip by sweeping around the current "
        "readout frequency guess.",
        {num_param("freq_width", 2e7, 0.0, std::nullopt, true,
                   "sweep width in Hz, centered on the current guess"),
         num_param("freq_step", 2e5, 0.0, std::nullopt, true,
                   "sweep step in Hz"),
         int_param("nshots", 1024, 1, "averages per point")},
        {"readout_frequency"},
        8,
        {PlotSpec::Kind::xy, "freq", "msr", "frequency (Hz)", "|S|"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override {
    if (param_as_number(p, "freq_width") / param_as_number(p, "freq_step") < 7)
      throw ParameterError("'freq_width'/'freq_step' gives fewer than 8 points");
  }

  FitResult analyze(const DataSet& ds, const ParamMap&) const override {
    return fit_lorentzian(ds.numeric_column("freq"), ds.numeric_column("msr"),
                          PeakSign::dip);
  }

 protected:
  ExperimentSpec acquire(Platform& platform, std::span<const int> qubits,
                         const ParamMap& params,
                         const ProtocolContext&) const override {
    double width = param_as_number(params, "freq_width");
    double step = param_as_number(params, "freq_step");
    ResonatorSweep sweep;
    sweep.nshots = static_cast<int>(param_as_int(params, "nshots"));
    for (int q : qubits) {
      double center = platform.calibration(q).readout_frequency.value;
      sweep.freqs.push_back(arange(center - width / 2, center + width / 2, step));
    }
    return {std::vector<int>(qubits.begin(), qubits.end()), std::move(sweep)};
  }

  CalibrationUpdate update_from(const FitResult& fit, const ParamMap&,
                                const QubitCalibration&) const override {
    CalibrationUpdate u;
    u.readout_frequency = fit.value("center");
    return u;
  }
};

class QubitSpectroscopy final : public SweepProtocol {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "qubit_spectroscopy",
        "Locates the qubit transition peak by sweeping the drive frequency.",
        {num_param("freq_width", 2e7, 0.0, std::nullopt, true, "sweep width, Hz"),
         num_param("freq_step", 2e5, 0.0, std::nullopt, true, "sweep step, Hz"),
         num_param("drive_amplitude", 0.05, 0.0, 1.0, false,
                   "probe drive amplitude"),
         num_param("drive_duration", 1e-7, 0.0, std::nullopt, true,
                   "probe pulse length, s"),
         int_param("nshots", 1024, 1, "shots per point")},
        {"drive_frequency"},
        8,
        {PlotSpec::Kind::xy, "freq", "prob", "drive frequency (Hz)",
         "P(excited)"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override {
    if (param_as_number(p, "freq_width") / param_as_number(p, "freq_step") < 7)
      throw ParameterError("'freq_width'/'freq_step' gives fewer than 8 points");
  }

  FitResult analyze(const DataSet& ds, const ParamMap&) const override {
    return fit_lorentzian(ds.numeric_column("freq"), ds.numeric_column("prob"),
                          PeakSign::peak);
  }

 protected:
  ExperimentSpec acquire(Platform& platform, std::span<const int> qubits,
                         const ParamMap& params,
                         const ProtocolContext&) const override {
    double width = param_as_number(params, "freq_width");
    double step = param_as_number(params, "freq_step");
    QubitDriveSweep sweep;
    sweep.drive_amplitude = param_as_number(params, "drive_amplitude");
    sweep.drive_duration = param_as_number(params, "drive_duration");
    sweep.nshots = static_cast<int>(param_as_int(params, "nshots"));
    for (int q : qubits) {
      double center = platform.calibration(q).drive_frequency.value;
      sweep.drive_freqs.push_back(
          arange(center - width / 2, center + width / 2, step));
    }
    return {std::vector<int>(qubits.begin(), qubits.end()), std::move(sweep)};
  }

  CalibrationUpdate update_from(const FitResult& fit, const ParamMap&,
                                const QubitCalibration&) const override {
    CalibrationUpdate u;
    u.drive_frequency = fit.value("center");
    return u;
  }
};

class RabiAmplitudeProtocol final : public SweepProtocol {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "rabi_amplitude",
        "Sweeps the drive amplitude at fixed duration; the oscillation "
        "period fixes the pi-pulse amplitude.",
        {num_param("amplitude_min", 0.0, 0.0, 1.0, false, "sweep start"),
         num_param("amplitude_max", 1.0, 0.0, 1.0, false, "sweep end"),
         num_param("amplitude_step", 0.02, 0.0, 1.0, true, "sweep step"),
         int_param("nshots", 1024, 1, "shots per point")},
        {"pi_pulse_amplitude", "pi_pulse_duration"},
        10,
        {PlotSpec::Kind::xy, "amplitude", "prob", "drive amplitude",
         "P(excited)"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override {
    if (param_as_number(p, "amplitude_max") <=
        param_as_number(p, "amplitude_min"))
      throw ParameterError("'amplitude_max' must exceed 'amplitude_min'");
  }

  FitResult analyze(const DataSet& ds, const ParamMap&) const override {
    FitResult fit = fit_oscillation(ds.numeric_column("amplitude"),
                                    ds.numeric_column("prob"), false);
    fit.derived["pi_pulse_amplitude"] = 1.0 / (2.0 * fit.value("frequency"));
    return fit;
  }

 protected:
  ExperimentSpec acquire(Platform& platform, std::span<const int> qubits,
                         const ParamMap& params,
                         const ProtocolContext&) const override {
    RabiAmplitude sweep;
    sweep.amplitudes = arange(param_as_number(params, "amplitude_min"),
                              param_as_number(params, "amplitude_max"),
                              param_as_number(params, "amplitude_step"));
    sweep.duration = platform.calibration(qubits[0]).pi_pulse_duration.value;
    sweep.nshots = static_cast<int>(param_as_int(params, "nshots"));
    return {std::vector<int>(qubits.begin(), qubits.end()), std::move(sweep)};
  }

  CalibrationUpdate update_from(const FitResult& fit, const ParamMap&,
                                const QubitCalibration& cal) const override {
    CalibrationUpdate u;
    u.pi_pulse_amplitude = fit.derived.at("pi_pulse_amplitude");
    // The amplitude is only meaningful together with the duration it was
    // swept at.
    u.pi_pulse_duration = cal.pi_pulse_duration.value;
    return u;
  }
};

class T1Protocol final : public SweepProtocol {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "t1",
        "Excites the qubit and measures the population decay against a "
        "variable delay.",
        {num_param("delay_min", 0.0, 0.0, std::nullopt, false, "s"),
         num_param("delay_max", 1.5e-4, 0.0, std::nullopt, true, "s"),
         num_param("delay_step", 2e-6, 0.0, std::nullopt, true, "s"),
         int_param("nshots", 1024, 1, "shots per point")},
        {"t1"},
        6,
        {PlotSpec::Kind::xy, "delay", "prob", "delay (s)", "P(excited)"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override {
    if (param_as_number(p, "delay_max") <= param_as_number(p, "delay_min"))
      throw ParameterError("'delay_max' must exceed 'delay_min'");
  }

  FitResult analyze(const DataSet& ds, const ParamMap&) const override {
    return fit_exp_decay(ds.numeric_column("delay"), ds.numeric_column("prob"));
  }

 protected:
  ExperimentSpec acquire(Platform&, std::span<const int> qubits,
                         const ParamMap& params,
                         const ProtocolContext&) const override {
    T1Delay sweep;
    sweep.delays = arange(param_as_number(params, "delay_min"),
                          param_as_number(params, "delay_max"),
                          param_as_number(params, "delay_step"));
    sweep.nshots = static_cast<int>(param_as_int(params, "nshots"));
    return {std::vector<int>(qubits.begin(), qubits.end()), std::move(sweep)};
  }

  CalibrationUpdate update_from(const FitResult& fit, const ParamMap&,
                                const QubitCalibration&) const override {
    CalibrationUpdate u;
    u.t1 = fit.value("t_decay");
    return u;
  }
};

class RamseyProtocol final : public Protocol {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "ramsey",
        "Two half rotations around a variable delay; the fringe frequency "
        "refines the drive frequency and the envelope gives T2. A second "
        "sweep at a shifted detuning resolves the sign of the correction.",
        {num_param("delay_min", 0.0, 0.0, std::nullopt, false, "s"),
         num_param("delay_max", 8e-5, 0.0, std::nullopt, true, "s"),
         num_param("delay_step", 5e-7, 0.0, std::nullopt, true, "s"),
         num_param("detuning", 5e5, 0.0, std::nullopt, true,
                   "programmed detuning, Hz"),
         int_param("nshots", 1024, 1, "shots per point")},
        {"t2", "drive_frequency"},
        10,
        {PlotSpec::Kind::xy, "delay", "prob", "delay (s)", "P(excited)"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override {
    if (param_as_number(p, "delay_max") <= param_as_number(p, "delay_min"))
      throw ParameterError("'delay_max' must exceed 'delay_min'");
    double fringe = param_as_number(p, "detuning");
    double nyquist = 0.5 / param_as_number(p, "delay_step");
    if (fringe >= 0.8 * nyquist)
      throw ParameterError(
          "'detuning' too close to the sweep Nyquist frequency; reduce "
          "'delay_step'");
  }

  std::vector<QubitOutcome> run(Platform& platform,
                                std::span<const int> qubits,
                                const ParamMap& params, const ProtocolContext&,
                                RowSink* sink) const override {
    double detuning = param_as_number(params, "detuning");
    std::vector<double> delays = arange(param_as_number(params, "delay_min"),
                                        param_as_number(params, "delay_max"),
                                        param_as_number(params, "delay_step"));
    int nshots = static_cast<int>(param_as_int(params, "nshots"));
    std::vector<int> targets(qubits.begin(), qubits.end());

    auto sweep = [&](double det) {
      Ramsey r;
      r.delays = delays;
      r.detuning = det;
      r.nshots = nshots;
      return platform.execute({targets, std::move(r)});
    };
    std::vector<DataSet> main = sweep(detuning);
    std::vector<DataSet> confirm = sweep(detuning + kConfirmationShift);

    std::vector<QubitOutcome> out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      QubitOutcome o;
      o.qubit = targets[i];
      o.data = combine(main[i], confirm[i], detuning);
      stream_dataset(sink, o.data);
      try {
        FitResult primary = analyze(o.data, params);
        FitResult second = fit_group(o.data, detuning + kConfirmationShift);
        double r = resolve_residual(primary.value("frequency"),
                                    second.value("frequency"), detuning);
        const QubitCalibration& cal = platform.calibration(o.qubit);
        o.update.t2 = primary.value("decay_time");
        o.update.drive_frequency = cal.drive_frequency.value + r;
        primary.derived["residual_detuning"] = r;
        primary.derived["confirmation_fringe"] = second.value("frequency");
        o.extra_fits.emplace_back("confirmation", std::move(second));
        o.fit = std::move(primary);
        o.succeeded = true;
      } catch (const Error& e) {
        o.succeeded = false;
        o.error = e.what();
      }
      out.push_back(std::move(o));
    }
    return out;
  }

  FitResult analyze(const DataSet& ds, const ParamMap& params) const override {
    return fit_group(ds, param_as_number(params, "detuning"));
  }

 private:
  static constexpr double kConfirmationShift = 2e5;

  static DataSet combine(const DataSet& main, const DataSet& confirm,
                         double detuning) {
    DataSet ds;
    ds.protocol = "ramsey";
    ds.qubit = main.qubit;
    ds.meta = main.meta;
    ds.add_numeric_column("delay");
    ds.add_numeric_column("detuning");
    ds.add_numeric_column("prob");
    auto emit = [&](const DataSet& src, double det) {
      const auto& delay = src.numeric_column("delay");
      const auto& prob = src.numeric_column("prob");
      for (std::size_t r = 0; r < delay.size(); ++r)
        ds.add_row({delay[r], det, prob[r]});
    };
    emit(main, detuning);
    emit(confirm, detuning + kConfirmationShift);
    return ds;
  }

  /// Damped-oscillation fit over the rows whose detuning matches `det`.
  static FitResult fit_group(const DataSet& ds, double det) {
    const auto& delay = ds.numeric_column("delay");
    const auto& detcol = ds.numeric_column("detuning");
    const auto& prob = ds.numeric_column("prob");
    std::vector<double> x, y;
    for (std::size_t r = 0; r < delay.size(); ++r) {
      if (std::fabs(detcol[r] - det) > 1e-6) continue;
      x.push_back(delay[r]);
      y.push_back(prob[r]);
    }
    return fit_oscillation(x, y, true);
  }

  /// The fringe gives |detuning + residual|; the shifted acquisition picks
  /// the sign.
  static double resolve_residual(double fringe1, double fringe2,
                                 double detuning) {
    double ra = fringe1 - detuning;
    double rb = -fringe1 - detuning;
    double pa = std::fabs(detuning + kConfirmationShift + ra);
    double pb = std::fabs(detuning + kConfirmationShift + rb);
    return std::fabs(pa - fringe2) <= std::fabs(pb - fringe2) ? ra : rb;
  }
};

class SingleShotClassification final : public SweepProtocol {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "single_shot_classification",
        "Acquires ground- and pi-pulse-prepared IQ clouds and trains the "
        "rotation-plus-threshold discriminator.",
        {int_param("nshots", 5000, 100, "shots per prepared state")},
        {"iq_angle", "threshold", "assignment_fidelity"},
        200,
        {PlotSpec::Kind::iq, "i", "q", "I", "Q"}};
    return kInfo;
  }

  FitResult analyze(const DataSet& ds, const ParamMap&) const override {
    const auto& state = ds.numeric_column("state");
    const auto& iv = ds.numeric_column("i");
    const auto& qv = ds.numeric_column("q");
    std::vector<IqPoint> ground, excited;
    for (std::size_t r = 0; r < state.size(); ++r) {
      if (state[r] == 0.0)
        ground.push_back({iv[r], qv[r]});
      else
        excited.push_back({iv[r], qv[r]});
    }
    return train_classifier(ground, excited);
  }

 protected:
  ExperimentSpec acquire(Platform&, std::span<const int> qubits,
                         const ParamMap& params,
                         const ProtocolContext&) const override {
    SingleShot s;
    s.nshots = static_cast<int>(param_as_int(params, "nshots"));
    return {std::vector<int>(qubits.begin(), qubits.end()), s};
  }

  CalibrationUpdate update_from(const FitResult& fit, const ParamMap&,
                                const QubitCalibration&) const override {
    CalibrationUpdate u;
    u.iq_angle = fit.value("iq_angle");
    u.threshold = fit.value("threshold");
    u.assignment_fidelity = fit.value("assignment_fidelity");
    return u;
  }
};

// ---------------------------------------------------------------------
// Gate-set characterization protocols.

std::string gates_to_string(const std::vector<int>& gates) {
  std::string out;
  for (int g : gates) {
    out += std::to_string(g);
    out += ';';
  }
  return out;
}

std::vector<int> gates_from_string(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t sep = s.find(';', pos);
    if (sep == std::string::npos) sep = s.size();
    if (sep > pos) out.push_back(std::stoi(s.substr(pos, sep - pos)));
    pos = sep + 1;
  }
  return out;
}

std::vector<CircuitRecord> records_from_dataset(const DataSet& ds) {
  const auto& depth = ds.numeric_column("depth");
  const auto& count0 = ds.numeric_column("count0");
  const auto& count1 = ds.numeric_column("count1");
  const Column* gates = ds.find_column("gates");
  if (!gates || gates->numeric)
    throw FormatError("dataset has no 'gates' string column");
  std::vector<CircuitRecord> recs;
  for (std::size_t r = 0; r < depth.size(); ++r) {
    CircuitRecord rec;
    rec.depth = static_cast<int>(depth[r]);
    rec.gates = gates_from_string(gates->strings[r]);
    rec.count0 = static_cast<long>(count0[r]);
    rec.count1 = static_cast<long>(count1[r]);
    recs.push_back(std::move(rec));
  }
  return recs;
}

std::uint64_t ensemble_seed(const ProtocolContext& ctx, int qubit) {
  std::uint64_t s = mix64(ctx.seed ^ 0x7262656e63680000ULL);
  s = mix64(s ^ static_cast<std::uint64_t>(ctx.action_index));
  return mix64(s ^ static_cast<std::uint64_t>(qubit));
}

class GatesetProtocolBase : public Protocol {
 protected:
  struct EnsembleParams {
    std::vector<int> depths;
    int circuits_per_depth;
    int nshots;
  };

  static EnsembleParams ensemble_params(const ParamMap& params) {
    EnsembleParams e;
    for (auto d : param_as_int_list(params, "depths"))
      e.depths.push_back(static_cast<int>(d));
    e.circuits_per_depth =
        static_cast<int>(param_as_int(params, "circuits_per_depth"));
    e.nshots = static_cast<int>(param_as_int(params, "nshots"));
    return e;
  }

  static void check_depths(const ParamMap& p, std::size_t min_distinct) {
    auto depths = param_as_int_list(p, "depths");
    for (std::size_t i = 0; i < depths.size(); ++i) {
      if (depths[i] < 0) throw ParameterError("'depths' must be >= 0");
      if (i > 0 && depths[i] <= depths[i - 1])
        throw ParameterError("'depths' must be strictly increasing");
    }
    if (depths.size() < min_distinct)
      throw ParameterError("'depths' needs at least " +
                           std::to_string(min_distinct) + " entries");
  }

  /// Samples per-qubit ensembles and executes them slot by slot with one
  /// multiplexed GateSequence call per circuit slot. Streams per-circuit
  /// rows and returns one dataset per qubit.
  std::vector<DataSet> execute_ensembles(
      Platform& platform, std::span<const int> qubits, const GateSet& gs,
      const EnsembleParams& e, bool append_inverse,
      const ProtocolContext& ctx, RowSink* sink) const {
    std::vector<std::vector<Circuit>> circuits;
    for (int q : qubits) {
      CircuitEnsembleSpec spec;
      spec.gate_set = gs;
      spec.depths = e.depths;
      spec.circuits_per_depth = e.circuits_per_depth;
      spec.shots_per_circuit = e.nshots;
      spec.append_inverse = append_inverse;
      spec.seed = ensemble_seed(ctx, q);
      circuits.push_back(sample_circuits(spec));
    }

    std::vector<DataSet> out(qubits.size());
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      DataSet& ds = out[i];
      ds.protocol = info().name;
      ds.qubit = qubits[i];
      ds.meta["nshots"] = e.nshots;
      ds.meta["circuits_per_depth"] = e.circuits_per_depth;
      ds.add_numeric_column("depth");
      ds.add_numeric_column("circuit");
      ds.add_string_column("gates");
      ds.add_numeric_column("count0");
      ds.add_numeric_column("count1");
      ds.add_numeric_column("survival");
      stream_dataset(sink, ds);  // header only; rows follow
    }

    std::size_t slots = circuits[0].size();
    for (std::size_t s = 0; s < slots; ++s) {
      ExperimentSpec spec;
      spec.qubits.assign(qubits.begin(), qubits.end());
      GateSequence gseq;
      gseq.gates = gs.elements;
      gseq.nshots = e.nshots;
      for (std::size_t i = 0; i < qubits.size(); ++i)
        gseq.sequences.push_back(circuits[i][s].gates);
      spec.kind = std::move(gseq);
      std::vector<DataSet> result = platform.execute(spec);
      for (std::size_t i = 0; i < qubits.size(); ++i) {
        double c0 = result[i].numeric_column("count0").at(0);
        double c1 = result[i].numeric_column("count1").at(0);
        std::vector<Cell> row = {
            static_cast<double>(circuits[i][s].depth),
            static_cast<double>(s),
            gates_to_string(circuits[i][s].gates),
            c0,
            c1,
            c0 / (c0 + c1)};
        out[i].add_row(row);
        if (sink) sink->append_row(qubits[i], row);
      }
    }
    return out;
  }
};

class StandardRbProtocol final : public GatesetProtocolBase {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "standard_rb",
        "Standard randomized benchmarking on the single-qubit Clifford "
        "group: inverse-appended random circuits, ground-state return "
        "probability, A*p^m + B decay.",
        {{"depths", ParamType::integer_list,
          std::vector<std::int64_t>{1, 2, 5, 10, 20, 50, 100, 200},
          std::nullopt, std::nullopt, false, "circuit depths"},
         int_param("circuits_per_depth", 30, 1, "random circuits per depth"),
         int_param("nshots", 256, 1, "shots per circuit")},
        {},
        4,
        {PlotSpec::Kind::rb, "depth", "survival", "sequence length",
         "P(return to ground)"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override { check_depths(p, 4); }

  std::vector<QubitOutcome> run(Platform& platform,
                                std::span<const int> qubits,
                                const ParamMap& params,
                                const ProtocolContext& ctx,
                                RowSink* sink) const override {
    GateSet gs = clifford_group();
    std::vector<DataSet> data = execute_ensembles(
        platform, qubits, gs, ensemble_params(params), true, ctx, sink);
    std::vector<QubitOutcome> out;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      QubitOutcome o;
      o.qubit = qubits[i];
      o.data = std::move(data[i]);
      try {
        DepthAggregate agg;
        FitResult fit =
            standard_rb_estimate(records_from_dataset(o.data), &agg);
        o.series["depths"] = agg.depths;
        o.series["means"] = agg.means;
        o.fit = std::move(fit);
        o.succeeded = true;
      } catch (const Error& e) {
        o.succeeded = false;
        o.error = e.what();
      }
      out.push_back(std::move(o));
    }
    return out;
  }

  FitResult analyze(const DataSet& ds, const ParamMap&) const override {
    return standard_rb_estimate(records_from_dataset(ds));
  }
};

class FilteredRbProtocol final : public GatesetProtocolBase {
 public:
  const ProtocolInfo& info() const override {
    static const ProtocolInfo kInfo = {
        "filtered_rb",
        "Filtered randomized benchmarking on a small abelian gate set: "
        "character-weighted statistics per irrep, fitted to A*p^m.",
        {{"gateset", ParamType::string, std::string("xid"), std::nullopt,
          std::nullopt, false, "\"xid\" or \"pauli\""},
         {"depths", ParamType::integer_list,
          std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64}, std::nullopt,
          std::nullopt, false, "circuit depths"},
         int_param("circuits_per_depth", 30, 1, "random circuits per depth"),
         int_param("nshots", 256, 1, "shots per circuit")},
        {},
        4,
        {PlotSpec::Kind::rb, "depth", "survival", "sequence length",
         "P(return to ground)"}};
    return kInfo;
  }

  void check_params(const ParamMap& p) const override {
    check_depths(p, 4);
    std::string gs = param_as_string(p, "gateset");
    if (gs != "xid" && gs != "pauli")
      throw ParameterError("'gateset' must be \"xid\" or \"pauli\", got '" +
                           gs + "'");
  }

  std::vector<QubitOutcome> run(Platform& platform,
                                std::span<const int> qubits,
                                const ParamMap& params,
                                const ProtocolContext& ctx,
                                RowSink* sink) const override {
    GateSet gs = make_gateset(params);
    std::vector<DataSet> data = execute_ensembles(
        platform, qubits, gs, ensemble_params(params), false, ctx, sink);
    std::vector<QubitOutcome> out;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      QubitOutcome o;
      o.qubit = qubits[i];
      o.data = std::move(data[i]);
      try {
        auto irreps = filtered_rb_estimate(gs, records_from_dataset(o.data));
        bool any = false;
        for (auto& ir : irreps) {
          o.series[ir.name + ":depths"] = ir.aggregate.depths;
          o.series[ir.name + ":means"] = ir.aggregate.means;
          if (ir.fit) {
            if (!any) {
              o.fit = *ir.fit;
              o.notes[ir.name] = "fitted (primary)";
            } else {
              o.extra_fits.emplace_back(ir.name, *ir.fit);
              o.notes[ir.name] = "fitted";
            }
            any = true;
          } else if (ir.trivial) {
            o.notes[ir.name] = "trivial irrep (reported, not fitted)";
          } else if (!ir.error.empty()) {
            o.notes[ir.name] = ir.error;
          } else {
            o.notes[ir.name] = "no signal";
          }
        }
        o.succeeded = any;
        if (!any) o.error = "no irrep produced a decay fit";
      } catch (const Error& e) {
        o.succeeded = false;
        o.error = e.what();
      }
      out.push_back(std::move(o));
    }
    return out;
  }

  FitResult analyze(const DataSet& ds, const ParamMap& params) const override {
    GateSet gs = make_gateset(params);
    auto irreps = filtered_rb_estimate(gs, records_from_dataset(ds));
    for (const auto& ir : irreps)
      if (ir.fit) return *ir.fit;
    throw FitDiverged("no irrep produced a decay fit");
  }

 private:
  static GateSet make_gateset(const ParamMap& params) {
    std::string name = param_as_string(params, "gateset");
    if (name == "pauli") return pauli_gateset();
    return xid_gateset();
  }
};

}  // namespace

// ---------------------------------------------------------------------

void ProtocolRegistry::add(std::unique_ptr<Protocol> protocol) {
  protocols_.push_back(std::move(protocol));
}

const Protocol* ProtocolRegistry::find(const std::string& name) const {
  for (const auto& p : protocols_)
    if (p->info().name == name) return p.get();
  return nullptr;
}

std::vector<std::string> ProtocolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& p : protocols_) out.push_back(p->info().name);
  return out;
}

const ProtocolRegistry& ProtocolRegistry::standard() {
  static const ProtocolRegistry registry = [] {
    ProtocolRegistry r;
    r.add(std::make_unique<ResonatorSpectroscopy>());
    r.add(std::make_unique<QubitSpectroscopy>());
    r.add(std::make_unique<RabiAmplitudeProtocol>());
    r.add(std::make_unique<RamseyProtocol>());
    r.add(std::make_unique<T1Protocol>());
    r.add(std::make_unique<SingleShotClassification>());
    r.add(std::make_unique<StandardRbProtocol>());
    r.add(std::make_unique<FilteredRbProtocol>());
    return r;
  }();
  return registry;
}

}  // namespace qcal
