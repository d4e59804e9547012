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

#include "qcal/gateset.hpp"

#include <algorithm>
#include <cmath>

#include "qcal/errors.hpp"
#include "qcal/rng.hpp"

namespace qcal {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Unitary2 gate_identity() { return {1, 0, 0, 1}; }
Unitary2 gate_h() { return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}; }
Unitary2 gate_s() { return {1, 0, 0, {0, 1}}; }
Unitary2 gate_x() { return {0, 1, 1, 0}; }
Unitary2 gate_y() { return {0, {0, -1}, {0, 1}, 0}; }
Unitary2 gate_z() { return {1, 0, 0, -1}; }

int find_mod_phase(const std::vector<Unitary2>& elems, const Unitary2& u) {
  for (int i = 0; i < static_cast<int>(elems.size()); ++i)
    if (same_up_to_phase(elems[i], u)) return i;
  return -1;
}

void fill_tables(GateSet& gs) {
  const int n = gs.size();
  gs.compose_table.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      int idx = find_mod_phase(gs.elements, gs.elements[a] * gs.elements[b]);
      if (idx < 0)
        throw InvariantViolation("gate set '" + gs.name +
                                 "' is not closed under composition");
      gs.compose_table[a][b] = idx;
    }
  }
  gs.inverse_table.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (gs.compose_table[a][b] == 0 && gs.compose_table[b][a] == 0) {
        gs.inverse_table[a] = b;
        break;
      }
    if (gs.inverse_table[a] < 0)
      throw InvariantViolation("gate set '" + gs.name + "' misses an inverse");
  }
  gs.sampling.assign(n, 1.0 / n);
  gs.abelian = true;
  for (int a = 0; a < n && gs.abelian; ++a)
    for (int b = 0; b < n; ++b)
      if (gs.compose_table[a][b] != gs.compose_table[b][a]) {
        gs.abelian = false;
        break;
      }
}

// All homomorphisms G -> {+1,-1}, found by brute force over sign vectors.
// Fine for the small abelian sets shipped here.
void fill_characters(GateSet& gs) {
  gs.characters.clear();
  if (!gs.abelian || gs.size() > 16) return;
  const int n = gs.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (mask & 1u) continue;  // chi(identity) must be +1
    std::vector<double> chi(n);
    for (int i = 0; i < n; ++i) chi[i] = (mask >> i) & 1u ? -1.0 : 1.0;
    bool hom = true;
    for (int a = 0; a < n && hom; ++a)
      for (int b = 0; b < n; ++b)
        if (chi[gs.compose_table[a][b]] != chi[a] * chi[b]) {
          hom = false;
          break;
        }
    if (hom) gs.characters.push_back(chi);
  }
  std::sort(gs.characters.begin(), gs.characters.end(),
            [](const auto& a, const auto& b) {
              return std::lexicographical_compare(b.begin(), b.end(),
                                                  a.begin(), a.end());
            });  // trivial (all +1) first
}

void validate_ensemble(const CircuitEnsembleSpec& spec) {
  if (spec.gate_set.size() == 0) throw InvalidSpec("empty gate set");
  if (spec.depths.empty()) throw InvalidSpec("depth list is empty");
  for (std::size_t i = 0; i < spec.depths.size(); ++i) {
    if (spec.depths[i] < 0) throw InvalidSpec("depths must be >= 0");
    if (i > 0 && spec.depths[i] <= spec.depths[i - 1])
      throw InvalidSpec("depths must be strictly increasing");
  }
  if (spec.circuits_per_depth < 1)
    throw InvalidSpec("circuits_per_depth must be >= 1");
  if (spec.shots_per_circuit < 1)
    throw InvalidSpec("shots_per_circuit must be >= 1");
}

}  // namespace

GateSet clifford_group() {
  GateSet gs;
  gs.name = "clifford";
  gs.elements = {gate_identity()};
  const std::vector<Unitary2> generators = {gate_h(), gate_s()};
  // Closure by breadth-first multiplication; order is deterministic.
  for (std::size_t i = 0; i < gs.elements.size(); ++i) {
    for (const Unitary2& g : generators) {
      Unitary2 prod = g * gs.elements[i];
      if (find_mod_phase(gs.elements, prod) < 0) gs.elements.push_back(prod);
    }
  }
  fill_tables(gs);
  return gs;
}

GateSet pauli_gateset() {
  GateSet gs;
  gs.name = "pauli";
  gs.elements = {gate_identity(), gate_x(), gate_y(), gate_z()};
  fill_tables(gs);
  fill_characters(gs);
  return gs;
}

GateSet xid_gateset() {
  GateSet gs;
  gs.name = "xid";
  gs.elements = {gate_identity(), gate_x()};
  fill_tables(gs);
  fill_characters(gs);
  return gs;
}

std::vector<Circuit> sample_circuits(const CircuitEnsembleSpec& spec) {
  validate_ensemble(spec);
  const int n = spec.gate_set.size();
  std::vector<double> cdf(n);
  double acc = 0.0;
  double total = 0.0;
  for (double w : spec.gate_set.sampling) total += w;
  if (total <= 0) throw InvalidSpec("sampling weights must sum to > 0");
  for (int i = 0; i < n; ++i) {
    acc += spec.gate_set.sampling[i] / total;
    cdf[i] = acc;
  }
  cdf[n - 1] = 1.0;

  CounterRng rng(spec.seed, 0x67617465u, 0);  // dedicated sampling stream
  std::vector<Circuit> out;
  out.reserve(spec.depths.size() * spec.circuits_per_depth);
  for (int depth : spec.depths) {
    for (int c = 0; c < spec.circuits_per_depth; ++c) {
      Circuit circ;
      circ.depth = depth;
      circ.gates.reserve(depth + (spec.append_inverse ? 1 : 0));
      for (int g = 0; g < depth; ++g) {
        double u = rng.next_double();
        int idx = static_cast<int>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        circ.gates.push_back(std::min(idx, n - 1));
      }
      if (spec.append_inverse) {
        int total_idx = spec.gate_set.compose_sequence(circ.gates);
        circ.gates.push_back(spec.gate_set.inverse(total_idx));
      }
      out.push_back(std::move(circ));
    }
  }
  return out;
}

std::vector<CircuitRecord> run_circuits(Platform& platform, int qubit,
                                        const GateSet& gates,
                                        const std::vector<Circuit>& circuits,
                                        int shots_per_circuit) {
  std::vector<CircuitRecord> records;
  records.reserve(circuits.size());
  for (const Circuit& c : circuits) {
    ExperimentSpec spec;
    spec.qubits = {qubit};
    GateSequence gseq;
    gseq.gates = gates.elements;
    gseq.sequences = {c.gates};
    gseq.nshots = shots_per_circuit;
    spec.kind = std::move(gseq);
    DataSet ds = platform.execute(spec).at(0);
    CircuitRecord rec;
    rec.depth = c.depth;
    rec.gates = c.gates;
    rec.count0 = static_cast<long>(ds.numeric_column("count0").at(0));
    rec.count1 = static_cast<long>(ds.numeric_column("count1").at(0));
    records.push_back(std::move(rec));
  }
  return records;
}

DepthAggregate aggregate_by_depth(
    const std::vector<CircuitRecord>& records,
    const std::function<double(const CircuitRecord&)>& per_circuit) {
  std::vector<int> depths;
  for (const auto& r : records)
    if (std::find(depths.begin(), depths.end(), r.depth) == depths.end())
      depths.push_back(r.depth);
  std::sort(depths.begin(), depths.end());

  DepthAggregate agg;
  for (int d : depths) {
    double sum = 0.0, sumsq = 0.0;
    int c = 0;
    for (const auto& r : records) {
      if (r.depth != d) continue;
      double v = per_circuit(r);
      sum += v;
      sumsq += v * v;
      ++c;
    }
    double mean = sum / c;
    double var = c > 1 ? std::max((sumsq - c * mean * mean) / (c - 1), 0.0)
                       : 0.0;
    agg.depths.push_back(d);
    agg.means.push_back(mean);
    agg.sems.push_back(c > 0 ? std::sqrt(var / c) : 0.0);
    agg.counts.push_back(c);
  }
  return agg;
}

double filtered_statistic(const GateSet& gates,
                          std::span<const double> character,
                          const CircuitRecord& record) {
  int total = gates.compose_sequence(record.gates);
  double p0 = record.survival();
  return character[total] * (p0 - 0.5) * 2.0;
}

FitResult standard_rb_estimate(const std::vector<CircuitRecord>& records,
                               DepthAggregate* aggregate_out) {
  DepthAggregate agg = aggregate_by_depth(
      records, [](const CircuitRecord& r) { return r.survival(); });
  if (aggregate_out) *aggregate_out = agg;
  return fit_rb_decay(agg.depths, agg.means);
}

StandardRbResult run_standard_rb(Platform& platform, int qubit,
                                 const CircuitEnsembleSpec& spec) {
  validate_ensemble(spec);
  std::vector<int> distinct = spec.depths;
  if (distinct.size() < 4)
    throw InvalidSpec("standard RB needs at least 4 depths");
  std::vector<Circuit> circuits = sample_circuits(spec);
  StandardRbResult out;
  out.records = run_circuits(platform, qubit, spec.gate_set, circuits,
                             spec.shots_per_circuit);
  out.fit = standard_rb_estimate(out.records, &out.aggregate);
  out.avg_gate_fidelity = out.fit.derived.at("avg_gate_fidelity");
  return out;
}

std::vector<IrrepResult> filtered_rb_estimate(
    const GateSet& gates, const std::vector<CircuitRecord>& records) {
  if (gates.characters.empty())
    throw InvalidSpec("filtered RB needs an abelian gate set with characters");
  std::vector<IrrepResult> out;
  for (std::size_t li = 0; li < gates.characters.size(); ++li) {
    IrrepResult ir;
    ir.name = "lambda" + std::to_string(li);
    ir.character = gates.characters[li];
    ir.trivial = std::all_of(ir.character.begin(), ir.character.end(),
                             [](double c) { return c == 1.0; });
    ir.aggregate = aggregate_by_depth(records, [&](const CircuitRecord& r) {
      return filtered_statistic(gates, ir.character, r);
    });
    // Signal test: most depth groups must show a mean clearly above its
    // standard error, otherwise there is nothing to fit.
    std::size_t significant = 0;
    for (std::size_t d = 0; d < ir.aggregate.depths.size(); ++d)
      if (std::fabs(ir.aggregate.means[d]) >
          std::max(3.0 * ir.aggregate.sems[d], 1e-12))
        ++significant;
    ir.has_signal = significant * 2 >= ir.aggregate.depths.size();
    if (!ir.trivial && ir.has_signal) {
      try {
        // Offset-free decay: fit A*p^m with B pinned at 0 by fitting the
        // full model on mean data augmented with its asymptote at large m.
        FitResult fit = [&] {
          std::span<const double> d(ir.aggregate.depths);
          std::span<const double> m(ir.aggregate.means);
          // Seed from the first/last depth groups.
          double first = m.front(), last = m.back();
          double p0 = 0.95;
          if (first != 0.0 && last / first > 0)
            p0 = std::clamp(
                std::pow(last / first, 1.0 / (d.back() - d.front())), 0.5,
                0.99999);
          double a0 = first / std::pow(p0, d.front());
          Bounds b;
          b.lower = {-1e30, 1e-9};
          b.upper = {1e30, 1.0};
          ModelFn fn = [](double x, std::span<const double> p) {
            return p[0] * std::pow(p[1], x);
          };
          FitResult r = least_squares(fn, d, m, {a0, p0}, b);
          r.model = "filtered_rb_decay";
          r.param_names = {"A", "p"};
          return r;
        }();
        for (double v : fit.values)
          if (!std::isfinite(v)) throw FitDiverged("non-finite estimate");
        ir.fit = std::move(fit);
      } catch (const Error& e) {
        ir.error = e.what();
      }
    }
    out.push_back(std::move(ir));
  }
  return out;
}

FilteredRbResult run_filtered_rb(Platform& platform, int qubit,
                                 const CircuitEnsembleSpec& spec) {
  validate_ensemble(spec);
  CircuitEnsembleSpec s = spec;
  s.append_inverse = false;
  std::vector<Circuit> circuits = sample_circuits(s);
  FilteredRbResult out;
  out.records = run_circuits(platform, qubit, s.gate_set, circuits,
                             s.shots_per_circuit);
  out.irreps = filtered_rb_estimate(s.gate_set, out.records);
  return out;
}

}  // namespace qcal
