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

#include "qcal/runcard.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "util.hpp"

namespace qcal {
namespace {

using detail::try_parse_double;
using detail::try_parse_int;

std::string where(const YAML::Node& n) {
  if (n.Mark().line >= 0)
    return " (line " + std::to_string(n.Mark().line + 1) + ")";
  return "";
}

/// Scalar -> int64 | double | string, by trial parse on the raw text.
ParamValue scalar_value(const YAML::Node& n) {
  const std::string& raw = n.Scalar();
  // Quoted scalars stay strings even if they look numeric.
  if (n.Tag() != "!") {
    if (auto i = try_parse_int(raw)) return *i;
    if (auto d = try_parse_double(raw)) return *d;
  }
  return raw;
}

ParamValue list_value(const YAML::Node& n, const std::string& key) {
  std::vector<std::int64_t> ints;
  std::vector<double> nums;
  bool all_int = true;
  for (const auto& item : n) {
    if (!item.IsScalar())
      throw SchemaError("parameter '" + key + "' has a non-scalar list item" +
                        where(item));
    ParamValue v = scalar_value(item);
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
      ints.push_back(*i);
      nums.push_back(static_cast<double>(*i));
    } else if (const auto* d = std::get_if<double>(&v)) {
      all_int = false;
      nums.push_back(*d);
    } else {
      throw SchemaError("parameter '" + key + "' has a non-numeric list item" +
                        where(item));
    }
  }
  if (all_int) return ints;
  return nums;
}

ParamMap parse_parameters(const YAML::Node& n, const std::string& action) {
  ParamMap out;
  if (!n || n.IsNull()) return out;
  if (!n.IsMap())
    throw SchemaError("parameters of action '" + action +
                      "' must be a mapping" + where(n));
  for (const auto& kv : n) {
    std::string key = kv.first.Scalar();
    if (out.count(key))
      throw SchemaError("duplicate parameter '" + key + "' in action '" +
                        action + "'" + where(kv.first));
    const YAML::Node& v = kv.second;
    if (v.IsScalar())
      out[key] = scalar_value(v);
    else if (v.IsSequence())
      out[key] = list_value(v, key);
    else
      throw SchemaError("parameter '" + key + "' must be a scalar or list" +
                        where(v));
  }
  return out;
}

void serialize_value(std::ostringstream& os, const ParamValue& v) {
  struct Visitor {
    std::ostringstream& os;
    void operator()(std::int64_t i) { os << i; }
    void operator()(double d) { os << detail::format_double_typed(d); }
    void operator()(const std::string& s) {
      os << '"';
      for (char c : s) {
        if (c == '"' || c == '\\') os << '\\';
        os << c;
      }
      os << '"';
    }
    void operator()(const std::vector<std::int64_t>& l) {
      os << '[';
      for (std::size_t i = 0; i < l.size(); ++i)
        os << (i ? ", " : "") << l[i];
      os << ']';
    }
    void operator()(const std::vector<double>& l) {
      os << '[';
      for (std::size_t i = 0; i < l.size(); ++i)
        os << (i ? ", " : "") << detail::format_double_typed(l[i]);
      os << ']';
    }
  } visitor{os};
  std::visit(visitor, v);
}

}  // namespace

Runcard parse_runcard(const std::string& text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw SyntaxError("line " + std::to_string(e.mark.line + 1) + ": " +
                      e.msg);
  } catch (const YAML::Exception& e) {
    throw SyntaxError(e.what());
  }
  if (!doc.IsMap()) throw SchemaError("document must be a mapping");

  static const std::set<std::string> known = {"platform", "qubits", "format",
                                              "actions"};
  for (const auto& kv : doc) {
    std::string key = kv.first.Scalar();
    if (!known.count(key))
      throw SchemaError("unknown top-level key '" + key + "'" +
                        where(kv.first));
  }
  for (const auto& key : known)
    if (!doc[key]) throw SchemaError("missing required key '" + key + "'");

  Runcard rc;

  const YAML::Node& plat = doc["platform"];
  if (!plat.IsScalar() || plat.Scalar().empty())
    throw SchemaError("'platform' must be a non-empty string" + where(plat));
  rc.platform = plat.Scalar();

  const YAML::Node& qubits = doc["qubits"];
  if (!qubits.IsSequence() || qubits.size() == 0)
    throw SchemaError("'qubits' must be a non-empty sequence" + where(qubits));
  for (const auto& q : qubits) {
    if (!q.IsScalar())
      throw SchemaError("'qubits' entries must be integers" + where(q));
    auto i = try_parse_int(q.Scalar());
    if (!i || *i < 0)
      throw SchemaError("'qubits' entries must be non-negative integers" +
                        where(q));
    int id = static_cast<int>(*i);
    if (std::find(rc.qubits.begin(), rc.qubits.end(), id) != rc.qubits.end())
      throw SchemaError("duplicate qubit id " + std::to_string(id) + where(q));
    rc.qubits.push_back(id);
  }

  const YAML::Node& fmt = doc["format"];
  if (!fmt.IsScalar())
    throw SchemaError("'format' must be \"csv\" or \"json\"" + where(fmt));
  if (fmt.Scalar() == "csv")
    rc.format = StorageFormat::csv;
  else if (fmt.Scalar() == "json")
    rc.format = StorageFormat::json;
  else
    throw SchemaError("'format' must be \"csv\" or \"json\", got '" +
                      fmt.Scalar() + "'" + where(fmt));

  const YAML::Node& actions = doc["actions"];
  if (!actions.IsMap() || actions.size() == 0)
    throw SchemaError("'actions' must be a non-empty mapping" + where(actions));
  for (const auto& kv : actions) {
    Action a;
    a.name = kv.first.Scalar();
    if (a.name.empty())
      throw SchemaError("action name must be non-empty" + where(kv.first));
    for (const auto& prev : rc.actions)
      if (prev.name == a.name)
        throw SchemaError("duplicate action '" + a.name + "'" +
                          where(kv.first));
    a.parameters = parse_parameters(kv.second, a.name);
    rc.actions.push_back(std::move(a));
  }
  return rc;
}

std::string serialize_runcard(const Runcard& rc) {
  std::ostringstream os;
  os << "platform: \"" << rc.platform << "\"\n";
  os << "qubits: [";
  for (std::size_t i = 0; i < rc.qubits.size(); ++i)
    os << (i ? ", " : "") << rc.qubits[i];
  os << "]\n";
  os << "format: " << to_string(rc.format) << "\n";
  os << "actions:\n";
  for (const auto& a : rc.actions) {
    os << "  " << a.name << ":";
    if (a.parameters.empty()) {
      os << " {}\n";
      continue;
    }
    os << "\n";
    for (const auto& [key, value] : a.parameters) {
      os << "    " << key << ": ";
      serialize_value(os, value);
      os << "\n";
    }
  }
  return os.str();
}

namespace {

void check_range(const ParamSpec& spec, double v) {
  if (spec.min) {
    if (spec.exclusive_min ? v <= *spec.min : v < *spec.min)
      throw ParameterError("'" + spec.name + "' must be " +
                           (spec.exclusive_min ? "> " : ">= ") +
                           detail::format_double(*spec.min) + ", got " +
                           detail::format_double(v));
  }
  if (spec.max && v > *spec.max)
    throw ParameterError("'" + spec.name + "' must be <= " +
                         detail::format_double(*spec.max) + ", got " +
                         detail::format_double(v));
}

}  // namespace

ParamMap canonical_params(const Protocol& protocol, const ParamMap& given) {
  const ProtocolInfo& info = protocol.info();
  ParamMap out;
  for (const auto& spec : info.schema) out[spec.name] = spec.default_value;

  for (const auto& [key, value] : given) {
    const ParamSpec* spec = nullptr;
    for (const auto& s : info.schema)
      if (s.name == key) {
        spec = &s;
        break;
      }
    if (!spec)
      throw ParameterError("unknown parameter '" + key + "' for protocol '" +
                           info.name + "'");
    ParamValue v = value;
    switch (spec->type) {
      case ParamType::integer:
        if (!std::holds_alternative<std::int64_t>(v))
          throw ParameterError("'" + key + "' must be an integer");
        check_range(*spec, static_cast<double>(std::get<std::int64_t>(v)));
        break;
      case ParamType::number: {
        if (const auto* i = std::get_if<std::int64_t>(&v))
          v = static_cast<double>(*i);
        if (!std::holds_alternative<double>(v))
          throw ParameterError("'" + key + "' must be a number");
        check_range(*spec, std::get<double>(v));
        break;
      }
      case ParamType::string:
        if (!std::holds_alternative<std::string>(v))
          throw ParameterError("'" + key + "' must be a string");
        break;
      case ParamType::integer_list: {
        if (const auto* i = std::get_if<std::int64_t>(&v))
          v = std::vector<std::int64_t>{*i};
        if (!std::holds_alternative<std::vector<std::int64_t>>(v))
          throw ParameterError("'" + key + "' must be a list of integers");
        for (auto e : std::get<std::vector<std::int64_t>>(v))
          check_range(*spec, static_cast<double>(e));
        break;
      }
      case ParamType::number_list: {
        if (const auto* i = std::get_if<std::int64_t>(&v))
          v = std::vector<double>{static_cast<double>(*i)};
        if (const auto* d = std::get_if<double>(&v))
          v = std::vector<double>{*d};
        if (const auto* il = std::get_if<std::vector<std::int64_t>>(&v))
          v = std::vector<double>(il->begin(), il->end());
        if (!std::holds_alternative<std::vector<double>>(v))
          throw ParameterError("'" + key + "' must be a list of numbers");
        for (auto e : std::get<std::vector<double>>(v)) check_range(*spec, e);
        break;
      }
    }
    out[key] = std::move(v);
  }
  protocol.check_params(out);
  return out;
}

ValidatedPlan validate_plan(const Runcard& runcard,
                            const ProtocolRegistry& registry,
                            const Platform& platform) {
  for (int q : runcard.qubits)
    if (q >= platform.num_qubits())
      throw UnknownQubit("qubit " + std::to_string(q) + " not on platform '" +
                         platform.name() + "' (" +
                         std::to_string(platform.num_qubits()) + " qubits)");

  ValidatedPlan plan;
  plan.runcard = runcard;
  for (const auto& action : runcard.actions) {
    const Protocol* protocol = registry.find(action.name);
    if (!protocol) {
      auto near = detail::nearest_names(action.name, registry.names());
      std::string hint;
      for (const auto& n : near) hint += (hint.empty() ? "" : ", ") + n;
      throw UnknownProtocol("'" + action.name + "' (nearest: " + hint + ")");
    }
    PlannedAction pa;
    pa.name = action.name;
    pa.protocol = protocol;
    try {
      pa.params = canonical_params(*protocol, action.parameters);
    } catch (const ParameterError& e) {
      throw ParameterError("action '" + action.name + "': " + e.what());
    }
    plan.actions.push_back(std::move(pa));
  }
  return plan;
}

}  // namespace qcal
