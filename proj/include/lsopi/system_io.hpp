/**
 * @file system_io.hpp
 * @brief YAML system files.
 *
 * Control-affine form:
 *
 *     name: chained
 *     states: [x1, x2, x3, x4]
 *     f:  ["0", "0", "0", "0"]
 *     g1: ["1", "x3", "x4", "0"]
 *     g2: ["0", "0", "0", "1"]
 *
 * General form uses `F` (one entry per state, over the states and the inputs)
 * instead of f/g1/g2; `inputs` renames the inputs (default [u1, u2]).
 * Requires yaml-cpp.
 */
#ifndef LSOPI_SYSTEM_IO_HPP
#define LSOPI_SYSTEM_IO_HPP

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lsopi/engine.hpp"
#include "lsopi/parser.hpp"

namespace lsopi {

/// Invalid system file; `line` is 1-based (0 when unknown).
struct SpecError : std::runtime_error {
  SpecError(std::size_t ln, const std::string& msg)
      : std::runtime_error(ln ? "line " + std::to_string(ln) + ": " + msg : msg), line(ln) {}
  std::size_t line;
};

namespace detail {

inline std::size_t line_of(const YAML::Node& n) {
  auto m = n.Mark();
  return m.line >= 0 ? static_cast<std::size_t>(m.line) + 1 : 0;
}

inline std::vector<std::string> name_list(const YAML::Node& n, const char* key) {
  if (!n.IsSequence()) throw SpecError(line_of(n), std::string("'") + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& item : n) {
    if (!item.IsScalar()) throw SpecError(line_of(item), std::string("'") + key + "' entries must be names");
    auto name = item.as<std::string>();
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
      throw SpecError(line_of(item), "invalid name '" + name + "'");
    for (char c : name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw SpecError(line_of(item), "invalid name '" + name + "'");
    if (std::find(out.begin(), out.end(), name) != out.end())
      throw SpecError(line_of(item), "duplicate name '" + name + "'");
    out.push_back(name);
  }
  return out;
}

inline std::vector<Expr> expr_list(const YAML::Node& root, const char* key, std::size_t n,
                                   const std::vector<std::string>& vars) {
  YAML::Node node = root[key];
  if (!node) throw SpecError(line_of(root), std::string("missing '") + key + "'");
  if (!node.IsSequence()) throw SpecError(line_of(node), std::string("'") + key + "' must be a list");
  if (node.size() != n)
    throw SpecError(line_of(node), std::string("'") + key + "' has " + std::to_string(node.size()) +
                                       " entries, expected " + std::to_string(n));
  std::vector<Expr> out;
  for (const auto& item : node) {
    if (!item.IsScalar()) throw SpecError(line_of(item), "expression must be a scalar");
    try {
      out.push_back(parse_normalized(item.as<std::string>(), vars));
    } catch (const ParseError& e) {
      throw SpecError(line_of(item), e.what());
    } catch (const ZeroDenominator&) {
      throw SpecError(line_of(item), "division by zero");
    }
  }
  return out;
}

}  // namespace detail

/// Parses and validates a system from YAML text; throws SpecError.
inline ControlSystem parse_system_text(const std::string& text, const Sampler& s = Sampler()) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw SpecError(e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0, e.msg);
  }
  if (!root.IsMap()) throw SpecError(detail::line_of(root), "expected a mapping");
  std::string name = root["name"] ? root["name"].as<std::string>() : std::string("system");
  if (!root["states"]) throw SpecError(detail::line_of(root), "missing 'states'");
  auto states = detail::name_list(root["states"], "states");
  const std::size_t n = states.size();
  try {
    if (root["F"]) {
      if (root["f"] || root["g1"] || root["g2"])
        throw SpecError(detail::line_of(root["F"]), "'F' cannot be combined with f, g1, g2");
      std::vector<std::string> inputs = {"u1", "u2"};
      if (root["inputs"]) {
        inputs = detail::name_list(root["inputs"], "inputs");
        if (inputs.size() != 2) throw SpecError(detail::line_of(root["inputs"]), "exactly two inputs required");
      }
      auto vars = states;
      for (const auto& u : inputs) {
        if (std::find(states.begin(), states.end(), u) != states.end())
          throw SpecError(detail::line_of(root["inputs"]), "input '" + u + "' clashes with a state");
        vars.push_back(u);
      }
      if (n + 2 > kMaxVars) throw SpecError(detail::line_of(root["states"]), "too many states");
      GeneralSystem g{name, states, detail::expr_list(root, "F", n, vars)};
      try {
        ControlSystem sys = affinize(g, s);
        auto taken = states;
        sys.states[n] = fresh_name(taken, inputs[0]);
        taken.push_back(sys.states[n]);
        sys.states[n + 1] = fresh_name(taken, inputs[1]);
        return sys;
      } catch (const AlgebraError& e) {
        throw SpecError(detail::line_of(root["F"]), e.what());
      }
    }
    ControlSystem sys;
    sys.name = name;
    sys.states = states;
    sys.f = detail::expr_list(root, "f", n, states);
    sys.g1 = detail::expr_list(root, "g1", n, states);
    sys.g2 = detail::expr_list(root, "g2", n, states);
    try {
      validate_system(sys, s);
    } catch (const AlgebraError& e) {
      throw SpecError(detail::line_of(root["g2"]), e.what());
    }
    return sys;
  } catch (const YAML::Exception& e) {
    throw SpecError(e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0, e.msg);
  }
}

/// Reads a system file; throws SpecError.
inline ControlSystem parse_system(const std::string& path, const Sampler& s = Sampler()) {
  std::ifstream in(path);
  if (!in) throw SpecError(0, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_text(buf.str(), s);
}

/// YAML text that parse_system_text reads back as the same system.
inline std::string system_to_yaml(const ControlSystem& sys) {
  auto list = [&](const VectorField& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += "\"" + v[i].str(sys.states) + "\"";
    }
    return out + "]";
  };
  std::string names = "[";
  for (std::size_t i = 0; i < sys.states.size(); ++i) names += (i ? ", " : "") + sys.states[i];
  names += "]";
  return "name: " + sys.name + "\nstates: " + names + "\nf: " + list(sys.f) + "\ng1: " + list(sys.g1) +
         "\ng2: " + list(sys.g2) + "\n";
}

}  // namespace lsopi

#endif  // LSOPI_SYSTEM_IO_HPP
