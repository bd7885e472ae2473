/**
 * @file report.hpp
 * @brief JSON and text rendering of run reports.
 */
#ifndef LSOPI_REPORT_HPP
#define LSOPI_REPORT_HPP

#include <sstream>
#include <string>

#include "json.hpp"
#include "lsopi/engine.hpp"

namespace lsopi {

namespace detail {

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::string join(const std::vector<std::size_t>& v, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const Step& st) {
  nlohmann::json j;
  j["index"] = st.index;
  j["n"] = st.n;
  j["k"] = detail::opt_json(st.k);
  j["case"] = st.label;
  j["r"] = detail::opt_json(st.r);
  j["r_II"] = detail::opt_json(st.r_two);
  j["growth_vector"] = st.growth;
  j["closure_rank"] = detail::opt_json(st.closure_rank);
  j["ranks"] = st.ranks;
  j["H_generators"] = st.h_generators;
  j["beta_column"] = st.beta ? nlohmann::json::array({st.beta->first, st.beta->second}) : nlohmann::json(nullptr);
  j["prolonged_control"] = st.prolonged_control.empty() ? nlohmann::json(nullptr) : nlohmann::json(st.prolonged_control);
  j["notes"] = st.notes;
  return j;
}

inline nlohmann::json to_json(const Report& rep) {
  nlohmann::json j;
  j["name"] = rep.name;
  j["verdict"] = to_string(rep.verdict);
  j["ell"] = detail::opt_json(rep.ell);
  j["conclusive"] = rep.conclusive;
  j["failing_step"] = detail::opt_json(rep.failing_step);
  j["reason"] = rep.reason;
  j["seed"] = rep.sampler.seed;
  j["samples"] = rep.sampler.samples;
  j["steps"] = nlohmann::json::array();
  for (const auto& st : rep.steps) j["steps"].push_back(to_json(st));
  j["final_states"] = rep.final_system.states;
  return j;
}

/// Canonical bytes: sorted keys, two-space indent, trailing LF.
inline std::string report_json(const Report& rep) { return to_json(rep).dump(2) + "\n"; }

/// Human-readable summary; `trace` adds H generators, feedback and notes per step.
inline std::string report_text(const Report& rep, bool trace = false) {
  std::ostringstream out;
  out << rep.name << ": " << to_string(rep.verdict);
  if (rep.ell) out << " (ell = " << *rep.ell << ")";
  out << "\n" << rep.reason << "\n\n";
  out << "step  n   k   case                 r   r_II  growth      ranks\n";
  for (const auto& st : rep.steps) {
    auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
    std::ostringstream row;
    row.setf(std::ios::left);
    row.width(6);
    row << st.index;
    row.width(4);
    row << st.n;
    row.width(4);
    row << cell(st.k);
    row.width(21);
    row << st.label;
    row.width(4);
    row << cell(st.r);
    row.width(6);
    row << cell(st.r_two);
    row.width(12);
    row << (st.growth.empty() ? std::string("-") : detail::join(st.growth));
    row << detail::join(st.ranks);
    std::string line = row.str();
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
    if (!trace) continue;
    for (const auto& g : st.h_generators) {
      out << "      H: (";
      for (std::size_t i = 0; i < g.size(); ++i) out << (i ? ", " : "") << g[i];
      out << ")\n";
    }
    if (st.beta) out << "      beta: (" << st.beta->first << ", " << st.beta->second << ")\n";
    if (!st.prolonged_control.empty()) out << "      prolonged: " << st.prolonged_control << "\n";
    for (const auto& n : st.notes) out << "      note: " << n << "\n";
  }
  return out.str();
}

}  // namespace lsopi

#endif  // LSOPI_REPORT_HPP
