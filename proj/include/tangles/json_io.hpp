#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "tangles/acin.hpp"
#include "tangles/ghz_class.hpp"
#include "tangles/suites.hpp"

namespace tangles {

// States travel as {"n": parties, "amplitudes": [[re, im], ...]} with the
// amplitudes in basis order (party 0 is the most significant bit).
inline nlohmann::json ket_to_json(const Ket& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (const cplx& a : psi.amps) amps.push_back({a.real(), a.imag()});
  return {{"n", psi.n}, {"amplitudes", std::move(amps)}};
}

inline Ket ket_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const auto& amps = j.at("amplitudes");
    if (!amps.is_array()) throw std::invalid_argument("state json: amplitudes must be an array");
    std::vector<cplx> v;
    v.reserve(amps.size());
    for (const auto& pair : amps) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("state json: each amplitude must be [re, im]");
      v.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return make_ket(n, v);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("state json: ") + e.what());
  }
}

inline nlohmann::json params_to_json(const GhzClassParams& p) {
  return {{"n", p.n}, {"r", p.r}, {"phis", p.phis}, {"kappa", p.kappa}};
}

inline GhzClassParams params_from_json(const nlohmann::json& j) {
  try {
    GhzClassParams p;
    p.n = j.at("n").get<int>();
    p.r = j.at("r").get<double>();
    p.phis = j.at("phis").get<std::vector<double>>();
    p.kappa = j.at("kappa").get<double>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("params json: ") + e.what());
  }
}

inline nlohmann::json acin_to_json(const AcinForm& f) {
  return {{"lambdas", f.lambdas}, {"omega", f.omega}};
}

inline AcinForm acin_from_json(const nlohmann::json& j) {
  try {
    AcinForm f;
    const auto& l = j.at("lambdas");
    if (!l.is_array() || l.size() != 5)
      throw std::invalid_argument("form json: lambdas must hold 5 values");
    for (std::size_t i = 0; i < 5; ++i) f.lambdas[i] = l[i].get<double>();
    f.omega = j.at("omega").get<double>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("form json: ") + e.what());
  }
}

inline nlohmann::json suite_result_to_json(const SuiteResult& r) {
  nlohmann::json worst_input;
  if (!r.worst_input.empty()) worst_input = nlohmann::json::parse(r.worst_input);
  return {{"suite", r.name},
          {"samples", r.samples},
          {"seed", r.seed},
          {"n", r.n},
          {"tol", r.tol},
          {"min_margin", r.min_margin},
          {"max_margin", r.max_margin},
          {"mean_margin", r.mean_margin},
          {"violations", r.violations},
          {"passed", r.passed},
          {"worst", {{"index", r.argmin_index}, {"input", worst_input}, {"margin", r.min_margin}}}};
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("cannot parse " + path + ": " + e.what());
  }
}

}  // namespace tangles
