#ifndef CAUSALWORK_SERIALIZATION_HPP
#define CAUSALWORK_SERIALIZATION_HPP

#include "causalwork/game.hpp"
#include "causalwork/info.hpp"
#include "causalwork/instrument.hpp"
#include "causalwork/operator_algebra.hpp"
#include "causalwork/process.hpp"
#include "causalwork/scenarios.hpp"
#include "causalwork/thermo.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalwork {

using json = nlohmann::json;

/// Round to nine decimals for printed output; -0 is normalized to 0.
inline double round9(double v) {
  double r = std::round(v * 1e9) / 1e9;
  return r == 0 ? 0.0 : r;
}

inline json round9_deep(const json& j) {
  if (j.is_number_float()) return round9(j.get<double>());
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = round9_deep(v);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(round9_deep(v));
    return out;
  }
  return j;
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

/// Dense form {"dims": [...], "dense": [[re,im], ...]} (row major) or Pauli
/// form {"dims": [...], "pauli": {"ZZZI": c, ...}} for all-qubit Hermitian
/// operators.
inline json operator_to_json(const Operator& op, bool as_pauli = false) {
  json j;
  j["dims"] = op.dims;
  if (as_pauli) {
    json p = json::object();
    for (const auto& [key, coef] : pauli_decompose(op)) p[key] = coef;
    j["pauli"] = p;
  } else {
    json d = json::array();
    for (int r = 0; r < op.mat.rows(); ++r)
      for (int c = 0; c < op.mat.cols(); ++c)
        d.push_back({op.mat(r, c).real(), op.mat(r, c).imag()});
    j["dense"] = d;
  }
  return j;
}

inline Operator operator_from_json(const json& j) {
  if (!j.contains("dims")) throw std::invalid_argument("operator json needs dims");
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  long long side = 1;
  for (int d : dims) side *= d;
  const bool dense = j.contains("dense"), pauli_form = j.contains("pauli");
  if (dense == pauli_form)
    throw std::invalid_argument("operator json needs exactly one of dense/pauli");
  if (dense) {
    const json& d = j.at("dense");
    if (static_cast<long long>(d.size()) != side * side)
      throw std::invalid_argument("dense entry count does not match dims");
    Matrix m(side, side);
    for (long long k = 0; k < side * side; ++k) {
      const json& e = d.at(k);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("dense entries must be [re, im] pairs");
      m(k / side, k % side) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return make_operator(std::move(m), std::move(dims));
  }
  PauliDecomposition dec;
  for (const auto& [key, coef] : j.at("pauli").items()) {
    if (static_cast<long long>(key.size()) != static_cast<long long>(dims.size()))
      throw std::invalid_argument("pauli key length does not match dims");
    dec[key] = coef.get<double>();
  }
  Operator op = pauli_compose(dec, static_cast<int>(dims.size()));
  if (op.dims != dims) throw std::invalid_argument("pauli form needs qubit dims");
  return op;
}

// ---------------------------------------------------------------------------
// instruments
// ---------------------------------------------------------------------------

inline json instrument_to_json(const Instrument& ins) {
  json ops = json::object();
  for (int a = 0; a < ins.num_outcomes(); ++a)
    for (int x = 0; x < ins.num_settings(); ++x) {
      char key[32];
      std::snprintf(key, sizeof key, "a=%d,x=%d", a, x);
      ops[key] = operator_to_json(make_operator(ins.op(a, x), {2, 2}));
    }
  return json{{"party", ins.party}, {"ops", ops}};
}

inline Instrument instrument_from_json(const json& j) {
  Instrument ins;
  ins.party = j.value("party", "");
  int max_a = -1, max_x = -1;
  std::map<std::pair<int, int>, Matrix> got;
  for (const auto& [key, v] : j.at("ops").items()) {
    int a, x;
    if (std::sscanf(key.c_str(), "a=%d,x=%d", &a, &x) != 2 || a < 0 || x < 0)
      throw std::invalid_argument("bad instrument op key: " + key);
    Operator op = operator_from_json(v);
    if (op.dims != std::vector<int>{2, 2})
      throw std::invalid_argument("instrument ops must have dims {2,2}");
    got[{a, x}] = std::move(op.mat);
    max_a = std::max(max_a, a);
    max_x = std::max(max_x, x);
  }
  if (max_a < 0) throw std::invalid_argument("instrument has no ops");
  ins.ops.assign(max_a + 1, std::vector<Matrix>(max_x + 1));
  for (int a = 0; a <= max_a; ++a)
    for (int x = 0; x <= max_x; ++x) {
      auto it = got.find({a, x});
      if (it == got.end())
        throw std::invalid_argument("instrument json is missing an (a,x) op");
      ins.ops[a][x] = std::move(it->second);
    }
  return ins;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline json game_stats_to_json(const GameStats& stats) {
  json table = json::object();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          char key[16];
          std::snprintf(key, sizeof key, "%d,%d|%d,%d", a, b, x, y);
          table[key] = stats.table[a][b][x][y];
        }
  return json{{"table", table},      {"p_xy", stats.p_xy}, {"p_succ", stats.p_succ},
              {"p1", stats.p1},      {"p2", stats.p2},     {"clamped", stats.clamped}};
}

inline json validation_report_to_json(const ValidationReport& rep) {
  return json{{"herm_dev", rep.herm_dev},
              {"min_eigenvalue", rep.min_eigenvalue},
              {"trace_value", rep.trace_value},
              {"trace_dev", rep.trace_dev},
              {"dev_alice_output_mixed", rep.dev_alice_output_mixed},
              {"dev_bob_output_mixed", rep.dev_bob_output_mixed},
              {"dev_output_cross_terms", rep.dev_output_cross_terms},
              {"flags", rep.flags},
              {"pass", rep.pass()}};
}

inline json order_check_to_json(const OrderCheck& oc) {
  return json{{"dev_alice_first", oc.dev_alice_first},
              {"dev_bob_first", oc.dev_bob_first},
              {"alice_first", oc.alice_first},
              {"bob_first", oc.bob_first}};
}

inline json energy_pmf_to_json(const EnergyPmf& pmf) {
  json out = json::array();
  for (const auto& [e, p] : pmf.levels) out.push_back({e, p});
  return out;
}

inline json thermo_report_to_json(const ThermoReport& rep) {
  return json{{"eps", rep.eps},
              {"gap", rep.gap},
              {"average_energy", rep.average_energy},
              {"energy_identity_dev", rep.energy_identity_dev},
              {"circle_pmf", energy_pmf_to_json(rep.circle_pmf)},
              {"interacting",
               {{"initial_energy", rep.interacting.initial_energy},
                {"final_energy", rep.interacting.final_energy},
                {"work", rep.interacting.work},
                {"pmf", energy_pmf_to_json(rep.interacting.pmf)}}}};
}

inline json info_report_to_json(const InfoReport& rep) {
  return json{{"S_red", rep.S_red},
              {"S_blue", rep.S_blue},
              {"S_red_blue", rep.S_red_blue},
              {"H_XY", rep.H_XY},
              {"H_AB", rep.H_AB},
              {"I_IO", rep.I_IO},
              {"I_red_blue", rep.I_red_blue},
              {"bound_value", rep.bound_value},
              {"entropy_identity_dev", rep.entropy_identity_dev}};
}

inline json signalling_to_json(const SignallingDecomposition& dec) {
  auto tensor = [](const auto& t, bool alpha_first) {
    json out = json::object();
    for (std::size_t p = 0; p < t.size(); ++p)
      for (std::size_t q = 0; q < t[p].size(); ++q)
        for (std::size_t r = 0; r < t[p][q].size(); ++r) {
          double v = t[p][q][r];
          if (v == 0) continue;
          char key[24];
          if (alpha_first)
            std::snprintf(key, sizeof key, "%zu,%zu,%zu", p, q + 1, r + 1);
          else
            std::snprintf(key, sizeof key, "%zu,%zu,%zu", p + 1, q, r + 1);
          out[key] = v;
        }
    return out;
  };
  return json{{"c", tensor(dec.c, true)},
              {"cp", tensor(dec.cp, false)},
              {"m", tensor(dec.m, true)},
              {"mp", tensor(dec.mp, false)},
              {"norm_m", dec.norm_m},
              {"norm_mp", dec.norm_mp},
              {"reconstructed_gap", dec.reconstructed_gap},
              {"residual", dec.residual},
              {"complete", dec.complete}};
}

inline json scenario_report_to_json(const ScenarioReport& rep) {
  json j{{"name", rep.name},
         {"eps", rep.eps},
         {"stats", game_stats_to_json(rep.stats)},
         {"gap", rep.gap},
         {"thermo", thermo_report_to_json(rep.thermo)},
         {"info", info_report_to_json(rep.info)},
         {"signalling", signalling_to_json(rep.signalling)}};
  if (!std::isnan(rep.alpha)) j["alpha"] = rep.alpha;
  return j;
}

// ---------------------------------------------------------------------------
// expected-value files
// ---------------------------------------------------------------------------

/// One frozen reference point for a scenario. Entries with an alpha only
/// apply to runs at that alpha; sources records where each number comes from
/// ("exact", "reference" or "regression") and is informational.
struct ExpectedEntry {
  bool has_alpha = false;
  double alpha = 0;
  double tol = kTol;
  std::map<std::string, double> values;
  std::map<std::string, std::string> sources;
};

inline std::map<std::string, std::vector<ExpectedEntry>> load_expected(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expected-value file: " + path);
  json j = json::parse(in);
  std::map<std::string, std::vector<ExpectedEntry>> out;
  for (const auto& [name, entries] : j.at("scenarios").items()) {
    for (const json& e : entries) {
      ExpectedEntry ee;
      if (e.contains("alpha")) {
        ee.has_alpha = true;
        ee.alpha = e.at("alpha").get<double>();
      }
      ee.tol = e.value("tol", kTol);
      for (const auto& [k, v] : e.at("values").items())
        ee.values[k] = v.get<double>();
      if (e.contains("sources"))
        for (const auto& [k, v] : e.at("sources").items())
          ee.sources[k] = v.get<std::string>();
      out[name].push_back(std::move(ee));
    }
  }
  return out;
}

struct Comparison {
  int checked = 0;
  int skipped_entries = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// Compares computed values against every applicable entry; entries pinned
/// to a different alpha are skipped, not failed.
inline Comparison compare_expected(const std::map<std::string, double>& computed,
                                   const std::vector<ExpectedEntry>& entries,
                                   double run_alpha) {
  Comparison cmp;
  for (const ExpectedEntry& e : entries) {
    if (e.has_alpha &&
        (std::isnan(run_alpha) || std::abs(run_alpha - e.alpha) > 1e-12)) {
      ++cmp.skipped_entries;
      continue;
    }
    for (const auto& [key, want] : e.values) {
      auto it = computed.find(key);
      if (it == computed.end()) {
        cmp.failures.push_back(key + ": not computed");
        continue;
      }
      ++cmp.checked;
      if (std::abs(it->second - want) > e.tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: got %.12g, expected %.12g (tol %g)",
                      key.c_str(), it->second, want, e.tol);
        cmp.failures.push_back(buf);
      }
    }
  }
  return cmp;
}

}  // namespace causalwork

#endif
