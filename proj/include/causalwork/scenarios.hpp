#ifndef CAUSALWORK_SCENARIOS_HPP
#define CAUSALWORK_SCENARIOS_HPP

#include "causalwork/game.hpp"
#include "causalwork/info.hpp"
#include "causalwork/instrument.hpp"
#include "causalwork/process.hpp"
#include "causalwork/thermo.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalwork {

/// Closed forms for the interpolating family played with its own
/// instruments, in units of eps where energies appear.
struct AlphaClosedForm {
  double p_succ;
  double p1;
  double p2;
  double gap;
  double average_energy;
  double work_interacting;
};

inline AlphaClosedForm alpha_closed_form(double a) {
  AlphaClosedForm f;
  f.p_succ = 5 * (1 + a) / 16;
  f.p2 = (5 + a) / 16;
  f.p1 = 3 * (1 - a) / 8;
  f.gap = a / 4;
  f.average_energy = 2 - a / 4;
  f.work_interacting = (1 + 5 * a) / 16;
  return f;
}

/// Distribution reached by the saturating instruments on the extremal
/// process: (1/4)(1 + ((-1)^(x+b) + (-1)^(a+y)) / 2).
inline double saturating_table_value(int a, int b, int x, int y) {
  double sx = ((x + b) % 2 == 0) ? 1 : -1;
  double sy = ((a + y) % 2 == 0) ? 1 : -1;
  return 0.25 * (1 + (sx + sy) / 2);
}

// ---------------------------------------------------------------------------
// named scenarios
// ---------------------------------------------------------------------------

/// A fully specified run: process plus both parties' instruments. alpha is
/// NaN for setups that have no family parameter.
struct Scenario {
  std::string name;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  Operator process;
  Instrument alice;
  Instrument bob;
};

inline std::vector<std::string> scenario_names() {
  return {"alpha", "saturating", "definite-order", "local"};
}

inline Scenario make_scenario(const std::string& name,
                              double alpha = std::numeric_limits<double>::quiet_NaN()) {
  Scenario sc;
  sc.name = name;
  if (name == "alpha") {
    sc.alpha = std::isnan(alpha) ? kAlphaMax : alpha;
    sc.process = alpha_family(sc.alpha);
    sc.alice = alpha_game_instruments("alice");
    sc.bob = alpha_game_instruments("bob");
  } else if (name == "saturating") {
    sc.alpha = std::isnan(alpha) ? kAlphaMax : alpha;
    sc.process = alpha_family(sc.alpha);
    auto [a, b] = saturating_instruments();
    sc.alice = std::move(a);
    sc.bob = std::move(b);
  } else if (name == "definite-order") {
    if (!std::isnan(alpha))
      throw std::invalid_argument("definite-order takes no alpha");
    sc.process = ordered_from_reduced(identity_channel_reduced(),
                                      CausalOrder::alice_first);
    // Alice always answers 0 and forwards her input; Bob answers what arrives
    sc.alice = classical_strategy_instrument({0, 0, 0, 0}, {0, 0, 1, 1}, "alice");
    sc.bob = classical_strategy_instrument({0, 1, 0, 1}, {0, 0, 0, 0}, "bob");
  } else if (name == "local") {
    if (!std::isnan(alpha)) throw std::invalid_argument("local takes no alpha");
    sc.process = make_operator(identity(16) / 4.0, {2, 2, 2, 2});
    // unbiased coin for the guess, input discarded
    Instrument coin;
    coin.ops.assign(2, std::vector<Matrix>(
                           2, 0.5 * kron(identity(2), projector(ket_zero()))));
    sc.alice = coin;
    sc.alice.party = "alice";
    sc.bob = std::move(coin);
    sc.bob.party = "bob";
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return sc;
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

struct ScenarioReport {
  std::string name;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double eps = 1;
  GameStats stats;
  double gap = 0;
  ThermoReport thermo;
  InfoReport info;
  SignallingDecomposition signalling;
};

inline ScenarioReport run_scenario(const Scenario& sc, double eps = 1,
                                   double tol = kTol) {
  ScenarioReport rep;
  rep.name = sc.name;
  rep.alpha = sc.alpha;
  rep.eps = eps;
  rep.stats = game_stats(sc.process, sc.alice, sc.bob, tol);
  rep.gap = bound_gap(rep.stats);
  rep.thermo = thermo_report(rep.stats, eps, tol);
  rep.info = info_report(rep.stats, tol);
  rep.signalling = signalling_decomposition(sc.process, sc.alice, sc.bob, tol);
  return rep;
}

/// Flat numeric view of a report, the vocabulary used by expected-value
/// files and the sweep output.
inline std::map<std::string, double> report_values(const ScenarioReport& rep) {
  std::map<std::string, double> v;
  v["p_succ"] = rep.stats.p_succ;
  v["p1"] = rep.stats.p1;
  v["p2"] = rep.stats.p2;
  v["gap"] = rep.gap;
  v["average_energy"] = rep.thermo.average_energy;
  v["energy_identity_dev"] = rep.thermo.energy_identity_dev;
  v["work_interacting"] = rep.thermo.interacting.work;
  v["S_red"] = rep.info.S_red;
  v["S_blue"] = rep.info.S_blue;
  v["S_red_blue"] = rep.info.S_red_blue;
  v["H_XY"] = rep.info.H_XY;
  v["H_AB"] = rep.info.H_AB;
  v["I_IO"] = rep.info.I_IO;
  v["I_red_blue"] = rep.info.I_red_blue;
  v["bound_value"] = rep.info.bound_value;
  v["entropy_identity_dev"] = rep.info.entropy_identity_dev;
  v["reconstructed_gap"] = rep.signalling.reconstructed_gap;
  v["residual"] = rep.signalling.residual;
  return v;
}

/// Red-blue mutual information of the alpha scenario across family members.
inline std::vector<double> alpha_trend(const std::vector<double>& alphas,
                                       double tol = kTol) {
  std::vector<double> out;
  out.reserve(alphas.size());
  for (double a : alphas) {
    Scenario sc = make_scenario("alpha", a);
    GameStats stats = game_stats(sc.process, sc.alice, sc.bob, tol);
    out.push_back(info_report(stats, tol).I_red_blue);
  }
  return out;
}

}  // namespace causalwork

#endif
