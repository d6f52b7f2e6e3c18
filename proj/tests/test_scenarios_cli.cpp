#include "causalwork/scenarios.hpp"

#include "causalwork/serialization.hpp"

#include <algorithm>
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace causalwork;
using test_support::run_cli;
using test_support::TempFile;

namespace {

/// Best success probability over all 256 x 256 deterministic classical
/// strategies (guess and forwarded bit as functions of setting and received
/// bit). Strategy bits: position x*2+t holds the guess, 4+x*2+t the bit sent.
double max_classical_success(const Operator& w) {
  double atom[2][2][2][2];
  for (int t = 0; t < 2; ++t)
    for (int e = 0; e < 2; ++e)
      for (int u = 0; u < 2; ++u)
        for (int f = 0; f < 2; ++f)
          atom[t][e][u][f] =
              born_probability(w, measure_prepare_op(ket_bit(t), ket_bit(e)),
                               measure_prepare_op(ket_bit(u), ket_bit(f)));
  double best = 0;
  for (int sa = 0; sa < 256; ++sa)
    for (int sb = 0; sb < 256; ++sb) {
      double p = 0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int t = 0; t < 2; ++t)
            for (int u = 0; u < 2; ++u) {
              if (((sa >> (x * 2 + t)) & 1) != y) continue;
              if (((sb >> (y * 2 + u)) & 1) != x) continue;
              p += 0.25 * atom[t][(sa >> (4 + x * 2 + t)) & 1][u]
                              [(sb >> (4 + y * 2 + u)) & 1];
            }
      best = std::max(best, p);
    }
  return best;
}

}  // namespace

TEST_CASE("closed forms are a normalized distribution") {
  for (double a : {0.0, 0.3, kAlphaMax}) {
    AlphaClosedForm f = alpha_closed_form(a);
    REQUIRE(f.p_succ + f.p1 + f.p2 == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(f.average_energy == Catch::Approx(2 - f.gap).margin(1e-12));
  }
  double total = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) total += saturating_table_value(a, b, 0, 1);
  REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("make_scenario validates its arguments") {
  REQUIRE_THROWS_AS(make_scenario("nonsense"), std::invalid_argument);
  REQUIRE_THROWS_AS(make_scenario("definite-order", 0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(make_scenario("local", 0.5), std::invalid_argument);
  REQUIRE(scenario_names() ==
          std::vector<std::string>{"alpha", "saturating", "definite-order", "local"});
  REQUIRE(make_scenario("alpha").alpha == Catch::Approx(kAlphaMax));
  REQUIRE(make_scenario("saturating", 0.5).alpha == 0.5);
  REQUIRE(std::isnan(make_scenario("local").alpha));
}

TEST_CASE("scenario runs reproduce their closed forms") {
  ScenarioReport alpha = run_scenario(make_scenario("alpha", 0.5));
  AlphaClosedForm f = alpha_closed_form(0.5);
  REQUIRE(alpha.stats.p_succ == Catch::Approx(f.p_succ).margin(1e-12));
  REQUIRE(alpha.gap == Catch::Approx(f.gap).margin(1e-12));
  REQUIRE(alpha.thermo.interacting.work ==
          Catch::Approx(f.work_interacting).margin(1e-9));

  ScenarioReport sat = run_scenario(make_scenario("saturating"));
  REQUIRE(sat.stats.p_succ == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(sat.stats.p2 == Catch::Approx(0.0).margin(1e-12));
  // the gap scales linearly down the family
  ScenarioReport sat_half = run_scenario(make_scenario("saturating", 0.5));
  REQUIRE(sat_half.gap == Catch::Approx(0.25 * std::sqrt(2.0)).margin(1e-12));

  ScenarioReport wired = run_scenario(make_scenario("definite-order"));
  REQUIRE(wired.gap == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(wired.thermo.average_energy == Catch::Approx(1.5).margin(1e-9));
  REQUIRE(wired.thermo.interacting.work == Catch::Approx(0.25).margin(1e-9));

  ScenarioReport local = run_scenario(make_scenario("local"));
  REQUIRE(local.stats.p_succ == Catch::Approx(0.25).margin(1e-12));
  REQUIRE(local.gap == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(local.thermo.average_energy == Catch::Approx(2.0).margin(1e-9));

  std::map<std::string, double> values = report_values(alpha);
  REQUIRE(values.size() == 18);
  REQUIRE(values.at("gap") == Catch::Approx(0.125).margin(1e-12));
  REQUIRE(values.at("reconstructed_gap") == Catch::Approx(0.125).margin(1e-9));
}

TEST_CASE("success crosses the causal bound at alpha 0.6") {
  Instrument ins = alpha_game_instruments();
  GameStats at_cross = game_stats(alpha_family(0.6), ins, ins);
  REQUIRE(at_cross.p_succ == Catch::Approx(0.5).margin(1e-12));
  REQUIRE_FALSE(causal_inequality_violated(at_cross));
  REQUIRE(causal_inequality_violated(game_stats(alpha_family(0.7), ins, ins)));
}

TEST_CASE("no classical strategy beats 1/2 on ordered processes") {
  Operator wired = ordered_from_reduced(identity_channel_reduced(),
                                        CausalOrder::alice_first);
  REQUIRE(max_classical_success(wired) == Catch::Approx(0.5).margin(1e-9));
  for (uint64_t seed : {61u, 62u}) {
    Rng rng(seed);
    REQUIRE(max_classical_success(random_separable(rng)) <= 0.5 + 1e-9);
  }
}

TEST_CASE("strategy scan agrees with the instrument pipeline") {
  Operator w = alpha_family(0.4);
  std::array<int, 4> ga{0, 1, 1, 0}, ea{1, 0, 0, 1};
  std::array<int, 4> gb{1, 1, 0, 0}, eb{0, 1, 1, 0};
  GameStats stats = game_stats(w, classical_strategy_instrument(ga, ea),
                               classical_strategy_instrument(gb, eb));
  double direct = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int t = 0; t < 2; ++t)
        for (int u = 0; u < 2; ++u) {
          if (ga[x * 2 + t] != y || gb[y * 2 + u] != x) continue;
          direct += 0.25 * born_probability(
                               w, measure_prepare_op(ket_bit(t), ket_bit(ea[x * 2 + t])),
                               measure_prepare_op(ket_bit(u), ket_bit(eb[y * 2 + u])));
        }
  REQUIRE(direct == Catch::Approx(stats.p_succ).margin(1e-12));
}

// ---------------------------------------------------------------------------
// command line
// ---------------------------------------------------------------------------

TEST_CASE("cli scenario emits json and passes the reference file") {
  auto sat = run_cli("scenario saturating --json");
  REQUIRE(sat.exit_code == 0);
  json j = json::parse(sat.out);
  REQUIRE(j.at("report").at("stats").at("p_succ").get<double>() == 0.5);
  REQUIRE(j.at("report").at("name") == "saturating");

  std::string expected = test_support::data_dir() + "/expected.json";
  auto cmp = run_cli("scenario alpha --alpha 0.5 --expected " + expected + " --json");
  REQUIRE(cmp.exit_code == 0);
  json jc = json::parse(cmp.out);
  REQUIRE(jc.at("comparison").at("pass").get<bool>());
  REQUIRE(jc.at("comparison").at("checked").get<int>() > 0);

  // off-family alpha: every pinned entry is skipped, nothing fails
  auto off = run_cli("scenario alpha --alpha 0.33 --expected " + expected);
  REQUIRE(off.exit_code == 0);
  REQUIRE(off.out.find("0 checked") != std::string::npos);

  auto text = run_cli("scenario definite-order");
  REQUIRE(text.exit_code == 0);
  REQUIRE(text.out.find("p_succ") != std::string::npos);
  REQUIRE(text.out.find("0.500000000") != std::string::npos);
}

TEST_CASE("cli validate reports pass and fail with exit codes") {
  TempFile good(operator_to_json(alpha_family(0.5)).dump(), ".json");
  auto ok = run_cli("validate " + good.path());
  REQUIRE(ok.exit_code == 0);
  REQUIRE(ok.out.find("PASS") != std::string::npos);

  TempFile bad(operator_to_json(boundary_family_1(1.2, 1.2)).dump(), ".json");
  auto fail = run_cli("validate " + bad.path());
  REQUIRE(fail.exit_code == 1);
  REQUIRE(fail.out.find("positive") != std::string::npos);
  REQUIRE(run_cli("validate /nonexistent.json").exit_code == 2);
}

TEST_CASE("cli game plays named and file-backed setups") {
  auto sat = run_cli("game --instruments saturating --json");
  REQUIRE(sat.exit_code == 0);
  REQUIRE(json::parse(sat.out).at("gap").get<double>() == 0.5);

  auto text = run_cli("game --alpha 0.25");
  REQUIRE(text.exit_code == 0);
  REQUIRE(text.out.find("p_succ 0.390625000") != std::string::npos);

  TempFile local(operator_to_json(make_operator(identity(16) / 4.0, {2, 2, 2, 2}), true)
                     .dump(),
                 ".json");
  auto coin = run_cli("game --process " + local.path() + " --instruments coin --json");
  REQUIRE(coin.exit_code == 0);
  REQUIRE(json::parse(coin.out).at("p_succ").get<double>() == 0.25);

  REQUIRE(run_cli("game --process " + local.path() + " --alpha 0.3").exit_code == 2);
}

TEST_CASE("cli sweep prints the csv header and closed-form rows") {
  auto res = run_cli("sweep --steps 3");
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.out.rfind("alpha,p_succ,p2,gap,E_avg,w_avg,S_red,H_AB,I_IO,"
                        "I_redblue,bound\n",
                        0) == 0);
  REQUIRE(std::count(res.out.begin(), res.out.end(), '\n') == 4);
  REQUIRE(res.out.find("\n0.000000000,0.312500000,0.312500000,0.000000000,") !=
          std::string::npos);
}

TEST_CASE("cli bound-search is byte-for-byte reproducible") {
  std::string cmd = "bound-search --samples 20 --seed 7 --json";
  auto first = run_cli(cmd);
  auto second = run_cli(cmd);
  REQUIRE(first.exit_code == 0);
  REQUIRE(first.out == second.out);
  json j = json::parse(first.out);
  REQUIRE(j.at("samples").get<int>() == 20);
  REQUIRE(j.at("violations").get<int>() == 0);
  REQUIRE(j.at("best_gap").get<double>() <= 0.5 + 1e-9);
}

TEST_CASE("cli rejects bad invocations") {
  REQUIRE(run_cli("scenario nonsense").exit_code == 2);
  REQUIRE(run_cli("scenario local --alpha 0.3").exit_code == 2);
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("--help").exit_code == 0);
}
