#include "causalwork/serialization.hpp"

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace causalwork;

TEST_CASE("dense operator json round trips") {
  Rng rng(51);
  Matrix m(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = Complex(rng.gaussian(), rng.gaussian());
  Operator op = make_operator(std::move(m), {2});
  Operator back = operator_from_json(operator_to_json(op));
  REQUIRE(back.dims == op.dims);
  REQUIRE(max_abs_diff(back.mat, op.mat) < 1e-15);
}

TEST_CASE("pauli operator json round trips") {
  Operator w = alpha_family(0.5);
  json j = operator_to_json(w, true);
  REQUIRE(j.at("pauli").size() == 3);
  REQUIRE(j.at("pauli").at("ZZZI").get<double>() == Catch::Approx(0.125));
  Operator back = operator_from_json(j);
  REQUIRE(back.dims == w.dims);
  REQUIRE(max_abs_diff(back.mat, w.mat) < 1e-12);
}

TEST_CASE("operator json rejects malformed input") {
  json ok = operator_to_json(make_operator(identity(2), {2}));
  json both = ok;
  both["pauli"] = json::object();
  REQUIRE_THROWS_AS(operator_from_json(both), std::invalid_argument);
  json neither = json{{"dims", {2}}};
  REQUIRE_THROWS_AS(operator_from_json(neither), std::invalid_argument);
  json nodims = ok;
  nodims.erase("dims");
  REQUIRE_THROWS_AS(operator_from_json(nodims), std::invalid_argument);
  json short_dense = ok;
  short_dense["dense"].erase(3);
  REQUIRE_THROWS_AS(operator_from_json(short_dense), std::invalid_argument);
  json bad_entry = ok;
  bad_entry["dense"][0] = 1.0;
  REQUIRE_THROWS_AS(operator_from_json(bad_entry), std::invalid_argument);
  json bad_key = json{{"dims", {2, 2}}, {"pauli", {{"Z", 1.0}}}};
  REQUIRE_THROWS_AS(operator_from_json(bad_key), std::invalid_argument);
  json qutrit = json{{"dims", {3}}, {"pauli", {{"Z", 1.0}}}};
  REQUIRE_THROWS_AS(operator_from_json(qutrit), std::invalid_argument);
}

TEST_CASE("instrument json round trips") {
  auto [alice, bob] = saturating_instruments();
  json j = instrument_to_json(bob);
  REQUIRE(j.at("party") == "bob");
  REQUIRE(j.at("ops").size() == 4);
  Instrument back = instrument_from_json(j);
  REQUIRE(back.party == "bob");
  REQUIRE(back.num_outcomes() == 2);
  REQUIRE(back.num_settings() == 2);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      REQUIRE(max_abs_diff(back.op(a, x), bob.op(a, x)) < 1e-15);

  json missing = j;
  missing["ops"].erase("a=1,x=1");
  REQUIRE_THROWS_AS(instrument_from_json(missing), std::invalid_argument);
  json badkey = j;
  badkey["ops"]["oops"] = operator_to_json(make_operator(identity(4), {2, 2}));
  REQUIRE_THROWS_AS(instrument_from_json(badkey), std::invalid_argument);
}

TEST_CASE("game stats json uses outcome|input keys") {
  Instrument ins = alpha_game_instruments();
  GameStats stats = game_stats(alpha_family(0.5), ins, ins);
  json j = game_stats_to_json(stats);
  REQUIRE(j.at("p_succ").get<double>() == Catch::Approx(stats.p_succ));
  REQUIRE(j.at("table").size() == 16);
  REQUIRE(j.at("table").at("0,1|1,0").get<double>() ==
          Catch::Approx(stats.table[0][1][1][0]));
  REQUIRE(j.at("clamped").get<int>() == 0);
}

TEST_CASE("report serializers expose their key fields") {
  Instrument ins = alpha_game_instruments();
  GameStats stats = game_stats(alpha_family(0.5), ins, ins);
  json t = thermo_report_to_json(thermo_report(stats));
  REQUIRE(t.at("circle_pmf").size() == 3);
  REQUIRE(t.at("interacting").at("work").get<double>() > 0);
  json i = info_report_to_json(info_report(stats));
  REQUIRE(i.at("I_red_blue").get<double>() > 0);
  json v = validation_report_to_json(validate_process(alpha_family(0.5)));
  REQUIRE(v.at("pass").get<bool>());
  REQUIRE(v.at("flags").empty());
  json s = signalling_to_json(signalling_decomposition(alpha_family(0.5), ins, ins));
  REQUIRE(s.at("c").at("3,3,3").get<double>() == Catch::Approx(0.125));
  REQUIRE(s.at("cp").at("3,1,1").get<double>() == Catch::Approx(0.125));
  REQUIRE(s.at("complete").get<bool>());
}

TEST_CASE("round9 trims noise and normalizes signed zero") {
  REQUIRE(round9(0.1234567894) == 0.123456789);
  REQUIRE(round9(0.1234567896) == 0.12345679);
  REQUIRE(round9(-1e-12) == 0.0);
  REQUIRE_FALSE(std::signbit(round9(-1e-12)));
  REQUIRE(round9(2.0) == 2.0);

  json j{{"a", 0.1234567894}, {"b", {1e-12, "text", 5}}, {"c", true}};
  json r = round9_deep(j);
  REQUIRE(r.at("a").get<double>() == 0.123456789);
  REQUIRE(r.at("b").at(0).get<double>() == 0.0);
  REQUIRE(r.at("b").at(1) == "text");
  REQUIRE(r.at("b").at(2) == 5);
  REQUIRE(r.at("c") == true);
}

TEST_CASE("reference file loads with all four scenarios") {
  auto expected = load_expected(test_support::data_dir() + "/expected.json");
  REQUIRE(expected.count("alpha") == 1);
  REQUIRE(expected.count("saturating") == 1);
  REQUIRE(expected.count("definite-order") == 1);
  REQUIRE(expected.count("local") == 1);
  REQUIRE(expected.at("alpha").size() == 4);
  for (const ExpectedEntry& e : expected.at("alpha")) {
    REQUIRE(e.has_alpha);
    REQUIRE(e.values.count("p_succ") == 1);
    REQUIRE(e.tol == 1e-9);
  }
  REQUIRE_FALSE(expected.at("definite-order").at(0).has_alpha);
  REQUIRE_THROWS_AS(load_expected("/nonexistent/expected.json"),
                    std::runtime_error);
}

TEST_CASE("comparison skips entries pinned to another alpha") {
  ExpectedEntry pinned;
  pinned.has_alpha = true;
  pinned.alpha = 0.5;
  pinned.tol = 1e-9;
  pinned.values = {{"gap", 0.125}};
  ExpectedEntry open;
  open.tol = 1e-9;
  open.values = {{"p_succ", 0.46875}};

  std::map<std::string, double> computed{{"gap", 0.125}, {"p_succ", 0.46875}};
  Comparison cmp = compare_expected(computed, {pinned, open}, 0.5);
  REQUIRE(cmp.pass());
  REQUIRE(cmp.checked == 2);
  REQUIRE(cmp.skipped_entries == 0);

  cmp = compare_expected(computed, {pinned, open}, 0.25);
  REQUIRE(cmp.skipped_entries == 1);
  REQUIRE(cmp.checked == 1);

  cmp = compare_expected(computed, {pinned, open},
                         std::numeric_limits<double>::quiet_NaN());
  REQUIRE(cmp.skipped_entries == 1);

  computed["gap"] = 0.126;
  cmp = compare_expected(computed, {pinned}, 0.5);
  REQUIRE_FALSE(cmp.pass());
  REQUIRE_THAT(cmp.failures.at(0),
               Catch::Matchers::ContainsSubstring("expected 0.125"));

  ExpectedEntry unknown;
  unknown.values = {{"no_such_key", 1.0}};
  cmp = compare_expected(computed, {unknown},
                         std::numeric_limits<double>::quiet_NaN());
  REQUIRE_FALSE(cmp.pass());
  REQUIRE_THAT(cmp.failures.at(0),
               Catch::Matchers::ContainsSubstring("not computed"));
}
