#include "causalwork/game.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace causalwork;

namespace {

Instrument constant_guess(const Vector& measured0, const Vector& prepared0,
                          const Vector& measured1, const Vector& prepared1) {
  Instrument ins;
  ins.ops.assign(2, std::vector<Matrix>(2));
  for (int x = 0; x < 2; ++x) {
    ins.ops[0][x] = measure_prepare_op(measured0, prepared0);
    ins.ops[1][x] = measure_prepare_op(measured1, prepared1);
  }
  return ins;
}

}  // namespace

TEST_CASE("born_kernel matches the direct trace") {
  Rng rng(31);
  Operator w = random_separable(rng);
  Matrix kernel = born_kernel(w);
  Instrument ia = random_instrument(rng, InstrumentKind::projective_reprepare);
  Instrument ib = random_instrument(rng, InstrumentKind::unitary_conditioned);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Matrix& ma = ia.op(a, 0);
      const Matrix& mb = ib.op(b, 1);
      Complex via_kernel =
          detail::rowvec4(ma).cwiseProduct(kernel * detail::rowvec4(mb)).sum();
      REQUIRE(via_kernel.real() ==
              Catch::Approx(born_probability(w, ma, mb)).margin(1e-12));
      REQUIRE(std::abs(via_kernel.imag()) < 1e-12);
    }
  REQUIRE_THROWS_AS(born_probability(w, identity(2), identity(4)),
                    std::invalid_argument);
}

TEST_CASE("interpolating game follows its closed forms") {
  Instrument ins = alpha_game_instruments();
  for (double alpha : {0.0, 0.25, 0.5, kAlphaMax}) {
    GameStats stats = game_stats(alpha_family(alpha), ins, ins);
    REQUIRE(stats.p_succ == Catch::Approx(5 * (1 + alpha) / 16).margin(1e-12));
    REQUIRE(stats.p2 == Catch::Approx((5 + alpha) / 16).margin(1e-12));
    REQUIRE(stats.p1 == Catch::Approx(3 * (1 - alpha) / 8).margin(1e-12));
    REQUIRE(bound_gap(stats) == Catch::Approx(alpha / 4).margin(1e-12));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        double total = 0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) total += stats.table[a][b][x][y];
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
      }
  }
  REQUIRE(causal_inequality_violated(
      game_stats(alpha_family(kAlphaMax), ins, ins)));
  REQUIRE_FALSE(
      causal_inequality_violated(game_stats(alpha_family(0.5), ins, ins)));
}

TEST_CASE("saturating pair reaches gap 1/2 with a flat table") {
  auto [alice, bob] = saturating_instruments();
  GameStats stats = game_stats(alpha_family(kAlphaMax), alice, bob);
  REQUIRE(stats.p_succ == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(stats.p2 == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(stats.p1 == Catch::Approx(0.5).margin(1e-12));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          int sb = ((x + b) % 2) ? -1 : 1;
          int sa = ((a + y) % 2) ? -1 : 1;
          REQUIRE(stats.table[a][b][x][y] ==
                  Catch::Approx(0.25 * (1 + 0.5 * (sb + sa))).margin(1e-12));
        }
}

TEST_CASE("one-way wiring reaches gap 1/2 classically") {
  Operator w = ordered_from_reduced(identity_channel_reduced(),
                                    CausalOrder::alice_first);
  Instrument alice = classical_strategy_instrument({0, 0, 0, 0}, {0, 0, 1, 1});
  Instrument bob = classical_strategy_instrument({0, 1, 0, 1}, {0, 0, 0, 0});
  GameStats stats = game_stats(w, alice, bob);
  for (int b = 0; b < 2; ++b)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        REQUIRE(stats.table[0][b][x][y] ==
                Catch::Approx(b == x ? 1.0 : 0.0).margin(1e-12));
        REQUIRE(stats.table[1][b][x][y] == Catch::Approx(0.0).margin(1e-12));
      }
  REQUIRE(stats.p_succ == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(stats.p2 == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("negative probabilities clamp within tolerance and throw beyond") {
  Instrument alice = constant_guess(ket_zero(), ket_one(), ket_one(), ket_zero());
  Instrument bob = constant_guess(ket_zero(), ket_zero(), ket_one(), ket_zero());
  REQUIRE(validate_instrument(alice).pass());
  REQUIRE(validate_instrument(bob).pass());

  // far outside the PSD ball: probability -1/4 must refuse to clamp
  REQUIRE_THROWS_AS(game_stats(boundary_family_1(2.0, 0.0), alice, bob),
                    std::domain_error);

  // just over the boundary: -5e-11 clamps to zero and is counted
  GameStats stats = game_stats(boundary_family_1(1.0 + 2e-10, 0.0), alice, bob);
  REQUIRE(stats.clamped > 0);
  REQUIRE(stats.table[0][0][0][0] == 0.0);
  GameStats clean = game_stats(alpha_family(0.5), alpha_game_instruments(),
                               alpha_game_instruments());
  REQUIRE(clean.clamped == 0);
}

TEST_CASE("signalling decomposition of the interpolating game") {
  const double alpha = 0.6;
  Instrument ins = alpha_game_instruments();
  SignallingDecomposition dec =
      signalling_decomposition(alpha_family(alpha), ins, ins);
  REQUIRE(dec.complete);
  REQUIRE(dec.residual < 1e-12);
  REQUIRE(dec.c[3][2][2] == Catch::Approx(alpha / 4).margin(1e-12));
  REQUIRE(dec.cp[2][1][0] == Catch::Approx(alpha / 4).margin(1e-12));
  REQUIRE(dec.m[3][2][2] == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(dec.mp[2][1][0] == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(dec.reconstructed_gap == Catch::Approx(alpha / 4).margin(1e-12));
}

TEST_CASE("saturating pair maxes out both response norms") {
  auto [alice, bob] = saturating_instruments();
  SignallingDecomposition dec =
      signalling_decomposition(alpha_family(kAlphaMax), alice, bob);
  REQUIRE(dec.norm_m == Catch::Approx(8.0).margin(1e-12));
  REQUIRE(dec.norm_mp == Catch::Approx(8.0).margin(1e-12));
  REQUIRE(dec.reconstructed_gap == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(dec.complete);
}

TEST_CASE("decomposition reconstructs the gap for random pairs") {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    Operator w = random_separable(rng);
    auto kind = [&] {
      return rng.bit() ? InstrumentKind::unitary_conditioned
                       : InstrumentKind::projective_reprepare;
    };
    Instrument alice = random_instrument(rng, kind(), "alice");
    Instrument bob = random_instrument(rng, kind(), "bob");
    GameStats stats = game_stats(w, alice, bob);
    SignallingDecomposition dec = signalling_decomposition(w, alice, bob);
    REQUIRE(dec.residual <= 1e-9);
    REQUIRE(dec.complete);
    REQUIRE(dec.reconstructed_gap ==
            Catch::Approx(bound_gap(stats)).margin(1e-9));
    REQUIRE(dec.norm_m <= 8 + 1e-9);
    REQUIRE(dec.norm_mp <= 8 + 1e-9);
  }
}

TEST_CASE("weight outside the causal sectors shows up as residual") {
  Matrix w = 0.25 * (identity(16) + 0.5 * pauli_string_matrix("IZIZ"));
  Instrument ins = alpha_game_instruments();
  SignallingDecomposition dec =
      signalling_decomposition(make_operator(std::move(w), {2, 2, 2, 2}), ins, ins);
  REQUIRE(dec.residual == Catch::Approx(0.125).margin(1e-12));
  REQUIRE_FALSE(dec.complete);
}

TEST_CASE("bound_search is reproducible and prefix-stable") {
  Operator w = alpha_family(kAlphaMax);
  BoundSearchResult a = bound_search(w, 50, 123);
  BoundSearchResult b = bound_search(w, 50, 123);
  REQUIRE(a.best_gap == b.best_gap);
  REQUIRE(a.best_index == b.best_index);
  REQUIRE(a.violations == b.violations);

  BoundSearchResult longer = bound_search(w, 100, 123);
  REQUIRE(longer.best_gap >= a.best_gap);
  if (longer.best_index < 50) REQUIRE(longer.best_gap == a.best_gap);

  REQUIRE(a.violations == 0);
  REQUIRE(a.best_gap <= 0.5 + 1e-9);
  REQUIRE_THROWS_AS(bound_search(w, 0, 1), std::invalid_argument);
}

TEST_CASE("refinement only improves the best gap") {
  Operator w = alpha_family(0.5);
  BoundSearchResult raw = bound_search(w, 10, 7, false);
  BoundSearchResult refined = bound_search(w, 10, 7, true);
  REQUIRE(refined.best_gap >= raw.best_gap);
  REQUIRE(refined.best_gap <= 0.5 + 1e-9);
  REQUIRE(validate_instrument(refined.best_alice).pass());
  REQUIRE(validate_instrument(refined.best_bob).pass());
}
