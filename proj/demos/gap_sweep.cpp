// Sweeps the interpolating family and prints how the game, the extracted
// work and the red-blue correlations grow together.

#include "causalwork/scenarios.hpp"

#include <cstdio>

int main() {
  using namespace causalwork;
  std::printf("%8s %10s %10s %10s %10s %10s\n", "alpha", "p_succ", "p2", "gap",
              "w_avg", "I_rb");
  const int steps = 8;
  for (int k = 0; k < steps; ++k) {
    double a = kAlphaMax * k / (steps - 1);
    ScenarioReport rep = run_scenario(make_scenario("alpha", a));
    std::printf("%8.5f %10.6f %10.6f %10.6f %10.6f %10.6f\n", a, rep.stats.p_succ,
                rep.stats.p2, rep.gap, rep.thermo.interacting.work,
                rep.info.I_red_blue);
  }
  ScenarioReport sat = run_scenario(make_scenario("saturating"));
  std::printf("saturating instruments on the extremal member: p_succ=%.6f "
              "p2=%.6f gap=%.6f\n",
              sat.stats.p_succ, sat.stats.p2, sat.gap);
  return 0;
}
