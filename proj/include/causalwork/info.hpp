#ifndef CAUSALWORK_INFO_HPP
#define CAUSALWORK_INFO_HPP

#include "causalwork/game.hpp"
#include "causalwork/operator_algebra.hpp"
#include "causalwork/thermo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace causalwork {

/// Shannon entropy in bits; weights below the cutoff are treated as zero.
inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0;
  for (double v : p) {
    if (v < -kEntropyCutoff)
      throw std::invalid_argument("shannon_entropy: negative weight");
    if (v <= kEntropyCutoff) continue;
    h -= v * std::log2(v);
  }
  return h;
}

inline double von_neumann_entropy(const Matrix& rho, double tol = kTol) {
  Eig e = eig_hermitian(rho, tol);
  std::vector<double> p(e.values.data(), e.values.data() + e.values.size());
  for (double& v : p) v = std::max(v, 0.0);
  return shannon_entropy(p);
}

/// Entropies of the final four-qubit state and of the game variables.
/// Red pair = (Alice square, Bob circle), blue pair = (Alice circle, Bob
/// square). bound_value = 2 + I_IO - H_AB upper-bounds the red-blue mutual
/// information; entropy_identity_dev measures how well the state entropy
/// matches the classical H(XY) + H(AB) - I_IO.
struct InfoReport {
  double S_red = 0;
  double S_blue = 0;
  double S_red_blue = 0;
  double H_XY = 0;
  double H_AB = 0;
  double I_IO = 0;
  double I_red_blue = 0;
  double bound_value = 0;
  double entropy_identity_dev = 0;
};

inline InfoReport info_report(const GameStats& stats, double tol = kTol) {
  Operator rho = final_state(stats);
  std::array<double, 16> lambda = outcome_weights(stats);

  // the 16 product states are orthogonal, so the weights must be the spectrum
  std::vector<double> lam(lambda.begin(), lambda.end());
  Eig e = eig_hermitian(rho.mat, tol);
  std::vector<double> spec(e.values.data(), e.values.data() + e.values.size());
  std::sort(lam.begin(), lam.end());
  std::sort(spec.begin(), spec.end());
  for (int k = 0; k < 16; ++k)
    if (std::abs(lam[k] - spec[k]) > std::max(tol, 1e-9))
      throw std::runtime_error("final state spectrum disagrees with outcome weights");

  InfoReport rep;
  rep.S_red = von_neumann_entropy(partial_trace(rho, {0, 1}).mat, tol);
  rep.S_blue = von_neumann_entropy(partial_trace(rho, {2, 3}).mat, tol);
  rep.S_red_blue = von_neumann_entropy(rho.mat, tol);

  std::vector<double> p_xy(4, 0), p_ab(4, 0), joint(lambda.begin(), lambda.end());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          double v = lambda[((a * 2 + b) * 2 + x) * 2 + y];
          p_xy[x * 2 + y] += v;
          p_ab[a * 2 + b] += v;
        }
  rep.H_XY = shannon_entropy(p_xy);
  rep.H_AB = shannon_entropy(p_ab);
  rep.I_IO = rep.H_XY + rep.H_AB - shannon_entropy(joint);
  rep.I_red_blue = rep.S_red + rep.S_blue - rep.S_red_blue;
  rep.bound_value = 2 + rep.I_IO - rep.H_AB;
  rep.entropy_identity_dev =
      std::abs(rep.S_red_blue - (rep.H_XY + rep.H_AB - rep.I_IO));
  return rep;
}

}  // namespace causalwork

#endif
