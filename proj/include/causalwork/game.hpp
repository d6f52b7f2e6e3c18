#ifndef CAUSALWORK_GAME_HPP
#define CAUSALWORK_GAME_HPP

#include "causalwork/instrument.hpp"
#include "causalwork/operator_algebra.hpp"
#include "causalwork/process.hpp"
#include "causalwork/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace causalwork {

// ---------------------------------------------------------------------------
// Born rule
// ---------------------------------------------------------------------------

namespace detail {

/// Row-major vectorization of a 4x4 operator.
inline Vector rowvec4(const Matrix& m) {
  Vector v(16);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) v(r * 4 + s) = m(r, s);
  return v;
}

inline double clamp_probability(double p, int& clamped, double tol) {
  if (p >= 0) return p;
  if (p >= -tol) {
    ++clamped;
    return 0;
  }
  throw std::domain_error("probability below -tolerance: " + std::to_string(p));
}

}  // namespace detail

/// Kernel K with Tr[(M_A (x) M_B) W] = rowvec(M_A)^T K rowvec(M_B).
inline Matrix born_kernel(const Operator& w) {
  require_process_dims(w);
  Matrix k(16, 16);
  for (int ra = 0; ra < 4; ++ra)
    for (int sa = 0; sa < 4; ++sa)
      for (int rb = 0; rb < 4; ++rb)
        for (int sb = 0; sb < 4; ++sb)
          k(ra * 4 + sa, rb * 4 + sb) = w.mat(sa * 4 + sb, ra * 4 + rb);
  return k;
}

/// Re Tr[(M_A (x) M_B) W] without any clamping.
inline double born_probability(const Operator& w, const Matrix& ma, const Matrix& mb) {
  require_process_dims(w);
  if (ma.rows() != 4 || ma.cols() != 4 || mb.rows() != 4 || mb.cols() != 4)
    throw std::invalid_argument("born_probability expects 4x4 local operators");
  return (kron(ma, mb) * w.mat).trace().real();
}

// ---------------------------------------------------------------------------
// game statistics
// ---------------------------------------------------------------------------

/// Full conditional distribution of the guessing game under uniform inputs.
/// table[a][b][x][y] = p(a,b|x,y); a play succeeds when a = y and b = x, and
/// p2 is the probability that both guesses are wrong. Tiny negative
/// probabilities (within tol) are clamped to zero and counted.
struct GameStats {
  std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> table{};
  double p_xy = 0.25;
  double p_succ = 0;
  double p1 = 0;
  double p2 = 0;
  int clamped = 0;
};

namespace detail {

/// game_stats against a precomputed Born kernel; lets callers that pit many
/// instrument pairs against one process pay for the kernel once.
inline GameStats stats_from_kernel(const Matrix& kernel, const Instrument& alice,
                                   const Instrument& bob, double tol) {
  if (alice.num_outcomes() != 2 || alice.num_settings() != 2 ||
      bob.num_outcomes() != 2 || bob.num_settings() != 2)
    throw std::invalid_argument("game_stats expects two-setting binary instruments");
  Vector va[2][2], kb[2][2];
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) va[a][x] = detail::rowvec4(alice.op(a, x));
  for (int b = 0; b < 2; ++b)
    for (int y = 0; y < 2; ++y) kb[b][y] = kernel * detail::rowvec4(bob.op(b, y));

  GameStats stats;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          Complex val = va[a][x].cwiseProduct(kb[b][y]).sum();
          stats.table[a][b][x][y] =
              detail::clamp_probability(val.real(), stats.clamped, tol);
        }
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      stats.p_succ += stats.p_xy * stats.table[y][x][x][y];
      stats.p2 += stats.p_xy * stats.table[1 - y][1 - x][x][y];
      stats.p1 += stats.p_xy *
                  (stats.table[y][1 - x][x][y] + stats.table[1 - y][x][x][y]);
    }
  return stats;
}

}  // namespace detail

inline GameStats game_stats(const Operator& w, const Instrument& alice,
                            const Instrument& bob, double tol = kTol) {
  return detail::stats_from_kernel(born_kernel(w), alice, bob, tol);
}

inline double bound_gap(const GameStats& stats) { return stats.p_succ - stats.p2; }

/// True iff the success probability strictly exceeds the causal bound 1/2.
inline bool causal_inequality_violated(const GameStats& stats, double tol = kTol) {
  return stats.p_succ > 0.5 + tol;
}

// ---------------------------------------------------------------------------
// signalling decomposition of the gap
// ---------------------------------------------------------------------------

namespace detail {

inline int pauli_letter_index(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
  }
  throw std::invalid_argument("bad Pauli letter");
}

inline double diff_trace(const Matrix& d, int a, int b) {
  return (d * kron(pauli(a), pauli(b))).trace().real();
}

}  // namespace detail

/// Splits p_succ - p2 into the two signalling sectors of the process. c and m
/// cover strings acting on (A_I, A_O, B_I) with both middle factors
/// nontrivial; cp and mp cover (A_I, B_I, B_O) with the outer pair
/// nontrivial. For trace-preserving instruments
///   p_succ - p2 = (1/4) (sum c m + sum cp mp)
/// holds exactly whenever residual, the Pauli weight of W outside the three
/// causally allowed sectors, vanishes.
struct SignallingDecomposition {
  std::array<std::array<std::array<double, 3>, 3>, 4> c{};    // [alpha][i-1][j-1]
  std::array<std::array<std::array<double, 3>, 4>, 3> cp{};   // [i-1][alpha][j-1]
  std::array<std::array<std::array<double, 3>, 3>, 4> m{};
  std::array<std::array<std::array<double, 3>, 4>, 3> mp{};
  double norm_m = 0;
  double norm_mp = 0;
  double reconstructed_gap = 0;
  double residual = 0;
  bool complete = false;
};

inline SignallingDecomposition signalling_decomposition(const Operator& w,
                                                        const Instrument& alice,
                                                        const Instrument& bob,
                                                        double tol = kTol) {
  require_process_dims(w);
  SignallingDecomposition dec;

  double residual_sq = 0;
  for (const auto& [key, coef] : pauli_decompose(w)) {
    const int ai = detail::pauli_letter_index(key[0]);
    const int ao = detail::pauli_letter_index(key[1]);
    const int bi = detail::pauli_letter_index(key[2]);
    const int bo = detail::pauli_letter_index(key[3]);
    if (ao == 0 && bo == 0) continue;  // non-signalling sector
    if (ao != 0 && bi != 0 && bo == 0)
      dec.c[ai][ao - 1][bi - 1] = coef;
    else if (ai != 0 && ao == 0 && bo != 0)
      dec.cp[ai - 1][bi][bo - 1] = coef;
    else
      residual_sq += coef * coef;
  }
  dec.residual = std::sqrt(residual_sq);
  dec.complete = dec.residual <= tol;

  // channel (setting) differences and outcome differences per party
  Matrix na = alice.op(0, 0) + alice.op(1, 0) - alice.op(0, 1) - alice.op(1, 1);
  Matrix nb = bob.op(0, 0) + bob.op(1, 0) - bob.op(0, 1) - bob.op(1, 1);
  Matrix da = alice.op(0, 1) - alice.op(1, 0);
  Matrix db = bob.op(0, 1) - bob.op(1, 0);

  double gap = 0;
  for (int al = 0; al < 4; ++al)
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        double v = detail::diff_trace(na, al, i) * detail::diff_trace(db, j, 0);
        dec.m[al][i - 1][j - 1] = v;
        dec.norm_m += v * v;
        gap += dec.c[al][i - 1][j - 1] * v;
      }
  for (int i = 1; i <= 3; ++i)
    for (int al = 0; al < 4; ++al)
      for (int j = 1; j <= 3; ++j) {
        double v = detail::diff_trace(da, i, 0) * detail::diff_trace(nb, al, j);
        dec.mp[i - 1][al][j - 1] = v;
        dec.norm_mp += v * v;
        gap += dec.cp[i - 1][al][j - 1] * v;
      }
  dec.norm_m = std::sqrt(dec.norm_m);
  dec.norm_mp = std::sqrt(dec.norm_mp);
  dec.reconstructed_gap = gap / 4.0;
  return dec;
}

// ---------------------------------------------------------------------------
// randomized search for the largest gap
// ---------------------------------------------------------------------------

struct BoundSearchResult {
  double best_gap = -std::numeric_limits<double>::infinity();
  std::int64_t best_index = -1;
  GameStats best_stats;
  Instrument best_alice;
  Instrument best_bob;
  std::int64_t violations = 0;  // samples with p_succ - p2 > 1/2 + tol
  std::int64_t samples = 0;
};

namespace detail {

/// Measure-and-prepare instrument from 12 angles: per setting a measurement
/// axis (theta, phi) and per outcome a prepared state (theta, phi).
inline Instrument instrument_from_angles(const double* a) {
  Instrument ins;
  ins.ops.assign(2, std::vector<Matrix>(2));
  for (int x = 0; x < 2; ++x) {
    const double* s = a + 6 * x;
    Vector axis_plus = ket_bloch(s[0], s[1]);
    Vector axis_minus = ket_bloch(M_PI - s[0], s[1] + M_PI);
    ins.ops[0][x] = measure_prepare_op(axis_plus, ket_bloch(s[2], s[3]));
    ins.ops[1][x] = measure_prepare_op(axis_minus, ket_bloch(s[4], s[5]));
  }
  return ins;
}

/// Angles of a measure-and-prepare instrument, when it has that form.
inline bool angles_from_instrument(const Instrument& ins, double* out) {
  for (int x = 0; x < 2; ++x) {
    PauliParams p0 = pauli_params(ins.op(0, x));
    PauliParams p1 = pauli_params(ins.op(1, x));
    if (!p0.defined || !p1.defined) return false;
    if (std::abs(p0.r.norm() - 1) > 1e-6 || (p0.r + p1.r).norm() > 1e-6) return false;
    if (std::abs(p0.s.norm() - 1) > 1e-6 || std::abs(p1.s.norm() - 1) > 1e-6)
      return false;
    double* s = out + 6 * x;
    s[0] = std::acos(std::clamp(p0.r(2), -1.0, 1.0));
    s[1] = std::atan2(p0.r(1), p0.r(0));
    for (int a = 0; a < 2; ++a) {
      // the Choi operator carries the conjugate of the prepared state
      const Eigen::Vector3d& v = a ? p1.s : p0.s;
      s[2 + 2 * a] = std::acos(std::clamp(v(2), -1.0, 1.0));
      s[3 + 2 * a] = std::atan2(-v(1), v(0));
    }
  }
  return true;
}

}  // namespace detail

/// Draws `samples` independent random instrument pairs against a fixed
/// process, tracking the largest gap (strict improvement, so ties resolve to
/// the lowest index) and counting causal-bound violations. Sample i uses
/// seed sample_seed(seed, i), so any prefix of a run is reproducible. With
/// refine, a coordinate hill climb over measure-and-prepare angles polishes
/// the best pair found.
inline BoundSearchResult bound_search(const Operator& w, std::int64_t samples,
                                      std::uint64_t seed, bool refine = false,
                                      double tol = kTol) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  const Matrix kernel = born_kernel(w);
  BoundSearchResult res;
  res.samples = samples;
  for (std::int64_t i = 0; i < samples; ++i) {
    Rng rng(sample_seed(seed, static_cast<std::uint64_t>(i)));
    auto kind_a = rng.bit() ? InstrumentKind::unitary_conditioned
                            : InstrumentKind::projective_reprepare;
    auto kind_b = rng.bit() ? InstrumentKind::unitary_conditioned
                            : InstrumentKind::projective_reprepare;
    Instrument alice = random_instrument(rng, kind_a, "alice");
    Instrument bob = random_instrument(rng, kind_b, "bob");
    GameStats stats = detail::stats_from_kernel(kernel, alice, bob, tol);
    double gap = bound_gap(stats);
    if (causal_inequality_violated(stats, tol) || gap > 0.5 + tol) ++res.violations;
    if (gap > res.best_gap) {
      res.best_gap = gap;
      res.best_index = i;
      res.best_stats = stats;
      res.best_alice = std::move(alice);
      res.best_bob = std::move(bob);
    }
  }

  if (refine) {
    double angles[24];
    bool seeded = detail::angles_from_instrument(res.best_alice, angles) &&
                  detail::angles_from_instrument(res.best_bob, angles + 12);
    if (!seeded) {
      Rng rng(sample_seed(seed, static_cast<std::uint64_t>(samples)));
      for (double& a : angles) a = rng.uniform(0, 2 * M_PI);
    }
    auto objective = [&](const double* a) {
      Instrument ia = detail::instrument_from_angles(a);
      Instrument ib = detail::instrument_from_angles(a + 12);
      return bound_gap(detail::stats_from_kernel(kernel, ia, ib, tol));
    };
    double best = objective(angles);
    for (double step = M_PI / 8; step > 1e-4; step /= 2) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int k = 0; k < 24; ++k) {
          for (double dir : {step, -step}) {
            double saved = angles[k];
            angles[k] += dir;
            double val = objective(angles);
            if (val > best) {
              best = val;
              improved = true;
            } else {
              angles[k] = saved;
            }
          }
        }
      }
    }
    if (best > res.best_gap) {
      res.best_alice = detail::instrument_from_angles(angles);
      res.best_alice.party = "alice";
      res.best_bob = detail::instrument_from_angles(angles + 12);
      res.best_bob.party = "bob";
      res.best_stats = game_stats(w, res.best_alice, res.best_bob, tol);
      res.best_gap = bound_gap(res.best_stats);
    }
  }
  return res;
}

}  // namespace causalwork

#endif
