#ifndef CAUSALWORK_INSTRUMENT_HPP
#define CAUSALWORK_INSTRUMENT_HPP

#include "causalwork/operator_algebra.hpp"
#include "causalwork/rng.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causalwork {

/// One party's local instruments, one CP map per (outcome, setting) pair.
/// ops[a][x] is the Choi operator of the map for outcome a under setting x,
/// a 4x4 matrix on (input qubit, output qubit).
struct Instrument {
  std::string party;
  std::vector<std::vector<Matrix>> ops;

  int num_outcomes() const { return static_cast<int>(ops.size()); }
  int num_settings() const { return ops.empty() ? 0 : static_cast<int>(ops[0].size()); }
  const Matrix& op(int a, int x) const { return ops.at(a).at(x); }
};

struct InstrumentReport {
  double herm_dev = 0;
  double min_eigenvalue = 0;
  double completeness_dev = 0;  // max over settings of |Tr_out[sum_a M] - 1|
  std::vector<std::string> flags;
  bool pass() const { return flags.empty(); }
};

inline InstrumentReport validate_instrument(const Instrument& ins, double tol = kTol) {
  if (ins.ops.empty() || ins.ops[0].empty())
    throw std::invalid_argument("instrument has no operators");
  const int settings = ins.num_settings();
  for (const auto& row : ins.ops) {
    if (static_cast<int>(row.size()) != settings)
      throw std::invalid_argument("instrument settings are ragged");
    for (const Matrix& m : row)
      if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("instrument operators must be 4x4");
  }

  InstrumentReport rep;
  rep.min_eigenvalue = 0;
  for (int x = 0; x < settings; ++x) {
    Matrix total = Matrix::Zero(4, 4);
    for (int a = 0; a < ins.num_outcomes(); ++a) {
      const Matrix& m = ins.op(a, x);
      rep.herm_dev = std::max(rep.herm_dev, hermiticity_deviation(m));
      Matrix sym = (m + m.adjoint()) / 2.0;
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eigenvalue(sym));
      total += m;
    }
    Matrix in_marginal = partial_trace(make_operator(total, {2, 2}), {0}).mat;
    rep.completeness_dev =
        std::max(rep.completeness_dev, max_abs_diff(in_marginal, identity(2)));
  }
  if (rep.herm_dev > tol) rep.flags.push_back("hermitian");
  if (rep.min_eigenvalue < -tol) rep.flags.push_back("positive");
  if (rep.completeness_dev > tol) rep.flags.push_back("completeness");
  return rep;
}

inline Instrument checked_instrument(Instrument ins, double tol = kTol) {
  InstrumentReport rep = validate_instrument(ins, tol);
  if (!rep.pass()) {
    std::string msg = "invalid instrument:";
    for (const std::string& f : rep.flags) msg += " " + f;
    throw std::invalid_argument(msg);
  }
  return ins;
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

/// Choi operator of "project onto |measured>, then emit |prepared>":
/// |measured><measured| (x) |prepared*><prepared*|.
inline Matrix measure_prepare_op(const Vector& measured, const Vector& prepared) {
  return kron(projector(measured), projector(prepared.conjugate()));
}

/// Choi operator of "project onto |measured>, then apply u to the input".
inline Matrix measure_rotate_op(const Vector& measured, const Matrix& u) {
  return channel_choi({u * projector(measured)});
}

/// Instruments both parties use in the interpolating game. Setting 0 wires
/// the input through untouched and always announces outcome 1; setting 1
/// measures in the computational basis and emits |0>.
inline Instrument alpha_game_instruments(std::string party = "") {
  Instrument ins;
  ins.party = std::move(party);
  ins.ops.assign(2, std::vector<Matrix>(2));
  ins.ops[0][0] = Matrix::Zero(4, 4);
  ins.ops[1][0] = projector(phi_plus());
  for (int a = 0; a < 2; ++a)
    ins.ops[a][1] = measure_prepare_op(ket_bit(a), ket_zero());
  return ins;
}

/// Instrument pair that reaches the top of the two-way signalling bound on
/// the extremal process. Alice measures in the computational basis and
/// encodes a xor x; Bob measures along (z+x)/sqrt(2) and encodes b xor y in
/// the +-/- basis.
inline std::pair<Instrument, Instrument> saturating_instruments() {
  Instrument alice;
  alice.party = "alice";
  alice.ops.assign(2, std::vector<Matrix>(2));
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      alice.ops[a][x] = measure_prepare_op(ket_bit(a), ket_bit(a ^ x));

  const Vector h_plus = ket_bloch(M_PI / 4, 0);
  const Vector h_minus = ket_bloch(M_PI / 4 + M_PI, 0);
  Instrument bob;
  bob.party = "bob";
  bob.ops.assign(2, std::vector<Matrix>(2));
  bob.ops[0][0] = measure_prepare_op(h_plus, ket_plus());
  bob.ops[1][0] = measure_prepare_op(h_minus, ket_minus());
  bob.ops[0][1] = measure_prepare_op(h_plus, ket_minus());
  bob.ops[1][1] = measure_prepare_op(h_minus, ket_plus());
  return {std::move(alice), std::move(bob)};
}

/// Deterministic classical strategy: read the incoming bit t in the
/// computational basis, announce guess[x*2 + t], forward |encode[x*2 + t]>.
inline Instrument classical_strategy_instrument(const std::array<int, 4>& guess,
                                                const std::array<int, 4>& encode,
                                                std::string party = "") {
  Instrument ins;
  ins.party = std::move(party);
  ins.ops.assign(2, std::vector<Matrix>(2, Matrix::Zero(4, 4)));
  for (int x = 0; x < 2; ++x)
    for (int t = 0; t < 2; ++t) {
      int a = guess[x * 2 + t];
      if (a < 0 || a > 1 || encode[x * 2 + t] < 0 || encode[x * 2 + t] > 1)
        throw std::invalid_argument("classical strategy entries must be bits");
      ins.ops[a][x] += measure_prepare_op(ket_bit(t), ket_bit(encode[x * 2 + t]));
    }
  return ins;
}

// ---------------------------------------------------------------------------
// Pauli view and random instruments
// ---------------------------------------------------------------------------

/// Bloch-style parameters of one Choi operator M: weight q = Tr[M]/2, input
/// direction r, output direction s and correlation matrix t, normalized by
/// 2q. All but q are meaningless when q vanishes; defined flags that.
struct PauliParams {
  double q = 0;
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  bool defined = false;
};

inline PauliParams pauli_params(const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4)
    throw std::invalid_argument("pauli_params expects a 4x4 Choi operator");
  PauliParams p;
  p.q = m.trace().real() / 2.0;
  if (p.q < 1e-12) return p;
  p.defined = true;
  for (int i = 1; i <= 3; ++i) {
    p.r(i - 1) = (m * kron(pauli(i), pauli(0))).trace().real() / (2 * p.q);
    p.s(i - 1) = (m * kron(pauli(0), pauli(i))).trace().real() / (2 * p.q);
    for (int j = 1; j <= 3; ++j)
      p.t(i - 1, j - 1) = (m * kron(pauli(i), pauli(j))).trace().real() / (2 * p.q);
  }
  return p;
}

enum class InstrumentKind { projective_reprepare, unitary_conditioned };

/// Random two-setting, two-outcome instrument. Every setting measures a Haar
/// random basis; each outcome then either re-prepares a Haar random pure
/// state or applies a Haar random unitary to what was measured.
inline Instrument random_instrument(Rng& rng, InstrumentKind kind,
                                    std::string party = "") {
  Instrument ins;
  ins.party = std::move(party);
  ins.ops.assign(2, std::vector<Matrix>(2));
  for (int x = 0; x < 2; ++x) {
    Matrix basis = rng.haar_unitary(2);
    for (int a = 0; a < 2; ++a) {
      Vector measured = basis.col(a);
      if (kind == InstrumentKind::projective_reprepare)
        ins.ops[a][x] = measure_prepare_op(measured, rng.haar_ket(2));
      else
        ins.ops[a][x] = measure_rotate_op(measured, rng.haar_unitary(2));
    }
  }
  return ins;
}

}  // namespace causalwork

#endif
