#ifndef CAUSALWORK_THERMO_HPP
#define CAUSALWORK_THERMO_HPP

#include "causalwork/game.hpp"
#include "causalwork/operator_algebra.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace causalwork {

// The work medium is four qubits ordered (Alice square, Bob circle, Alice
// circle, Bob square): squares record the inputs, circles receive the
// guesses. Red pair = {0,1}, blue pair = {2,3}.
inline constexpr int kAliceSquare = 0;
inline constexpr int kBobCircle = 1;
inline constexpr int kAliceCircle = 2;
inline constexpr int kBobSquare = 3;

/// Single-qubit Hamiltonian eps |+><+|: ground state |->, gap eps.
inline Matrix qubit_hamiltonian(double eps) { return eps * projector(ket_plus()); }

inline Operator four_qubit_free_hamiltonian(double eps) {
  const std::vector<int> dims{2, 2, 2, 2};
  Matrix h = Matrix::Zero(16, 16);
  for (int k = 0; k < 4; ++k) h += embed_single(qubit_hamiltonian(eps), k, dims);
  return make_operator(std::move(h), dims);
}

inline double average_energy(const Operator& rho, const Operator& h) {
  if (rho.mat.rows() != h.mat.rows())
    throw std::invalid_argument("state and Hamiltonian sizes differ");
  return (rho.mat * h.mat).trace().real();
}

// ---------------------------------------------------------------------------
// the protocol's final state
// ---------------------------------------------------------------------------

/// Guess unitaries that park a correctly guessed circle in the ground state:
/// U_b maps the circle content |input xor 1> to |-> exactly when b = input.
inline std::pair<Matrix, Matrix> optimal_unitaries() {
  Matrix u0 = ket_plus() * ket_zero().adjoint() + ket_minus() * ket_one().adjoint();
  Matrix u1 = ket_minus() * ket_zero().adjoint() + ket_plus() * ket_one().adjoint();
  return {u0, u1};
}

/// Joint state of the inputs before any guess is applied: squares hold x and
/// y, each circle holds the complement of the input it will be judged on.
inline Operator initial_state() {
  Matrix rho = Matrix::Zero(16, 16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      rho += 0.25 * kron(kron(projector(ket_bit(x)), projector(ket_bit(1 - x))),
                         kron(projector(ket_bit(1 - y)), projector(ket_bit(y))));
  return make_operator(std::move(rho), {2, 2, 2, 2});
}

/// State after both parties rotate their circle with the guess-conditioned
/// unitary: a mixture of 16 product states weighted by p(x,y) p(a,b|x,y).
inline Operator final_state(const GameStats& stats, const Matrix& u0, const Matrix& u1) {
  const Matrix* u[2] = {&u0, &u1};
  Matrix rho = Matrix::Zero(16, 16);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          double weight = stats.p_xy * stats.table[a][b][x][y];
          if (weight == 0) continue;
          Matrix bob = projector((*u[b]) * ket_bit(1 - x));
          Matrix alice = projector((*u[a]) * ket_bit(1 - y));
          rho += weight * kron(kron(projector(ket_bit(x)), bob),
                               kron(alice, projector(ket_bit(y))));
        }
  return make_operator(std::move(rho), {2, 2, 2, 2});
}

inline Operator final_state(const GameStats& stats) {
  auto [u0, u1] = optimal_unitaries();
  return final_state(stats, u0, u1);
}

/// Mixture weights of the 16 product states, indexed ((a*2+b)*2+x)*2+y.
inline std::array<double, 16> outcome_weights(const GameStats& stats) {
  std::array<double, 16> lambda{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          lambda[((a * 2 + b) * 2 + x) * 2 + y] = stats.p_xy * stats.table[a][b][x][y];
  return lambda;
}

// ---------------------------------------------------------------------------
// energy bookkeeping
// ---------------------------------------------------------------------------

/// Discrete energy distribution; levels closer than the merge tolerance
/// are accumulated into one entry.
struct EnergyPmf {
  std::vector<std::pair<double, double>> levels;  // (energy, probability), ascending

  void add(double energy, double prob, double merge_tol) {
    for (auto& [e, p] : levels)
      if (std::abs(e - energy) <= merge_tol) {
        p += prob;
        return;
      }
    auto it = levels.begin();
    while (it != levels.end() && it->first < energy) ++it;
    levels.insert(it, {energy, prob});
  }
  double mean() const {
    double m = 0;
    for (const auto& [e, p] : levels) m += e * p;
    return m;
  }
};

namespace detail {

/// Projector onto the subspace where the listed circle qubits are excited
/// (|+>) and the remaining circle is in the ground state (|->).
inline Matrix circle_projector(bool bob_plus, bool alice_plus) {
  Matrix pb = bob_plus ? projector(ket_plus()) : projector(ket_minus());
  Matrix pa = alice_plus ? projector(ket_plus()) : projector(ket_minus());
  return kron(kron(identity(2), pb), kron(pa, identity(2)));
}

}  // namespace detail

/// Energy distribution of the two circle qubits under the free Hamiltonian:
/// {0: both right, eps: exactly one right, 2 eps: both wrong}. The counting
/// view from the game table is cross-checked against the spectral weights of
/// the final state; a mismatch means the two states disagree.
inline EnergyPmf circle_energy_pmf(const Operator& rho, const GameStats& stats,
                                   double eps, double tol = kTol) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  const double merge = 1e-9 * eps;
  EnergyPmf pmf;
  pmf.add(0, stats.p_succ, merge);
  pmf.add(eps, stats.p1, merge);
  pmf.add(2 * eps, stats.p2, merge);

  EnergyPmf spectral;
  for (int bp = 0; bp < 2; ++bp)
    for (int ap = 0; ap < 2; ++ap) {
      double p = (rho.mat * detail::circle_projector(bp, ap)).trace().real();
      spectral.add(eps * (bp + ap), p, merge);
    }
  for (const auto& [e, p] : pmf.levels) {
    double ps = 0;
    for (const auto& [es, pv] : spectral.levels)
      if (std::abs(es - e) <= merge) ps = pv;
    if (std::abs(ps - p) > tol)
      throw std::runtime_error("circle energy distribution disagrees with the state");
  }
  return pmf;
}

/// Work balance when the circles also carry the attractive coupling
/// -eps |+><+| (x) |+><+|; the doubly excited level collapses onto the
/// singly excited one, so the distribution is {0: p_succ, eps: 1 - p_succ}.
struct InteractingWork {
  double initial_energy = 0;
  double final_energy = 0;
  double work = 0;  // initial - final
  EnergyPmf pmf;
};

inline InteractingWork interacting_work(const Operator& rho, const GameStats& stats,
                                        double eps, double tol = kTol) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  Operator h = four_qubit_free_hamiltonian(eps);
  h.mat -= eps * kron(kron(identity(2), projector(ket_plus())),
                      kron(projector(ket_plus()), identity(2)));
  InteractingWork res;
  res.initial_energy = average_energy(initial_state(), h);
  res.final_energy = average_energy(rho, h);
  res.work = res.initial_energy - res.final_energy;

  const double merge = 1e-9 * eps;
  res.pmf.add(0, stats.p_succ, merge);
  res.pmf.add(eps, 1 - stats.p_succ, merge);
  double ground = (rho.mat * detail::circle_projector(false, false)).trace().real();
  if (std::abs(ground - stats.p_succ) > tol)
    throw std::runtime_error("interacting ground weight disagrees with the state");
  return res;
}

// ---------------------------------------------------------------------------
// ergotropy
// ---------------------------------------------------------------------------

/// Passive counterpart of rho under h: eigenvalues of rho in descending
/// order loaded onto the eigenstates of h in ascending energy order.
inline Matrix passive_state(const Matrix& rho, const Matrix& h, double tol = kTol) {
  Eig er = eig_hermitian(rho, tol);
  Eig eh = eig_hermitian(h, tol);
  const int n = static_cast<int>(rho.rows());
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const auto& level = eh.vectors.col(n - 1 - k);  // ascending energy
    p += er.values(k) * (level * level.adjoint());
  }
  return p;
}

/// Largest work extractable by a unitary: Tr[h rho] - Tr[h passive(rho)].
inline double ergotropy(const Matrix& rho, const Matrix& h, double tol = kTol) {
  Matrix p = passive_state(rho, h, tol);
  return ((rho - p) * h).trace().real();
}

/// Ergotropy of B's share after a projective measurement on A, averaged over
/// outcomes; basis columns are the measurement kets. Outcomes with
/// negligible probability are skipped.
inline double daemonic_ergotropy(const Matrix& rho_ab, const Matrix& h_b,
                                 const Matrix& basis, double tol = kTol) {
  if (rho_ab.rows() != 4 || basis.rows() != 2 || basis.cols() != 2 ||
      h_b.rows() != 2)
    throw std::invalid_argument("daemonic_ergotropy expects qubit A x qubit B");
  double total = 0;
  for (int a = 0; a < 2; ++a) {
    Matrix pa = kron(projector(Vector(basis.col(a))), identity(2));
    Operator branch = make_operator(pa * rho_ab * pa, {2, 2});
    double p = branch.mat.trace().real();
    if (p < 1e-12) continue;
    Matrix rho_b = partial_trace(branch, {1}).mat / p;
    total += p * ergotropy(rho_b, h_b, tol);
  }
  return total;
}

// ---------------------------------------------------------------------------
// aggregate report
// ---------------------------------------------------------------------------

struct ThermoReport {
  double eps = 1;
  double gap = 0;
  double average_energy = 0;      // final state under the free Hamiltonian
  double energy_identity_dev = 0; // |E - (2 - gap) eps|
  EnergyPmf circle_pmf;
  InteractingWork interacting;
};

inline ThermoReport thermo_report(const GameStats& stats, double eps = 1,
                                  double tol = kTol) {
  ThermoReport rep;
  rep.eps = eps;
  rep.gap = bound_gap(stats);
  Operator rho = final_state(stats);
  rep.average_energy = average_energy(rho, four_qubit_free_hamiltonian(eps));
  rep.energy_identity_dev = std::abs(rep.average_energy - (2 - rep.gap) * eps);
  rep.circle_pmf = circle_energy_pmf(rho, stats, eps, tol);
  rep.interacting = interacting_work(rho, stats, eps, tol);
  return rep;
}

}  // namespace causalwork

#endif
