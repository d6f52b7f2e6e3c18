#ifndef CAUSALWORK_PROCESS_HPP
#define CAUSALWORK_PROCESS_HPP

#include "causalwork/operator_algebra.hpp"
#include "causalwork/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalwork {

// Subsystem layout of every full process operator: dims {2,2,2,2} in the
// order (Alice in, Alice out, Bob in, Bob out).
inline constexpr int kAliceIn = 0;
inline constexpr int kAliceOut = 1;
inline constexpr int kBobIn = 2;
inline constexpr int kBobOut = 3;

inline const double kAlphaMax = M_SQRT1_2;

inline void require_process_dims(const Operator& w) {
  if (w.dims != std::vector<int>{2, 2, 2, 2})
    throw std::invalid_argument("process operator must have dims {2,2,2,2}");
}

// ---------------------------------------------------------------------------
// validity
// ---------------------------------------------------------------------------

/// Deviations from the bipartite process conditions. A valid process is PSD
/// with trace 4 and satisfies the three projection identities below; flags
/// lists every condition that failed at the tolerance used.
struct ValidationReport {
  double herm_dev = 0;
  double min_eigenvalue = 0;
  double trace_value = 0;
  double trace_dev = 0;
  double dev_alice_output_mixed = 0;  // _{B_I B_O} W == _{A_O B_I B_O} W
  double dev_bob_output_mixed = 0;    // _{A_I A_O} W == _{A_I A_O B_O} W
  double dev_output_cross_terms = 0;  // W == _{B_O}W + _{A_O}W - _{A_O B_O}W
  std::vector<std::string> flags;
  bool pass() const { return flags.empty(); }
};

inline ValidationReport validate_process(const Operator& w, double tol = kTol) {
  require_process_dims(w);
  ValidationReport rep;
  rep.herm_dev = hermiticity_deviation(w.mat);
  Matrix sym = (w.mat + w.mat.adjoint()) / 2.0;
  Eig eig = eig_hermitian(sym);
  rep.min_eigenvalue = eig.values(eig.values.size() - 1);
  Complex tr = w.mat.trace();
  rep.trace_value = tr.real();
  rep.trace_dev = std::abs(tr - Complex(4.0, 0.0));
  rep.dev_alice_output_mixed =
      max_abs_diff(identity_replace(w, {kBobIn, kBobOut}).mat,
                   identity_replace(w, {kAliceOut, kBobIn, kBobOut}).mat);
  rep.dev_bob_output_mixed =
      max_abs_diff(identity_replace(w, {kAliceIn, kAliceOut}).mat,
                   identity_replace(w, {kAliceIn, kAliceOut, kBobOut}).mat);
  Matrix recomposed = identity_replace(w, {kBobOut}).mat +
                      identity_replace(w, {kAliceOut}).mat -
                      identity_replace(w, {kAliceOut, kBobOut}).mat;
  rep.dev_output_cross_terms = max_abs_diff(w.mat, recomposed);

  if (rep.herm_dev > tol) rep.flags.push_back("hermitian");
  if (rep.min_eigenvalue < -tol) rep.flags.push_back("positive");
  if (rep.trace_dev > tol) rep.flags.push_back("trace");
  if (rep.dev_alice_output_mixed > tol) rep.flags.push_back("alice_output_mixed");
  if (rep.dev_bob_output_mixed > tol) rep.flags.push_back("bob_output_mixed");
  if (rep.dev_output_cross_terms > tol) rep.flags.push_back("output_cross_terms");
  return rep;
}

/// Process operator together with the report that admitted it.
struct ProcessMatrix {
  Operator op;
  ValidationReport report;
};

inline ProcessMatrix checked_process(Operator w, double tol = kTol) {
  ValidationReport rep = validate_process(w, tol);
  if (!rep.pass()) {
    std::string msg = "invalid process operator:";
    for (const std::string& f : rep.flags) msg += " " + f;
    throw std::invalid_argument(msg);
  }
  return ProcessMatrix{std::move(w), std::move(rep)};
}

// ---------------------------------------------------------------------------
// causal order
// ---------------------------------------------------------------------------

enum class CausalOrder { alice_first, bob_first };

/// A process is compatible with the order A before B iff mixing B's output
/// leaves it unchanged, and with B before A iff mixing A's output does.
struct OrderCheck {
  double dev_alice_first = 0;
  double dev_bob_first = 0;
  bool alice_first = false;
  bool bob_first = false;
};

inline OrderCheck causal_order_check(const Operator& w, double tol = kTol) {
  require_process_dims(w);
  OrderCheck oc;
  oc.dev_alice_first = max_abs_diff(w.mat, identity_replace(w, {kBobOut}).mat);
  oc.dev_bob_first = max_abs_diff(w.mat, identity_replace(w, {kAliceOut}).mat);
  oc.alice_first = oc.dev_alice_first <= tol;
  oc.bob_first = oc.dev_bob_first <= tol;
  return oc;
}

/// Builds a full process from a reduced three-qubit operator. The reduced
/// operator lives on (A_I, A_O, B_I) for alice_first and on the canonical
/// order (A_I, B_I, B_O) for bob_first; it must be PSD with trace 2 and
/// satisfy the one-way causality condition for the chosen order. The omitted
/// terminal output is appended as an identity factor.
inline Operator ordered_from_reduced(const Operator& reduced, CausalOrder order,
                                     double tol = kTol) {
  if (reduced.dims != std::vector<int>{2, 2, 2})
    throw std::invalid_argument("reduced process must have dims {2,2,2}");
  Matrix sym = (reduced.mat + reduced.mat.adjoint()) / 2.0;
  if (hermiticity_deviation(reduced.mat) > tol)
    throw std::invalid_argument("reduced process is not Hermitian");
  if (min_eigenvalue(sym) < -tol)
    throw std::invalid_argument("reduced process is not PSD");
  if (std::abs(reduced.mat.trace() - Complex(2.0, 0.0)) > tol)
    throw std::invalid_argument("reduced process must have trace 2");

  if (order == CausalOrder::alice_first) {
    // last wire is B_I: once it is mixed, A_O must be mixed too
    double dev = max_abs_diff(identity_replace(reduced, {2}).mat,
                              identity_replace(reduced, {1, 2}).mat);
    if (dev > tol)
      throw std::invalid_argument("reduced process violates one-way causality");
    return kron(reduced, make_operator(identity(2), {2}));
  }
  double dev = max_abs_diff(identity_replace(reduced, {0}).mat,
                            identity_replace(reduced, {0, 2}).mat);
  if (dev > tol)
    throw std::invalid_argument("reduced process violates one-way causality");
  Operator padded = kron(reduced, make_operator(identity(2), {2}));
  // padded order (A_I, B_I, B_O, A_O) -> (A_I, A_O, B_I, B_O)
  return permute_subsystems(padded, {0, 3, 1, 2});
}

/// Convex mixture of a (checked) A-first and B-first process.
inline Operator mix_separable(double q, const Operator& w_alice_first,
                              const Operator& w_bob_first, double tol = kTol) {
  if (q < -tol || q > 1 + tol)
    throw std::invalid_argument("mixing weight must lie in [0,1]");
  OrderCheck oa = causal_order_check(w_alice_first, tol);
  if (!oa.alice_first)
    throw std::invalid_argument("first argument is not an A-first process");
  OrderCheck ob = causal_order_check(w_bob_first, tol);
  if (!ob.bob_first)
    throw std::invalid_argument("second argument is not a B-first process");
  return make_operator(q * w_alice_first.mat + (1 - q) * w_bob_first.mat, {2, 2, 2, 2});
}

/// Projection of a process onto its non-signalling part (both outputs mixed).
inline Operator nonsignalling_part(const Operator& w) {
  require_process_dims(w);
  return identity_replace(w, {kAliceOut, kBobOut});
}

// ---------------------------------------------------------------------------
// named families
// ---------------------------------------------------------------------------

/// (1/4)(1 + a ZZZI + a ZIXX) on (A_I, A_O, B_I, B_O); PSD exactly for
/// 0 <= a <= 1/sqrt(2), with eigenvalues (1 +- sqrt(2) a)/4.
inline Operator alpha_family(double alpha) {
  if (alpha < -1e-12 || alpha > kAlphaMax + 1e-12)
    throw std::invalid_argument("alpha must lie in [0, 1/sqrt(2)]");
  Matrix w = 0.25 * (identity(16) + alpha * (pauli_string_matrix("ZZZI") +
                                             pauli_string_matrix("ZIXX")));
  return make_operator(std::move(w), {2, 2, 2, 2});
}

/// (1/4)(1 + c ZZZI + c' ZIXX); the two strings anticommute, so the operator
/// is PSD iff c^2 + c'^2 <= 1. No range check: callers probe the boundary.
inline Operator boundary_family_1(double c, double cp) {
  Matrix w = 0.25 * (identity(16) + c * pauli_string_matrix("ZZZI") +
                     cp * pauli_string_matrix("ZIXX"));
  return make_operator(std::move(w), {2, 2, 2, 2});
}

/// (1/4)(1 + c ZZZI + c' ZIZZ); the strings commute, so PSD iff |c|+|c'| <= 1.
inline Operator boundary_family_2(double c, double cp) {
  Matrix w = 0.25 * (identity(16) + c * pauli_string_matrix("ZZZI") +
                     cp * pauli_string_matrix("ZIZZ"));
  return make_operator(std::move(w), {2, 2, 2, 2});
}

/// Reduced A-first process that hands Alice a maximally mixed input and wires
/// her output straight into Bob's input (Choi state of the identity channel).
inline Operator identity_channel_reduced() {
  Operator mixed = make_operator(identity(2) / 2.0, {2});
  Operator wire = make_operator(projector(phi_plus()), {2, 2});
  return kron(mixed, wire);
}

// ---------------------------------------------------------------------------
// random processes
// ---------------------------------------------------------------------------

namespace detail {

/// Choi matrix of a Haar random qubit channel (Stinespring dilation with a
/// four-dimensional environment, so every channel is reachable).
inline Matrix random_channel_choi(Rng& rng) {
  Matrix u = rng.haar_unitary(8);
  std::vector<Matrix> kraus;
  for (int e = 0; e < 4; ++e) {
    Matrix k(2, 2);
    for (int m = 0; m < 2; ++m)
      for (int j = 0; j < 2; ++j) k(m, j) = u(m * 4 + e, j);
    kraus.push_back(std::move(k));
  }
  return channel_choi(kraus);
}

}  // namespace detail

/// Random process with a definite causal order: a mixture of terms
/// (input state) (x) (Choi of a random channel first output -> second input),
/// which satisfies the one-way causality condition term by term.
inline Operator random_ordered(Rng& rng, CausalOrder order, int terms = 3) {
  if (terms < 1) throw std::invalid_argument("terms must be positive");
  std::vector<double> w(terms);
  double sum = 0;
  for (double& x : w) {
    x = rng.uniform();
    sum += x;
  }
  Matrix red = Matrix::Zero(8, 8);
  for (int k = 0; k < terms; ++k) {
    Matrix state = projector(rng.haar_ket(2));
    red += (w[k] / sum) * kron(state, detail::random_channel_choi(rng));
  }
  Operator first_party = make_operator(std::move(red), {2, 2, 2});
  if (order == CausalOrder::alice_first)
    return ordered_from_reduced(first_party, order);
  // built as (B_I, B_O, A_I); canonical reduced order is (A_I, B_I, B_O)
  return ordered_from_reduced(permute_subsystems(first_party, {2, 0, 1}), order);
}

/// Random convex mixture of an A-first and a B-first process.
inline Operator random_separable(Rng& rng, int terms = 3) {
  double q = rng.uniform();
  Operator wa = random_ordered(rng, CausalOrder::alice_first, terms);
  Operator wb = random_ordered(rng, CausalOrder::bob_first, terms);
  return mix_separable(q, wa, wb);
}

}  // namespace causalwork

#endif
