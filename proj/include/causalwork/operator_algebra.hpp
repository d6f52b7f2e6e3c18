#ifndef CAUSALWORK_OPERATOR_ALGEBRA_HPP
#define CAUSALWORK_OPERATOR_ALGEBRA_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalwork {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTol = 1e-9;        // default numeric tolerance
inline constexpr double kPauliTol = 1e-12;  // Pauli round-trip tolerance
inline constexpr double kEntropyCutoff = 1e-12;

/// Square operator on a tensor product of finite-dimensional factors.
/// Subsystem 0 is the most significant index: for dims {dA,dB} row index
/// iA*dB + iB, which matches kron(A,B). A scalar has dims == {}.
struct Operator {
  Matrix mat;
  std::vector<int> dims;

  int side() const {
    int s = 1;
    for (int d : dims) s *= d;
    return s;
  }
  int num_subsystems() const { return static_cast<int>(dims.size()); }
};

inline Operator make_operator(Matrix m, std::vector<int> dims) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator must be square");
  long long s = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("dims must be positive");
    s *= d;
  }
  if (m.rows() != s) throw std::invalid_argument("dims do not match matrix size");
  return Operator{std::move(m), std::move(dims)};
}

// ---------------------------------------------------------------------------
// elementary matrices and states
// ---------------------------------------------------------------------------

inline const Matrix& pauli(int k) {
  static const Matrix ps[4] = {
      (Matrix(2, 2) << 1, 0, 0, 1).finished(),
      (Matrix(2, 2) << 0, 1, 1, 0).finished(),
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (Matrix(2, 2) << 1, 0, 0, -1).finished()};
  if (k < 0 || k > 3) throw std::invalid_argument("pauli index must be 0..3");
  return ps[k];
}

inline const Matrix& sigma_x() { return pauli(1); }
inline const Matrix& sigma_y() { return pauli(2); }
inline const Matrix& sigma_z() { return pauli(3); }
inline Matrix identity(int n) { return Matrix::Identity(n, n); }

inline Vector ket_zero() { return (Vector(2) << 1, 0).finished(); }
inline Vector ket_one() { return (Vector(2) << 0, 1).finished(); }
inline Vector ket_bit(int b) { return b ? ket_one() : ket_zero(); }
inline Vector ket_plus() { return (Vector(2) << M_SQRT1_2, M_SQRT1_2).finished(); }
inline Vector ket_minus() { return (Vector(2) << M_SQRT1_2, -M_SQRT1_2).finished(); }

/// |n+> for Bloch angles (theta, phi).
inline Vector ket_bloch(double theta, double phi) {
  Vector v(2);
  v(0) = std::cos(theta / 2);
  v(1) = std::exp(Complex(0, phi)) * std::sin(theta / 2);
  return v;
}

/// Unnormalized maximally entangled vector sum_i |ii>.
inline Vector phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1;
  return v;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

/// Singlet state (|01> - |10>)/sqrt(2) as a density matrix.
inline Matrix singlet() {
  Vector v = Vector::Zero(4);
  v(1) = M_SQRT1_2;
  v(2) = -M_SQRT1_2;
  return projector(v);
}

/// Choi matrix [I (x) L(|phi+><phi+|)]^T of the map L with the given Kraus
/// operators, input copy first, |phi+> unnormalized, full transpose. Equal to
/// sum_e |v_e><v_e| with v_e the row-major vectorization of K_e^dagger, so the
/// result is PSD by construction; a trace-preserving map gives trace d_in.
inline Matrix channel_choi(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("channel_choi: no Kraus operators");
  const int din = static_cast<int>(kraus[0].cols());
  const int dout = static_cast<int>(kraus[0].rows());
  Matrix out = Matrix::Zero(din * dout, din * dout);
  for (const Matrix& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw std::invalid_argument("channel_choi: Kraus shapes differ");
    Matrix kd = k.adjoint();
    Vector v(din * dout);
    for (int i = 0; i < din; ++i)
      for (int m = 0; m < dout; ++m) v(i * dout + m) = kd(i, m);
    out += v * v.adjoint();
  }
  return out;
}

// ---------------------------------------------------------------------------
// basic numerics
// ---------------------------------------------------------------------------

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("shape mismatch in max_abs_diff");
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol = kTol) {
  return max_abs_diff(a, b) <= tol;
}

inline double hermiticity_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// tensor structure
// ---------------------------------------------------------------------------

inline Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Operator kron(const Operator& a, const Operator& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return Operator{kron(a.mat, b.mat), std::move(dims)};
}

namespace detail {

inline void unpack_index(int r, const std::vector<int>& dims, std::vector<int>& out) {
  out.resize(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = r % dims[k];
    r /= dims[k];
  }
}

inline int pack_index(const std::vector<int>& digits, const std::vector<int>& dims) {
  int r = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) r = r * dims[k] + digits[k];
  return r;
}

inline void check_subset(const std::vector<int>& subset, int n, const char* what) {
  std::vector<char> seen(n, 0);
  for (int i : subset) {
    if (i < 0 || i >= n) throw std::invalid_argument(std::string(what) + ": index out of range");
    if (seen[i]) throw std::invalid_argument(std::string(what) + ": repeated index");
    seen[i] = 1;
  }
}

}  // namespace detail

/// Partial trace keeping the listed subsystems (in their original order).
/// keep == {} yields the scalar trace as a 1x1 operator with dims {}.
inline Operator partial_trace(const Operator& op, std::vector<int> keep) {
  const int n = op.num_subsystems();
  detail::check_subset(keep, n, "partial_trace");
  std::sort(keep.begin(), keep.end());
  std::vector<int> kdims;
  for (int i : keep) kdims.push_back(op.dims[i]);
  int kside = 1;
  for (int d : kdims) kside *= d;

  Matrix out = Matrix::Zero(kside, kside);
  std::vector<char> kept(n, 0);
  for (int i : keep) kept[i] = 1;
  std::vector<int> rd, cd, rk(keep.size()), ck(keep.size());
  const int side = op.side();
  for (int r = 0; r < side; ++r) {
    detail::unpack_index(r, op.dims, rd);
    for (int c = 0; c < side; ++c) {
      detail::unpack_index(c, op.dims, cd);
      bool diag = true;
      for (int k = 0; k < n; ++k)
        if (!kept[k] && rd[k] != cd[k]) {
          diag = false;
          break;
        }
      if (!diag) continue;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        rk[k] = rd[keep[k]];
        ck[k] = cd[keep[k]];
      }
      out(detail::pack_index(rk, kdims), detail::pack_index(ck, kdims)) += op.mat(r, c);
    }
  }
  return Operator{std::move(out), std::move(kdims)};
}

/// Projection _X: replaces the factors in X by maximally mixed ones,
/// (I_X / d_X) (x) Tr_X[op], with every factor left at its original position.
inline Operator identity_replace(const Operator& op, std::vector<int> replaced) {
  const int n = op.num_subsystems();
  detail::check_subset(replaced, n, "identity_replace");
  if (replaced.empty()) return op;
  std::sort(replaced.begin(), replaced.end());

  std::vector<char> in_x(n, 0);
  double dx = 1;
  for (int i : replaced) {
    in_x[i] = 1;
    dx *= op.dims[i];
  }
  std::vector<int> keep;
  for (int k = 0; k < n; ++k)
    if (!in_x[k]) keep.push_back(k);
  Operator traced = partial_trace(op, keep);

  Matrix out = Matrix::Zero(op.side(), op.side());
  std::vector<int> rd, cd, rk(keep.size()), ck(keep.size());
  for (int r = 0; r < op.side(); ++r) {
    detail::unpack_index(r, op.dims, rd);
    for (int c = 0; c < op.side(); ++c) {
      detail::unpack_index(c, op.dims, cd);
      bool ok = true;
      for (int i : replaced)
        if (rd[i] != cd[i]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        rk[k] = rd[keep[k]];
        ck[k] = cd[keep[k]];
      }
      out(r, c) = traced.mat(detail::pack_index(rk, traced.dims),
                             detail::pack_index(ck, traced.dims)) /
                  dx;
    }
  }
  return Operator{std::move(out), op.dims};
}

/// Reorders tensor factors; order lists the input subsystem indices in their
/// new positions (result factor k = input factor order[k]).
inline Operator permute_subsystems(const Operator& op, const std::vector<int>& order) {
  const int n = op.num_subsystems();
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("permute_subsystems: order must list every subsystem");
  detail::check_subset(order, n, "permute_subsystems");

  std::vector<int> ndims(n);
  for (int k = 0; k < n; ++k) ndims[k] = op.dims[order[k]];
  Matrix out(op.side(), op.side());
  std::vector<int> rd(n), cd(n), rs(n), cs(n);
  for (int r = 0; r < op.side(); ++r) {
    detail::unpack_index(r, ndims, rd);
    for (int c = 0; c < op.side(); ++c) {
      detail::unpack_index(c, ndims, cd);
      for (int k = 0; k < n; ++k) {
        rs[order[k]] = rd[k];
        cs[order[k]] = cd[k];
      }
      out(r, c) = op.mat(detail::pack_index(rs, op.dims), detail::pack_index(cs, op.dims));
    }
  }
  return Operator{std::move(out), std::move(ndims)};
}

/// kron(I_before, m, I_after) for a single-qubit operator at position pos.
inline Matrix embed_single(const Matrix& m, int pos, const std::vector<int>& dims) {
  if (pos < 0 || pos >= static_cast<int>(dims.size()))
    throw std::invalid_argument("embed_single: index out of range");
  int before = 1, after = 1;
  for (int k = 0; k < pos; ++k) before *= dims[k];
  for (int k = pos + 1; k < static_cast<int>(dims.size()); ++k) after *= dims[k];
  if (m.rows() != dims[pos]) throw std::invalid_argument("embed_single: size mismatch");
  return kron(kron(identity(before), m), identity(after));
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

struct Eig {
  Eigen::VectorXd values;  // descending
  Matrix vectors;          // column k belongs to values(k)
};

inline Eig eig_hermitian(const Matrix& m, double tol = kTol) {
  if (hermiticity_deviation(m) > tol)
    throw std::invalid_argument("eig_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed");
  const int n = static_cast<int>(m.rows());
  Eig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline Eig eig_hermitian(const Operator& op, double tol = kTol) {
  return eig_hermitian(op.mat, tol);
}

inline double min_eigenvalue(const Matrix& m, double tol = kTol) {
  Eig e = eig_hermitian(m, tol);
  return e.values(e.values.size() - 1);
}

// ---------------------------------------------------------------------------
// Pauli string decomposition (qubit factors only)
// ---------------------------------------------------------------------------

/// Raw coefficients keyed by strings over I,X,Y,Z: op = sum_S coef(S) sigma_S.
using PauliDecomposition = std::map<std::string, double>;

inline Matrix pauli_string_matrix(const std::string& s) {
  Matrix out = Matrix::Identity(1, 1);
  for (char c : s) {
    int k;
    switch (c) {
      case 'I': k = 0; break;
      case 'X': k = 1; break;
      case 'Y': k = 2; break;
      case 'Z': k = 3; break;
      default: throw std::invalid_argument("pauli string may only contain I,X,Y,Z");
    }
    out = kron(out, pauli(k));
  }
  return out;
}

inline PauliDecomposition pauli_decompose(const Operator& op, double drop_tol = 1e-14) {
  for (int d : op.dims)
    if (d != 2) throw std::invalid_argument("pauli_decompose: all factors must be qubits");
  const int n = op.num_subsystems();
  const double denom = static_cast<double>(op.side());
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};

  PauliDecomposition out;
  std::string key(n, 'I');
  const int total = 1 << (2 * n);
  for (int code = 0; code < total; ++code) {
    Matrix basis = Matrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
      int p = (code >> (2 * (n - 1 - k))) & 3;
      key[k] = letters[p];
      basis = kron(basis, pauli(p));
    }
    Complex tr = (op.mat * basis).trace();
    if (std::abs(tr.imag()) / denom > kTol)
      throw std::invalid_argument("pauli_decompose: operator is not Hermitian");
    double coef = tr.real() / denom;
    if (std::abs(coef) > drop_tol) out[key] = coef;
  }
  return out;
}

inline Operator pauli_compose(const PauliDecomposition& dec, int n_qubits) {
  const int side = 1 << n_qubits;
  Matrix out = Matrix::Zero(side, side);
  for (const auto& [key, coef] : dec) {
    if (static_cast<int>(key.size()) != n_qubits)
      throw std::invalid_argument("pauli_compose: key length does not match qubit count");
    out += coef * pauli_string_matrix(key);
  }
  return Operator{std::move(out), std::vector<int>(n_qubits, 2)};
}

}  // namespace causalwork

#endif
