#ifndef CAUSALWORK_RNG_HPP
#define CAUSALWORK_RNG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace causalwork {

/// Mixes a 64-bit value (splitmix64 finalizer). Used to derive independent
/// per-sample seeds from a master seed so that parallel workers can share a
/// deterministic stream without coordinating.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Deterministic RNG. All draws go through explicit arithmetic on the raw
/// mt19937_64 stream rather than std:: distributions, so a fixed seed gives
/// bit-identical results on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int bit() { return static_cast<int>(eng_() & 1u); }
  int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Uniform direction on the Bloch sphere.
  Eigen::Vector3d bloch_direction() {
    double z = uniform(-1.0, 1.0);
    double phi = uniform(0.0, 2.0 * M_PI);
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
  }

  /// Haar-random unit vector in C^dim.
  Eigen::VectorXcd haar_ket(int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = std::complex<double>(gaussian(), gaussian());
    return v / v.norm();
  }

  /// Haar-random unitary via QR of a Ginibre matrix with phase fix.
  Eigen::MatrixXcd haar_unitary(int dim) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(gaussian(), gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
      std::complex<double> d = r(j, j);
      double a = std::abs(d);
      q.col(j) *= (a > 0) ? d / a : std::complex<double>(1, 0);
    }
    return q;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace causalwork

#endif
