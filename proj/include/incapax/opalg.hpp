#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace incapax {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Default numerical tolerances, overridable per call site.
struct Tolerances {
  double herm = 1e-9;   // Hermiticity check
  double psd = 1e-9;    // positive semidefiniteness slack
  double trace = 1e-9;  // unit-trace check
  double tp = 1e-9;     // trace preservation (Kraus completeness)
};

inline const Tolerances kDefaultTol{};

// Subsystem dimensions (d1, d2) of a bipartite operator; index ordering is
// row-major in the factors, i.e. composite index = i1*d2 + i2.
struct DimPair {
  int d1 = 0;
  int d2 = 0;
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool is_hermitian(const CMatrix& m, double tol = kDefaultTol.herm) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Kronecker product with first-factor-slow index ordering.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Column-stacking vectorization; Eigen matrices are column-major so this is a
// straight copy of the storage.
inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, int rows, int cols) {
  require(static_cast<Eigen::Index>(rows) * cols == v.size(), "unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

// Trace out subsystem `which` (1 or 2) of a bipartite operator.
inline CMatrix partial_trace(const CMatrix& m, DimPair dims, int which) {
  const int d1 = dims.d1, d2 = dims.d2;
  require(m.rows() == m.cols() && m.rows() == static_cast<Eigen::Index>(d1) * d2,
          "partial_trace: dimension mismatch");
  require(which == 1 || which == 2, "partial_trace: which must be 1 or 2");
  if (which == 2) {
    CMatrix out = CMatrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
  }
  CMatrix out = CMatrix::Zero(d2, d2);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
  return out;
}

// Transpose one tensor factor; involutive.
inline CMatrix partial_transpose(const CMatrix& m, DimPair dims, int which) {
  const int d1 = dims.d1, d2 = dims.d2;
  require(m.rows() == m.cols() && m.rows() == static_cast<Eigen::Index>(d1) * d2,
          "partial_transpose: dimension mismatch");
  require(which == 1 || which == 2, "partial_transpose: which must be 1 or 2");
  CMatrix out(m.rows(), m.cols());
  for (int i1 = 0; i1 < d1; ++i1)
    for (int i2 = 0; i2 < d2; ++i2)
      for (int j1 = 0; j1 < d1; ++j1)
        for (int j2 = 0; j2 < d2; ++j2) {
          if (which == 1)
            out(i1 * d2 + i2, j1 * d2 + j2) = m(j1 * d2 + i2, i1 * d2 + j2);
          else
            out(i1 * d2 + i2, j1 * d2 + j2) = m(i1 * d2 + j2, j1 * d2 + i2);
        }
  return out;
}

struct EigResult {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // columns match values
};

inline EigResult hermitian_eigs(const CMatrix& m, double herm_tol = kDefaultTol.herm) {
  require(is_hermitian(m, herm_tol), "hermitian_eigs: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  require(es.info() == Eigen::Success, "hermitian_eigs: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const CMatrix& m, double herm_tol = kDefaultTol.herm) {
  return hermitian_eigs(m, herm_tol).values(0);
}

struct PsdCheck {
  bool is_psd;
  double min_eig;
};

inline PsdCheck min_eig_psd(const CMatrix& m, double tol = kDefaultTol.psd) {
  const double lo = min_eigenvalue(m);
  return {lo >= -tol, lo};
}

// |phi_d> = (1/sqrt(d)) sum_i |i>|i>
inline CVector max_entangled(int d) {
  require(d >= 2, "max_entangled: d must be >= 2");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

// F = sum_{ij} |i>|j><j|<i|; swaps the two tensor factors.
inline CMatrix swap_operator(int d) {
  require(d >= 2, "swap_operator: d must be >= 2");
  CMatrix f = CMatrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

inline double frob_norm(const CMatrix& m) { return m.norm(); }

// ---------------------------------------------------------------------------
// Seeded random generators
// ---------------------------------------------------------------------------

inline CMatrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

// Haar-like random unitary: QR of a complex Gaussian with phase-fixed diagonal.
inline CMatrix random_unitary(int d, std::mt19937_64& rng) {
  CMatrix g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex rii = r(i, i);
    q.col(i) *= (std::abs(rii) > 0) ? rii / std::abs(rii) : Complex(1, 0);
  }
  return q;
}

inline CMatrix random_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(d, rng);
}

inline CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  CMatrix g = random_gaussian(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

struct DensityMatrix {
  CMatrix mat;
  int dim = 0;
};

inline DensityMatrix random_state(int d, std::mt19937_64& rng) {
  CMatrix g = random_gaussian(d, d, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return {rho, d};
}

inline DensityMatrix random_state(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state(d, rng);
}

inline DensityMatrix random_pure_state(int d, std::mt19937_64& rng) {
  CVector v = random_gaussian(d, 1, rng).col(0);
  v.normalize();
  return {v * v.adjoint(), d};
}

}  // namespace incapax
