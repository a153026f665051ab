#pragma once

#include <string>
#include <utility>

#include "incapax/opalg.hpp"

namespace incapax {

// Completely positive trace-preserving map in Kraus form.
struct Channel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<CMatrix> kraus;  // each dim_out x dim_in
  std::string name;

  // Frobenius norm of (sum K^dag K - I).
  double completeness_residual() const {
    CMatrix acc = CMatrix::Zero(dim_in, dim_in);
    for (const auto& k : kraus) acc += k.adjoint() * k;
    return (acc - CMatrix::Identity(dim_in, dim_in)).norm();
  }

  bool is_trace_preserving(double tol = kDefaultTol.tp) const {
    return completeness_residual() <= tol;
  }

  // Apply the channel: rho -> sum_i K_i rho K_i^dag.
  CMatrix operator()(const CMatrix& rho) const {
    require(rho.rows() == dim_in && rho.cols() == dim_in, "Channel: state dimension mismatch");
    CMatrix out = CMatrix::Zero(dim_out, dim_out);
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
  }
};

// Choi matrix J(N) = (I (x) N)(|phi_d><phi_d|), trace-1 convention; lives on
// reference (dim_in) tensor output (dim_out), reference factor first.
struct ChoiMatrix {
  CMatrix mat;
  DimPair dims;  // (dim_in, dim_out)
};

// Matrix acting on column-stacked vectorized operators.
struct SuperOperator {
  int dim_in = 0;
  int dim_out = 0;
  CMatrix mat;  // dim_out^2 x dim_in^2

  CMatrix operator()(const CMatrix& rho) const {
    require(rho.rows() == dim_in && rho.cols() == dim_in, "SuperOperator: dimension mismatch");
    return unvec(mat * vec(rho), dim_out, dim_out);
  }
};

inline ChoiMatrix choi(const Channel& ch) {
  const int d = ch.dim_in;
  CVector phi = max_entangled(d);
  CMatrix id = CMatrix::Identity(d, d);
  CMatrix j = CMatrix::Zero(static_cast<Eigen::Index>(d) * ch.dim_out,
                            static_cast<Eigen::Index>(d) * ch.dim_out);
  for (const auto& k : ch.kraus) {
    CVector w = kron(id, k) * phi;
    j += w * w.adjoint();
  }
  return {j, {d, ch.dim_out}};
}

// Eigendecompose a PSD Choi matrix back into Kraus operators; eigenvalues
// below tol are truncated.
inline Channel choi_to_kraus(const ChoiMatrix& j, double tol = kDefaultTol.psd) {
  const int d = j.dims.d1, dp = j.dims.d2;
  require(j.mat.rows() == static_cast<Eigen::Index>(d) * dp, "choi_to_kraus: dims mismatch");
  EigResult eig = hermitian_eigs(j.mat);
  require(eig.values(0) >= -tol, "choi_to_kraus: Choi matrix is not PSD");
  Channel ch;
  ch.dim_in = d;
  ch.dim_out = dp;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double lam = eig.values(k);
    if (lam <= tol) continue;
    CMatrix kr(dp, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < dp; ++r) kr(r, c) = std::sqrt(lam * d) * eig.vectors(c * dp + r, k);
    ch.kraus.push_back(std::move(kr));
  }
  require(!ch.kraus.empty(), "choi_to_kraus: zero Choi matrix");
  return ch;
}

// Column-stacking: the superoperator of rho -> A rho B^dag is conj(B) (x) A.
inline SuperOperator superoperator(const Channel& ch) {
  CMatrix s = CMatrix::Zero(static_cast<Eigen::Index>(ch.dim_out) * ch.dim_out,
                            static_cast<Eigen::Index>(ch.dim_in) * ch.dim_in);
  for (const auto& k : ch.kraus) s += kron(k.conjugate(), k);
  return {ch.dim_in, ch.dim_out, s};
}

inline SuperOperator identity_superop(int d) {
  return {d, d, CMatrix::Identity(static_cast<Eigen::Index>(d) * d,
                                  static_cast<Eigen::Index>(d) * d)};
}

// s2 after s1... note: compose(a, b) applies b first, then a (a . b).
inline SuperOperator compose(const SuperOperator& a, const SuperOperator& b) {
  require(a.dim_in == b.dim_out, "compose: inner dimensions mismatch");
  return {b.dim_in, a.dim_out, a.mat * b.mat};
}

inline Channel tensor(const Channel& a, const Channel& b) {
  Channel out;
  out.dim_in = a.dim_in * b.dim_in;
  out.dim_out = a.dim_out * b.dim_out;
  for (const auto& ka : a.kraus)
    for (const auto& kb : b.kraus) out.kraus.push_back(kron(ka, kb));
  return out;
}

inline Channel conjugate_channel(const Channel& ch) {
  Channel out = ch;
  for (auto& k : out.kraus) k = k.conjugate();
  return out;
}

struct Stinespring {
  CMatrix isometry;  // (dim_out * dim_env) x dim_in, output factor slow
  int dim_env = 0;
};

// V|psi> = sum_k K_k|psi> (x) |k>_E; environment dimension = Kraus count.
inline Stinespring stinespring(const Channel& ch) {
  const int de = static_cast<int>(ch.kraus.size());
  CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(ch.dim_out) * de, ch.dim_in);
  for (int k = 0; k < de; ++k)
    for (int r = 0; r < ch.dim_out; ++r)
      for (int c = 0; c < ch.dim_in; ++c) v(r * de + k, c) = ch.kraus[k](r, c);
  return {v, de};
}

// Complementary channel N^c(rho) = Tr_B(V rho V^dag); Kraus C_r(k,c) = K_k(r,c).
inline Channel complementary(const Channel& ch) {
  const int de = static_cast<int>(ch.kraus.size());
  Channel out;
  out.dim_in = ch.dim_in;
  out.dim_out = de;
  for (int r = 0; r < ch.dim_out; ++r) {
    CMatrix c(de, ch.dim_in);
    for (int k = 0; k < de; ++k)
      for (int col = 0; col < ch.dim_in; ++col) c(k, col) = ch.kraus[k](r, col);
    out.kraus.push_back(std::move(c));
  }
  return out;
}

// Choi matrix of an arbitrary linear superoperator (square dims).
inline ChoiMatrix choi_of_superop(const SuperOperator& s) {
  const int d = s.dim_in, dp = s.dim_out;
  CMatrix j = CMatrix::Zero(static_cast<Eigen::Index>(d) * dp,
                            static_cast<Eigen::Index>(d) * dp);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, jj) = 1.0 / d;
      CMatrix blk = s(unit);
      j.block(i * dp, jj * dp, dp, dp) = blk;
    }
  return {j, {d, dp}};
}

struct CptpCheck {
  bool cp;
  bool tp;
  double min_choi_eig;
};

inline CptpCheck is_cptp(const SuperOperator& s, double tol = kDefaultTol.psd) {
  ChoiMatrix j = choi_of_superop(s);
  CMatrix h = (j.mat + j.mat.adjoint()) / 2.0;
  const double lo = min_eigenvalue(h);
  CMatrix marg = partial_trace(j.mat, j.dims, 2);
  const bool tp = (marg - CMatrix::Identity(s.dim_in, s.dim_in) / double(s.dim_in)).norm() <= tol;
  return {lo >= -tol, tp, lo};
}

inline Channel random_channel(int d_in, int d_out, int kraus_count, std::mt19937_64& rng) {
  require(d_in >= 1 && d_out >= 1 && kraus_count >= 1, "random_channel: bad dims");
  // Haar-like random isometry d_in -> d_out*kraus_count via QR.
  const int big = d_out * kraus_count;
  require(big >= d_in, "random_channel: d_out*kraus_count must be >= d_in");
  CMatrix u = random_unitary(big, rng);
  CMatrix v = u.leftCols(d_in);
  Channel ch;
  ch.dim_in = d_in;
  ch.dim_out = d_out;
  ch.name = "random";
  for (int k = 0; k < kraus_count; ++k) {
    CMatrix kr(d_out, d_in);
    for (int r = 0; r < d_out; ++r) kr.row(r) = v.row(r * kraus_count + k);
    ch.kraus.push_back(std::move(kr));
  }
  return ch;
}

inline Channel random_channel(int d_in, int d_out, int kraus_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_channel(d_in, d_out, kraus_count, rng);
}

}  // namespace incapax
