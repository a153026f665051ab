#pragma once

#include <optional>

#include "incapax/certificate.hpp"
#include "incapax/channel.hpp"

namespace incapax {

enum class FeasibilityStatus { Feasible, Infeasible, Undetermined };

inline const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::Feasible: return "feasible";
    case FeasibilityStatus::Infeasible: return "infeasible";
    default: return "undetermined";
  }
}

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Undetermined;
  double distance = 0.0;  // Frobenius distance between the two projection points
  int iterations = 0;
  std::optional<ChoiMatrix> degrading_choi;  // on (dim_env, dim_out)
  std::vector<double> distance_history;      // one entry per iteration
};

struct AntidegParams {
  double eps_feas = 1e-7;
  int max_iter = 20000;
  double eps_marg = 1e-6;
};

namespace detail {

// The Choi matrix J of D: E->B determines the superoperator of D entrywise:
// S_D[k + l*dB, i + j*dE] = dE * J[i*dB + k, j*dB + l].
// The feasibility problem is linear in J; we solve it over the real vector
// x = (Re vec J, Im vec J).
struct AffineSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;

  void finalize() { cod.compute(a); }

  // Orthogonal projection of x onto {A x = b} (least-squares manifold when
  // the system is inconsistent).
  Eigen::VectorXd project(const Eigen::VectorXd& x) const {
    return x - cod.solve(a * x - b);
  }

  double residual(const Eigen::VectorXd& x) const { return (a * x - b).norm(); }
};

class ComplexRowBuilder {
 public:
  ComplexRowBuilder(int n2) : n2_(n2) {}

  void add_row(const std::vector<std::pair<int, Complex>>& coeffs, Complex rhs) {
    Eigen::VectorXd re = Eigen::VectorXd::Zero(2 * n2_);
    Eigen::VectorXd im = Eigen::VectorXd::Zero(2 * n2_);
    for (const auto& [e, alpha] : coeffs) {
      re(e) += alpha.real();
      re(n2_ + e) -= alpha.imag();
      im(e) += alpha.imag();
      im(n2_ + e) += alpha.real();
    }
    rows_.push_back(re);
    rhs_.push_back(rhs.real());
    rows_.push_back(im);
    rhs_.push_back(rhs.imag());
  }

  AffineSystem build() const {
    AffineSystem sys;
    sys.a.resize(static_cast<Eigen::Index>(rows_.size()), 2 * n2_);
    sys.b.resize(static_cast<Eigen::Index>(rows_.size()));
    for (size_t i = 0; i < rows_.size(); ++i) {
      sys.a.row(static_cast<Eigen::Index>(i)) = rows_[i];
      sys.b(static_cast<Eigen::Index>(i)) = rhs_[i];
    }
    sys.finalize();
    return sys;
  }

 private:
  int n2_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<double> rhs_;
};

inline CMatrix unpack_choi(const Eigen::VectorXd& x, int n) {
  CMatrix j(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const int e = r + c * n;
      j(r, c) = Complex(x(e), x(n * n + e));
    }
  return j;
}

inline Eigen::VectorXd pack_choi(const CMatrix& j) {
  const int n = static_cast<int>(j.rows());
  Eigen::VectorXd x(2 * n * n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const int e = r + c * n;
      x(e) = j(r, c).real();
      x(n * n + e) = j(r, c).imag();
    }
  return x;
}

// Frobenius projection onto the Hermitian PSD cone: hermitize, clip spectrum.
inline Eigen::VectorXd project_psd(const Eigen::VectorXd& x, int n) {
  CMatrix j = unpack_choi(x, n);
  CMatrix h = (j + j.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  CMatrix clipped = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return pack_choi(clipped);
}

inline AffineSystem degrading_constraints(const Channel& ch) {
  const Channel nc = complementary(ch);
  const int de = nc.dim_out;          // environment = degrader input
  const int db = ch.dim_out;          // degrader output
  const int n = de * db;              // degrader Choi dimension
  const SuperOperator s_nc = superoperator(nc);
  const SuperOperator s_n = superoperator(ch);

  ComplexRowBuilder rows(n * n);
  auto jidx = [n](int r, int c) { return r + c * n; };

  // Trace preservation: Tr_B J = I/de.
  for (int i = 0; i < de; ++i)
    for (int j = 0; j < de; ++j) {
      std::vector<std::pair<int, Complex>> coeffs;
      for (int k = 0; k < db; ++k) coeffs.push_back({jidx(i * db + k, j * db + k), 1.0});
      rows.add_row(coeffs, (i == j) ? Complex(1.0 / de, 0) : Complex(0, 0));
    }

  // Degrading identity: S_D * S_Nc = S_N.
  const int da = ch.dim_in;
  for (int row_i = 0; row_i < db * db; ++row_i)
    for (int col = 0; col < da * da; ++col) {
      const int k = row_i % db, l = row_i / db;
      std::vector<std::pair<int, Complex>> coeffs;
      for (int m = 0; m < de * de; ++m) {
        const int i = m % de, j = m / de;
        const Complex w = double(de) * s_nc.mat(m, col);
        if (std::abs(w) > 0) coeffs.push_back({jidx(i * db + k, j * db + l), w});
      }
      rows.add_row(coeffs, s_n.mat(row_i, col));
    }

  AffineSystem base = rows.build();

  // Append Hermiticity rows (real-linear, not complex-linear).
  const int n2 = n * n;
  std::vector<Eigen::VectorXd> extra;
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      if (r == c) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n2);
        row(n2 + r + c * n) = 1.0;  // Im J(r,r) = 0
        extra.push_back(row);
      } else {
        Eigen::VectorXd row1 = Eigen::VectorXd::Zero(2 * n2);
        row1(r + c * n) = 1.0;
        row1(c + r * n) = -1.0;  // Re J(r,c) = Re J(c,r)
        extra.push_back(row1);
        Eigen::VectorXd row2 = Eigen::VectorXd::Zero(2 * n2);
        row2(n2 + r + c * n) = 1.0;
        row2(n2 + c + r * n) = 1.0;  // Im J(r,c) = -Im J(c,r)
        extra.push_back(row2);
      }
    }

  AffineSystem sys;
  sys.a.resize(base.a.rows() + static_cast<Eigen::Index>(extra.size()), 2 * n2);
  sys.b.resize(base.a.rows() + static_cast<Eigen::Index>(extra.size()));
  sys.a.topRows(base.a.rows()) = base.a;
  sys.b.head(base.a.rows()) = base.b;
  for (size_t i = 0; i < extra.size(); ++i) {
    sys.a.row(base.a.rows() + static_cast<Eigen::Index>(i)) = extra[i];
    sys.b(base.a.rows() + static_cast<Eigen::Index>(i)) = 0.0;
  }
  sys.finalize();
  return sys;
}

}  // namespace detail

// Decide existence of a degrading map D: E->B with D o N^c = N by Dykstra
// alternating projections between the PSD cone of the candidate Choi matrix
// and the affine set {Hermitian, TP, degrading identity}.
inline FeasibilityResult antidegradability_feasibility(const Channel& ch,
                                                       const AntidegParams& params = {}) {
  const int de = static_cast<int>(ch.kraus.size());
  const int db = ch.dim_out;
  const int n = de * db;
  detail::AffineSystem sys = detail::degrading_constraints(ch);

  // Start at the maximally mixed Choi (completely depolarizing degrader).
  Eigen::VectorXd x = detail::pack_choi(CMatrix::Identity(n, n) / double(n));
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd q = Eigen::VectorXd::Zero(x.size());

  FeasibilityResult res;
  res.distance_history.reserve(params.max_iter);
  Eigen::VectorXd y = x;
  for (int it = 0; it < params.max_iter; ++it) {
    y = detail::project_psd(x + p, n);
    p = x + p - y;
    x = sys.project(y + q);
    q = y + q - x;
    // Termination metric = max of the iterate gap and the true affine
    // residual of the PSD point; the latter guards against converging onto a
    // least-squares manifold when the linear system itself is inconsistent.
    // The history records the raw gap (the distance between the two
    // projection points), which is the monotonically settling quantity.
    const double gap = (x - y).norm();
    const double dist = std::max(gap, sys.residual(y));
    res.distance_history.push_back(gap);
    res.iterations = it + 1;
    res.distance = dist;
    if (dist < params.eps_feas) break;
  }

  if (res.distance < params.eps_feas) {
    CMatrix j = detail::unpack_choi(y, n);
    j = (j + j.adjoint()) / 2.0;
    res.status = FeasibilityStatus::Feasible;
    res.degrading_choi = ChoiMatrix{j, {de, db}};
  } else {
    res.status = FeasibilityStatus::Undetermined;
  }
  return res;
}

struct SymmetricExtension {
  Channel m12;       // A -> B1 B2, output dims (d_out, d_out)
  std::string source;
  Channel degrader;  // E -> B
};

// M12(rho) = (I_B (x) D)(V rho V^dag); both marginals reproduce the channel.
inline SymmetricExtension build_symmetric_extension(const Channel& ch, const Channel& degrader,
                                                    double tol = 1e-6) {
  const int de = static_cast<int>(ch.kraus.size());
  require(degrader.dim_in == de && degrader.dim_out == ch.dim_out,
          "build_symmetric_extension: degrader dimensions mismatch");
  const SuperOperator lhs = compose(superoperator(degrader), superoperator(complementary(ch)));
  const double resid = (lhs.mat - superoperator(ch).mat).norm();
  if (resid > tol)
    throw std::invalid_argument("build_symmetric_extension: degrading identity violated, residual " +
                                std::to_string(resid));
  Stinespring st = stinespring(ch);
  const int db = ch.dim_out;
  Channel m12;
  m12.dim_in = ch.dim_in;
  m12.dim_out = db * db;
  CMatrix id_b = CMatrix::Identity(db, db);
  for (const auto& dk : degrader.kraus) m12.kraus.push_back(kron(id_b, dk) * st.isometry);
  return {std::move(m12), ch.name, degrader};
}

struct RangeDecomposition {
  CMatrix in_range;   // psi-tilde, Hilbert-Schmidt projection onto range(M)
  CMatrix complement; // sigma = psi - psi-tilde
  CMatrix preimage;   // M^{-1}(psi-tilde) via pseudo-inverse of the superoperator
};

namespace detail {

struct RangeOps {
  CMatrix projector;  // onto column space of S_M
  CMatrix pinv;       // pseudo-inverse of S_M
};

inline RangeOps range_ops(const Channel& ch, double cutoff_rel = 1e-10) {
  const SuperOperator s = superoperator(ch);
  Eigen::JacobiSVD<CMatrix> svd(s.mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = cutoff_rel * sv(0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  CMatrix u = svd.matrixU().leftCols(rank);
  CMatrix v = svd.matrixV().leftCols(rank);
  Eigen::VectorXd inv = sv.head(rank).cwiseInverse();
  return {u * u.adjoint(), v * inv.asDiagonal() * u.adjoint()};
}

}  // namespace detail

inline RangeDecomposition range_decompose(const CMatrix& psi, const Channel& ch) {
  require(psi.rows() == ch.dim_out && psi.cols() == ch.dim_out,
          "range_decompose: operator dimension mismatch");
  detail::RangeOps ops = detail::range_ops(ch);
  CVector v = vec(psi);
  CVector vt = ops.projector * v;
  CMatrix tilde = unvec(vt, ch.dim_out, ch.dim_out);
  CMatrix pre = unvec(ops.pinv * vt, ch.dim_in, ch.dim_in);
  return {tilde, psi - tilde, pre};
}

// The cloning map R~(psi) = M12 o M^{-1}(psi-tilde) + sigma (x) sigma; nonlinear
// in psi through the complement term.
struct CloneMap {
  Channel source;          // M
  SymmetricExtension ext;  // M12 and degrader
  detail::RangeOps range;
};

inline CloneMap make_clone_map(const Channel& ch, const SymmetricExtension& ext) {
  return {ch, ext, detail::range_ops(ch)};
}

inline CMatrix clone_map_apply(const CloneMap& cm, const CMatrix& psi) {
  const int db = cm.source.dim_out;
  require(psi.rows() == db && psi.cols() == db, "clone_map_apply: dimension mismatch");
  CVector v = vec(psi);
  CVector vt = cm.range.projector * v;
  CMatrix tilde = unvec(vt, db, db);
  CMatrix sigma = psi - tilde;
  CMatrix pre = unvec(cm.range.pinv * vt, cm.source.dim_in, cm.source.dim_in);
  return cm.ext.m12(pre) + kron(sigma, sigma);
}

// Runs the feasibility solve, builds the extension from the extracted
// degrading map, and verifies the cloning marginals on sampled in-range
// states. Antidegradability is preserved under tensor products, so a single
// certificate covers the many-copy setting.
inline std::optional<ZeroCapacityCertificate> cloning_certificate(
    const Channel& ch, const AntidegParams& params = {}, std::uint64_t seed = 1234,
    int sample_count = 20) {
  FeasibilityResult fr = antidegradability_feasibility(ch, params);
  if (fr.status != FeasibilityStatus::Feasible) return std::nullopt;
  Channel degrader = choi_to_kraus(*fr.degrading_choi, 1e-9);
  degrader.name = "degrader";
  SymmetricExtension ext = build_symmetric_extension(ch, degrader, params.eps_marg);
  CloneMap cm = make_clone_map(ch, ext);

  std::mt19937_64 rng(seed);
  const int db = ch.dim_out;
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    CMatrix psi = ch(random_state(ch.dim_in, rng).mat);
    CMatrix out = clone_map_apply(cm, psi);
    CMatrix tr1 = partial_trace(out, {db, db}, 1);
    CMatrix tr2 = partial_trace(out, {db, db}, 2);
    worst = std::max({worst, (tr1 - psi).norm(), (tr2 - psi).norm()});
  }

  ZeroCapacityCertificate cert;
  cert.reason = IncapacityReason::Cloning;
  cert.channel_id = ch.name;
  cert.feasibility_distance = fr.distance;
  cert.verification_residual = worst;
  cert.detail = "antidegradable: degrading map found; clone marginal residual " +
                std::to_string(worst);
  return cert;
}

}  // namespace incapax
