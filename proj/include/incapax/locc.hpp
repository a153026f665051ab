#pragma once

#include "incapax/forbidden.hpp"

namespace incapax {

// Heisenberg-Weyl family sigma_(a,b) = X^a Z^b, X the cyclic shift and
// Z = diag(omega^k); no extra phase.
struct PauliFamily {
  int dim = 0;
  std::vector<CMatrix> operators;  // d^2 entries, index u = a*d + b
};

inline PauliFamily gen_paulis(int d) {
  require(d >= 2, "gen_paulis: d must be >= 2");
  CMatrix x = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  CMatrix z = CMatrix::Zero(d, d);
  const double theta = 2.0 * M_PI / d;
  for (int k = 0; k < d; ++k) z(k, k) = Complex(std::cos(theta * k), std::sin(theta * k));

  PauliFamily fam;
  fam.dim = d;
  CMatrix xa = CMatrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    CMatrix op = xa;
    for (int b = 0; b < d; ++b) {
      fam.operators.push_back(op);
      op = op * z;
    }
    xa = x * xa;
  }
  return fam;
}

// Product-Kraus instrument A_i (x) B_i. Only the product structure is used;
// no LOCC round structure is validated.
struct LoccProtocol {
  std::vector<std::pair<CMatrix, CMatrix>> kraus_pairs;  // A_i: a_in x a_out, B_i: b_out x b_in
  int a_in = 0, a_out = 0, b_in = 0, b_out = 0;

  double completeness_residual() const {
    const Eigen::Index n = static_cast<Eigen::Index>(a_out) * b_in;
    CMatrix acc = CMatrix::Zero(n, n);
    for (const auto& [a, b] : kraus_pairs) {
      CMatrix k = kron(a, b);
      acc += k.adjoint() * k;
    }
    return (acc - CMatrix::Identity(n, n)).norm();
  }
};

// The standard teleportation-correction protocol A_u = sigma_u^*/d, B_u = sigma_u;
// distills perfectly through the identity channel's Choi matrix.
inline LoccProtocol teleportation_protocol(int d) {
  PauliFamily fam = gen_paulis(d);
  LoccProtocol proto;
  proto.a_in = proto.a_out = proto.b_in = proto.b_out = d;
  for (const auto& s : fam.operators)
    proto.kraus_pairs.push_back({s.conjugate() / double(d), s});
  return proto;
}

// Random instrument of unitary pairs with random weights; exactly normalized.
inline LoccProtocol random_unitary_pair_protocol(int d, int pairs, std::mt19937_64& rng) {
  require(pairs >= 1, "random_unitary_pair_protocol: need at least one pair");
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> w(pairs);
  double tot = 0;
  for (auto& wi : w) tot += (wi = unif(rng));
  LoccProtocol proto;
  proto.a_in = proto.a_out = proto.b_in = proto.b_out = d;
  for (int i = 0; i < pairs; ++i)
    proto.kraus_pairs.push_back(
        {std::sqrt(w[i] / tot) * random_unitary(d, rng), random_unitary(d, rng)});
  return proto;
}

// Eq-for-eq evaluation of the teleportation-through-Choi preparation:
//   (d_out/d_in) sum_i (1/d_in^2) sum_u B_i N(A_i^T sigma_u psi sigma_u^dag A_i^*) B_i^dag (x) |u><u|.
// The classical register has dimension a_in^2; the prefactor is taken verbatim
// from the channel dimensions, so the output trace is reported by callers
// rather than renormalized here.
inline CMatrix teleport_through_choi(const Channel& ch, const LoccProtocol& proto,
                                     const CMatrix& psi) {
  require(proto.a_out == ch.dim_in, "teleport_through_choi: A-side output must feed the channel");
  require(proto.b_in == ch.dim_out, "teleport_through_choi: B-side input must match channel output");
  require(psi.rows() == proto.a_in && psi.cols() == proto.a_in,
          "teleport_through_choi: state dimension mismatch");
  PauliFamily fam = gen_paulis(proto.a_in);
  const int nu = static_cast<int>(fam.operators.size());
  const int dq = proto.b_out;
  const double pref = (double(ch.dim_out) / ch.dim_in) / (double(ch.dim_in) * ch.dim_in);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dq) * nu, static_cast<Eigen::Index>(dq) * nu);
  for (int u = 0; u < nu; ++u) {
    const CMatrix& s = fam.operators[u];
    CMatrix branch = CMatrix::Zero(dq, dq);
    for (const auto& [a, b] : proto.kraus_pairs) {
      CMatrix fed = a.transpose() * s * psi * s.adjoint() * a.conjugate();
      branch += b * ch(fed) * b.adjoint();
    }
    for (int r = 0; r < dq; ++r)
      for (int c = 0; c < dq; ++c) out(r * nu + u, c * nu + u) = pref * branch(r, c);
  }
  return out;
}

// One evaluation of the distillation identity right-hand side
//   (d_distilled/d) sum_i B_i N(A_i^T psi A_i^*) B_i^dag.
inline CMatrix distill_once(const Channel& ch, const LoccProtocol& proto, const CMatrix& psi) {
  const double factor = double(proto.b_out) / ch.dim_in;
  CMatrix out = CMatrix::Zero(proto.b_out, proto.b_out);
  for (const auto& [a, b] : proto.kraus_pairs)
    out += b * ch(a.transpose() * psi * a.conjugate()) * b.adjoint();
  return factor * out;
}

// Max over sampled states of || psi - (2/d) sum_i B_i N(A_i^T psi A_i^*) B_i^dag ||_F.
inline double distillation_identity_residual(const Channel& ch, const LoccProtocol& proto,
                                             int samples, std::uint64_t seed) {
  require(proto.a_in == proto.b_out, "distillation_identity_residual: psi dims must match");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    CMatrix psi = (s % 2 == 0) ? random_pure_state(proto.a_in, rng).mat
                               : random_state(proto.a_in, rng).mat;
    worst = std::max(worst, (psi - distill_once(ch, proto, psi)).norm());
  }
  return worst;
}

namespace detail {

// psi -> (2/d) sum_i sigma_u^* B_i^* (T o N)(A_i^T sigma_u psi sigma_u^dag A_i^*) B_i^T sigma_u^T
inline CMatrix transpose_extraction_point(const Channel& ch, const LoccProtocol& proto,
                                          const PauliFamily& fam, int u, const CMatrix& psi) {
  const CMatrix& s = fam.operators[u];
  const double factor = double(proto.b_out) / ch.dim_in;
  CMatrix acc = CMatrix::Zero(proto.b_out, proto.b_out);
  for (const auto& [a, b] : proto.kraus_pairs) {
    CMatrix fed = a.transpose() * s * psi * s.adjoint() * a.conjugate();
    CMatrix tn = ch(fed).transpose();  // T o N
    acc += s.conjugate() * b.conjugate() * tn * b.transpose() * s.transpose();
  }
  return factor * acc;
}

}  // namespace detail

// The appendix's recipe for extracting the transpose through a distillation
// protocol, for one fixed Pauli index u, as a superoperator.
inline SuperOperator transpose_extraction_for_u(const Channel& ch, const LoccProtocol& proto,
                                                int u) {
  require(proto.a_in == proto.b_out, "transpose_extraction: psi dims must match");
  const int d = proto.a_in;
  PauliFamily fam = gen_paulis(d);
  require(u >= 0 && u < static_cast<int>(fam.operators.size()), "transpose_extraction: bad u");
  CMatrix s = CMatrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      s.col(i + static_cast<Eigen::Index>(j) * d) =
          vec(detail::transpose_extraction_point(ch, proto, fam, u, unit));
    }
  return {d, d, s};
}

// Canonical extraction map: uniform average over the Pauli index. When the
// distillation identity holds exactly this equals the transpose map T.
inline SuperOperator transpose_extraction(const Channel& ch, const LoccProtocol& proto) {
  const int d = proto.a_in;
  const int nu = d * d;
  CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (int u = 0; u < nu; ++u) acc += transpose_extraction_for_u(ch, proto, u).mat;
  return {d, d, acc / double(nu)};
}

struct NondistillabilityReport {
  PptResult ppt;
  double distillation_residual = 0.0;
  double extraction_min_choi_eig = 0.0;
  bool extraction_is_cp = false;
  std::string narrative;
};

// Quantifies the appendix's contradiction for a given channel and protocol:
// a PPT channel together with a vanishing distillation residual would make
// the extraction map both physical and equal to the transpose.
inline NondistillabilityReport nondistillability_report(const Channel& ch,
                                                        const LoccProtocol& proto,
                                                        int samples = 16,
                                                        std::uint64_t seed = 99) {
  NondistillabilityReport rep;
  rep.ppt = ppt_test(ch);
  rep.distillation_residual = distillation_identity_residual(ch, proto, samples, seed);
  SuperOperator ext = transpose_extraction(ch, proto);
  CptpCheck chk = is_cptp(ext);
  rep.extraction_min_choi_eig = chk.min_choi_eig;
  rep.extraction_is_cp = chk.cp;
  rep.narrative =
      "If the channel is PPT and the distillation residual were zero, the extraction map "
      "would be a physical implementation of the transpose; the residual therefore "
      "quantifies how far this protocol stays from distilling. Numerical evidence only, "
      "not a proof.";
  return rep;
}

}  // namespace incapax
