#include <catch_amalgamated.hpp>

#include "incapax/antideg.hpp"
#include "incapax/zoo.hpp"

using namespace incapax;

namespace {

// No meaningful increase across any 100-iteration window of the Dykstra gap
// sequence. Infeasible stalls plateau at an O(1) gap whose double-precision
// oscillation is a few 1e-12, so the threshold sits just above that noise.
void check_windowed_monotone(const std::vector<double>& hist) {
  for (size_t i = 0; i + 100 < hist.size(); ++i)
    REQUIRE(hist[i + 100] <= hist[i] + 1e-11);
}

}  // namespace

TEST_CASE("antidegradability_feasibility") {
  SECTION("erasure p=0.5 feasible, extracted degrader reproduces the channel") {
    Channel ch = zoo::erasure(2, 0.5);
    FeasibilityResult fr = antidegradability_feasibility(ch);
    REQUIRE(fr.status == FeasibilityStatus::Feasible);
    REQUIRE(fr.distance < 1e-7);
    REQUIRE(fr.degrading_choi.has_value());
    Channel d = choi_to_kraus(*fr.degrading_choi, 1e-9);
    REQUIRE(is_cptp(superoperator(d)).cp);
    REQUIRE(d.is_trace_preserving(1e-6));
    SuperOperator lhs = compose(superoperator(d), superoperator(complementary(ch)));
    REQUIRE((lhs.mat - superoperator(ch).mat).norm() < 1e-6);
    check_windowed_monotone(fr.distance_history);
  }

  SECTION("erasure p=0.3 undetermined with distance above 1e-3") {
    // Erasure at p < 1/2 has quantum capacity 1-2p > 0, so no degrading map
    // exists; alternating projections cannot certify emptiness, so the verdict
    // stays Undetermined with a large terminal distance.
    FeasibilityResult fr = antidegradability_feasibility(zoo::erasure(2, 0.3));
    REQUIRE(fr.status == FeasibilityStatus::Undetermined);
    REQUIRE(fr.distance > 1e-3);
    REQUIRE(fr.iterations == AntidegParams{}.max_iter);
    check_windowed_monotone(fr.distance_history);
  }

  SECTION("amplitude damping gamma=0.6 feasible, gamma=0.4 not") {
    FeasibilityResult hi = antidegradability_feasibility(zoo::amplitude_damping(0.6));
    REQUIRE(hi.status == FeasibilityStatus::Feasible);
    FeasibilityResult lo = antidegradability_feasibility(zoo::amplitude_damping(0.4));
    REQUIRE(lo.status == FeasibilityStatus::Undetermined);
    REQUIRE(lo.distance > 1e-3);
    check_windowed_monotone(lo.distance_history);
  }

  SECTION("erasure family sweep is monotone in the verdict") {
    REQUIRE(antidegradability_feasibility(zoo::erasure(2, 0.3)).status !=
            FeasibilityStatus::Feasible);
    REQUIRE(antidegradability_feasibility(zoo::erasure(2, 0.5)).status ==
            FeasibilityStatus::Feasible);
    REQUIRE(antidegradability_feasibility(zoo::erasure(2, 0.7)).status ==
            FeasibilityStatus::Feasible);
  }

  SECTION("identity channel is not found antidegradable") {
    FeasibilityResult fr = antidegradability_feasibility(zoo::identity(2));
    REQUIRE(fr.status == FeasibilityStatus::Undetermined);
    REQUIRE(fr.distance > 1e-3);
  }
}

TEST_CASE("build_symmetric_extension") {
  std::mt19937_64 rng(50);
  for (const Channel& ch : {zoo::erasure(2, 0.5), zoo::amplitude_damping(0.6)}) {
    FeasibilityResult fr = antidegradability_feasibility(ch);
    REQUIRE(fr.status == FeasibilityStatus::Feasible);
    Channel degrader = choi_to_kraus(*fr.degrading_choi, 1e-9);
    SymmetricExtension ext = build_symmetric_extension(ch, degrader);
    const int db = ch.dim_out;
    for (int s = 0; s < 50; ++s) {
      CMatrix rho = random_state(ch.dim_in, rng).mat;
      CMatrix big = ext.m12(rho);
      REQUIRE((partial_trace(big, {db, db}, 2) - ch(rho)).norm() < 1e-6);
      REQUIRE((partial_trace(big, {db, db}, 1) - ch(rho)).norm() < 1e-6);
    }
  }

  SECTION("guard: degrading identity violated") {
    // A unitary channel has a constant (scalar-environment) complement; no
    // degrader can rebuild the channel from it.
    Channel ch = zoo::identity(2);
    Channel fake;
    fake.dim_in = 1;
    fake.dim_out = 2;
    CMatrix k(2, 1);
    k << 1.0, 0.0;
    fake.kraus.push_back(k);
    REQUIRE_THROWS_AS(build_symmetric_extension(ch, fake), std::invalid_argument);
  }
  SECTION("guard: dimension mismatch") {
    Channel ch = zoo::erasure(2, 0.5);
    REQUIRE_THROWS_AS(build_symmetric_extension(ch, zoo::identity(2)), std::invalid_argument);
  }
}

TEST_CASE("range_decompose") {
  std::mt19937_64 rng(51);
  SECTION("in-range operators have zero complement and a true preimage") {
    Channel ch = zoo::erasure(2, 0.5);
    CMatrix psi = ch(random_state(2, rng).mat);
    RangeDecomposition rd = range_decompose(psi, ch);
    REQUIRE(rd.complement.norm() < 1e-9);
    REQUIRE((ch(rd.preimage) - psi).norm() < 1e-9);
  }
  SECTION("completely depolarizing: range is span{I}") {
    Channel ch = zoo::completely_depolarizing(2);
    CMatrix psi = random_hermitian(2, rng);
    RangeDecomposition rd = range_decompose(psi, ch);
    CMatrix expect = (psi.trace() / 2.0) * CMatrix::Identity(2, 2);
    REQUIRE((rd.in_range - expect).norm() < 1e-10);
  }
  SECTION("orthogonality of the split") {
    for (int t = 0; t < 5; ++t) {
      Channel ch = random_channel(2, 3, 2, rng);
      CMatrix psi = random_gaussian(3, 3, rng);
      RangeDecomposition rd = range_decompose(psi, ch);
      REQUIRE((rd.in_range + rd.complement - psi).norm() < 1e-12);
      Complex ip = (rd.in_range.conjugate().cwiseProduct(rd.complement)).sum();
      REQUIRE(std::abs(ip) < 1e-10);
    }
  }
}

TEST_CASE("clone_map_apply") {
  std::mt19937_64 rng(52);
  Channel ch = zoo::erasure(2, 0.5);
  FeasibilityResult fr = antidegradability_feasibility(ch);
  REQUIRE(fr.status == FeasibilityStatus::Feasible);
  Channel degrader = choi_to_kraus(*fr.degrading_choi, 1e-9);
  SymmetricExtension ext = build_symmetric_extension(ch, degrader);
  CloneMap cm = make_clone_map(ch, ext);
  const int db = ch.dim_out;

  SECTION("both marginals clone in-range states") {
    for (int s = 0; s < 20; ++s) {
      CMatrix psi = ch(random_state(2, rng).mat);
      CMatrix out = clone_map_apply(cm, psi);
      REQUIRE((partial_trace(out, {db, db}, 1) - psi).norm() < 1e-6);
      REQUIRE((partial_trace(out, {db, db}, 2) - psi).norm() < 1e-6);
    }
  }

  SECTION("clone of the channel equals the symmetric extension") {
    for (int s = 0; s < 10; ++s) {
      CMatrix rho = random_state(2, rng).mat;
      REQUIRE((clone_map_apply(cm, ch(rho)) - ext.m12(rho)).norm() < 1e-6);
    }
  }

  SECTION("out-of-range marginals carry the complement term verbatim") {
    // For any psi the formula's marginals are psi-tilde + Tr(sigma) sigma,
    // equal to psi only when sigma = 0 or Tr(sigma) = 1.
    CMatrix psi = random_hermitian(db, rng);
    RangeDecomposition rd = range_decompose(psi, ch);
    REQUIRE(rd.complement.norm() > 1e-3);  // genuinely out of range
    CMatrix out = clone_map_apply(cm, psi);
    CMatrix expect = rd.in_range + rd.complement.trace() * rd.complement;
    REQUIRE((partial_trace(out, {db, db}, 1) - expect).norm() < 1e-6);
    REQUIRE((partial_trace(out, {db, db}, 2) - expect).norm() < 1e-6);
  }

  SECTION("decoder covariance under sampled unitaries") {
    // Rotating the channel output by U rotates the cloner by U (x) U: the
    // conjugated clone map still clones the rotated in-range states.
    for (int t = 0; t < 5; ++t) {
      CMatrix u = random_unitary(db, rng);
      CMatrix psi = ch(random_state(2, rng).mat);
      CMatrix psi_u = u * psi * u.adjoint();
      CMatrix uu = kron(u, u);
      CMatrix out_u = uu * clone_map_apply(cm, u.adjoint() * psi_u * u) * uu.adjoint();
      REQUIRE((partial_trace(out_u, {db, db}, 1) - psi_u).norm() < 1e-6);
      REQUIRE((partial_trace(out_u, {db, db}, 2) - psi_u).norm() < 1e-6);
    }
  }
}

TEST_CASE("cloning_certificate") {
  SECTION("erasure p=0.5 certifies with small residuals") {
    auto cert = cloning_certificate(zoo::erasure(2, 0.5));
    REQUIRE(cert.has_value());
    REQUIRE(cert->reason == IncapacityReason::Cloning);
    REQUIRE(cert->verification_residual < 1e-6);
    REQUIRE(cert->feasibility_distance < 1e-7);
  }
  SECTION("erasure p=0.3 yields none") {
    REQUIRE_FALSE(cloning_certificate(zoo::erasure(2, 0.3)).has_value());
  }
  SECTION("completely depolarizing certifies trivially") {
    auto cert = cloning_certificate(zoo::completely_depolarizing(2));
    REQUIRE(cert.has_value());
    REQUIRE(cert->verification_residual < 1e-6);
  }
}
