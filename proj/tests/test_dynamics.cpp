#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qswarm/dynamics.hpp"
#include "random.hpp"

using namespace qswarm;

namespace {

std::vector<std::pair<oracle::Mat, double>> to_oracle(const std::vector<Dissipator> &d) {
    std::vector<std::pair<oracle::Mat, double>> out;
    for (const auto &x : d) out.emplace_back(oracle::from(x.op), x.rate);
    return out;
}

}  // namespace

TEST(Hamiltonian, SigmaZOnChosenQubit) {
    const auto h = hamiltonian_sigma_z(2.0);
    EXPECT_EQ(h.matrix, (ComplexMatrix{{1, 0}, {0, -1}}));
    const auto h2 = hamiltonian_sigma_z(2.0, 2, 1);
    EXPECT_EQ(h2.matrix, ComplexMatrix::diagonal({1.0, -1.0, 1.0, -1.0}));
    EXPECT_THROW(hamiltonian_sigma_z(1.0, 2, 2), ValidationError);
}

TEST(Dissipator, RejectsNegativeRate) {
    EXPECT_THROW(Dissipator(ComplexMatrix::identity(2), -1.0), ValidationError);
}

TEST(Lindblad, MatchesOracleOnRandomInputs) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const auto rho = testrand::density(rng, 4);
        const Hamiltonian h{testrand::hermitian(rng, 4), 1.0};
        const std::vector<Dissipator> d{Dissipator(testrand::gaussian(rng, 4), 0.3),
                                        Dissipator(testrand::gaussian(rng, 4), 1.2)};
        const auto mine = lindblad_generator(rho, h, d);
        EXPECT_LE(oracle::max_diff(oracle::from(mine), oracle::lindblad(oracle::from(rho), oracle::from(h.matrix), to_oracle(d))),
                  1e-12);
    }
}

TEST(Lindblad, TermsOnNonDensityInput) {
    const ComplexMatrix rho{{0.25, 0}, {0.25, 0.5}};
    const std::vector<Dissipator> d{Dissipator(ComplexMatrix{{1, 0}, {0, 0}}, 1.0)};
    const auto t = lindblad_terms(rho, hamiltonian_sigma_z(1.0), d);
    EXPECT_LE(max_abs_diff(t.jump, ComplexMatrix{{0.25, 0}, {0, 0}}), 1e-15);
    EXPECT_LE(max_abs_diff(t.left, ComplexMatrix{{-0.125, 0}, {0, 0}}), 1e-15);
    EXPECT_LE(max_abs_diff(t.right, ComplexMatrix{{-0.125, 0}, {-0.125, 0}}), 1e-15);
    EXPECT_LE(max_abs_diff(t.hamiltonian, ComplexMatrix{{0, 0}, {cplx(0, 0.25), 0}}), 1e-15);
    EXPECT_LE(max_abs_diff(t.total(), t.hamiltonian + t.jump + t.left + t.right), 0.0);
}

TEST(Lindblad, GeneratorIsTraceless) {
    std::mt19937_64 rng(32);
    const DensityMatrix rho(testrand::density(rng, 4));
    const Hamiltonian h{testrand::hermitian(rng, 4), 1.0};
    // The jump term L^T rho L^* balances the L^dag L anticommutator in the
    // trace only when L^* L^T = L^dag L, e.g. for real symmetric L.
    ComplexMatrix l = testrand::hermitian(rng, 4);
    for (auto &z : l.data()) z = z.real();
    const std::vector<Dissipator> d{Dissipator(l, 0.7)};
    EXPECT_NEAR(std::abs(lindblad_generator(rho, h, d).trace()), 0.0, 1e-12);
}

TEST(Lindblad, DimensionMismatch) {
    EXPECT_THROW(lindblad_generator(DensityMatrix::maximally_mixed(4), hamiltonian_sigma_z(1.0), {}), DimensionError);
}

TEST(Stability, DiagonalChangeUnderSigmaZVanishes) {
    const DensityMatrix a(ComplexMatrix{{0.9, 0.2}, {0.2, 0.1}}), b(ComplexMatrix{{0.1, 0.2}, {0.2, 0.9}});
    const auto r = stability_indicator(a, b, hamiltonian_sigma_z(1.0), {});
    EXPECT_NEAR(std::abs(r.value), 0.0, 1e-15);
    EXPECT_EQ(r.verdict, StabilityVerdict::Marginal);
}

TEST(Stability, MatchesOracleTrace) {
    std::mt19937_64 rng(33);
    const DensityMatrix a(testrand::density(rng, 2)), b(testrand::density(rng, 2));
    const auto h = hamiltonian_sigma_z(0.8);
    const auto r = stability_indicator(a, b, h, {});
    const auto gen = oracle::lindblad(oracle::from(b.matrix()), oracle::from(h.matrix), {});
    const auto ref = oracle::trace(oracle::mul(gen, oracle::add(oracle::from(b.matrix()), oracle::from(a.matrix()), -1.0)));
    EXPECT_NEAR(std::abs(r.value - ref), 0.0, 1e-14);
    const StabilityVerdict expect = std::abs(ref.imag()) <= 1e-12 ? StabilityVerdict::Marginal
                                    : ref.imag() / 0.8 < 0     ? StabilityVerdict::Stable
                                                               : StabilityVerdict::Unstable;
    EXPECT_EQ(r.verdict, expect);
}

TEST(Evolution, UnitaryFromHamiltonianMatchesOracle) {
    std::mt19937_64 rng(34);
    const Hamiltonian h{testrand::hermitian(rng, 4), 1.0};
    const auto u = unitary_from_hamiltonian(h, 2.5);
    EXPECT_LE(u.unitarity_defect, 1e-10);
    EXPECT_FALSE(u.non_unitary);
    EXPECT_LE(oracle::max_diff(oracle::from(u.matrix), oracle::expm(oracle::from(h.matrix * cplx(0, -2.5)))), 1e-9);
}

TEST(Evolution, ConjugateKeepsDensityLeftMayNot) {
    std::mt19937_64 rng(35);
    const DensityMatrix rho(testrand::density(rng, 4));
    const auto u = unitary_from_hamiltonian({testrand::hermitian(rng, 4), 1.0}, 1.0);
    const auto c = evolve_unitary(rho, u, ApplicationMode::Conjugate);
    EXPECT_TRUE(c.is_density);
    EXPECT_NEAR(purity(DensityMatrix(hermitian_part(c.matrix))), purity(rho), 1e-12);
    const auto l = evolve_unitary(rho, u, ApplicationMode::Left);
    EXPECT_FALSE(l.is_density);
    EXPECT_GT(l.hermiticity_defect, 1e-6);
}

TEST(Evolution, NonUnitaryOperatorIsFlagged) {
    const EvolutionOperator o(ComplexMatrix{{1, 1}, {0, 1}});
    EXPECT_TRUE(o.non_unitary);
    EXPECT_GT(o.unitarity_defect, 0.5);
}

TEST(Recovery, IdenticalDiagonalSnapshotsGiveIdentity) {
    const DensityMatrix rho(ComplexMatrix::diagonal({0.7, 0.3, 0.0, 0.0}));
    const auto p = recover_evolution_paper(rho, rho);
    EXPECT_LE(max_abs_diff(p.op.matrix, ComplexMatrix::identity(4)), 1e-12);
    const auto q = recover_evolution_procrustes(rho, rho);
    EXPECT_NEAR(q.residual_left, 0.0, 1e-12);
    EXPECT_NEAR(q.residual_conjugate, 0.0, 1e-12);
}

TEST(Recovery, SvdFormulaOperatorIsUnitary) {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 10; ++t) {
        const DensityMatrix a(testrand::density(rng, 4)), b(testrand::density(rng, 4));
        EXPECT_LE(recover_evolution_paper(a, b).op.unitarity_defect, 1e-10);
    }
}

TEST(Recovery, ProcrustesIsOptimalOverRandomUnitaries) {
    std::mt19937_64 rng(37);
    const DensityMatrix a(testrand::density(rng, 4)), b(testrand::density(rng, 4));
    const auto q = recover_evolution_procrustes(a, b);
    EXPECT_LE(q.op.unitarity_defect, 1e-10);
    EXPECT_LE(q.residual_left, recover_evolution_paper(a, b).residual_left + 1e-12);
    for (int t = 0; t < 200; ++t) {
        const auto u = unitary_from_hamiltonian({testrand::hermitian(rng, 4), 1.0}, 1.0);
        EXPECT_LE(q.residual_left, (u.matrix * a.matrix() - b.matrix()).frobenius_norm() + 1e-12);
    }
}

TEST(Recovery, ProcrustesFindsExactRotation) {
    std::mt19937_64 rng(38);
    const DensityMatrix a(testrand::density(rng, 4));
    const auto u = unitary_from_hamiltonian({testrand::hermitian(rng, 4), 1.0}, 0.7);
    const DensityMatrix b(hermitian_part(u.matrix * a.matrix() * u.matrix.adjoint()));
    const auto q = recover_evolution_procrustes(a, b);
    EXPECT_LE(q.op.unitarity_defect, 1e-10);
    EXPECT_LE(q.residual_left, recover_evolution_paper(a, b).residual_left + 1e-12);
}

TEST(Integrator, PureDephasingKeepsPopulations) {
    const DensityMatrix rho(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
    const std::vector<Dissipator> d{Dissipator(ComplexMatrix{{1, 0}, {0, -1}}, 0.5)};
    const auto out = integrate_lindblad(rho, hamiltonian_sigma_z(0.0), d, 1.0, 1e-4);
    EXPECT_NEAR(out(0, 0).real(), 0.5, 1e-9);
    EXPECT_NEAR(std::abs(out(0, 1)), 0.5 * std::exp(-1.0), 1e-3);
}
