#include <doctest.h>

#include <array>
#include <cmath>

#include "nongauss/errors.hpp"
#include "nongauss/fock.hpp"
#include "nongauss/zoo.hpp"
#include "oracles.hpp"

using namespace nongauss;

namespace {

DensityMatrix dm(const FockStateVector& v) { return DensityMatrix(v); }

double brute_purity(const Eigen::MatrixXcd& m) { return m.cwiseAbs2().sum(); }

}  // namespace

TEST_CASE("index convention is little-endian mixed radix") {
    for (std::size_t i = 0; i < 27; ++i) {
        const PhotonNumbers n = decode_index(i, 3, 3);
        CHECK(n[0] == i % 3);
        CHECK(n[1] == (i / 3) % 3);
        CHECK(n[2] == i / 9);
        CHECK(encode_index(n, 3, 3) == i);
    }
    const std::array<std::size_t, 2> p{1, 0};
    const auto v = FockStateVector::basis(2, 4, p);
    CHECK(std::abs(v[1] - 1.0) < 1e-15);
}

TEST_CASE("tensor products") {
    const DensityMatrix vac2 = tensor(dm(vacuum(1, 3)), dm(vacuum(1, 3)));
    CHECK(vac2.modes() == 2);
    CHECK(std::abs(vac2.matrix().trace().real() - 1.0) < 1e-14);
    CHECK(std::abs(vac2(0, 0) - 1.0) < 1e-14);

    const DensityMatrix t = tensor(dm(fock(1, 4)), thermal(0.0, 4));
    const std::size_t idx = encode_index({1, 0}, 2, 4);
    CHECK(std::abs(t(idx, idx) - 1.0) < 1e-14);
    CHECK(std::abs(t.matrix().trace().real() - 1.0) < 1e-14);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DensityMatrix a = random_density_matrix(1, 3, 1 + seed % 3, seed);
        const DensityMatrix b = random_density_matrix(1, 3, 1 + (seed + 1) % 3, 1000 + seed);
        const DensityMatrix ab = tensor(a, b);
        CHECK(std::abs(brute_purity(ab.matrix()) - brute_purity(a.matrix()) * brute_purity(b.matrix())) < 1e-12);
        CHECK(std::abs(purity(ab) - purity(a) * purity(b)) < 1e-12);
    }
    CHECK_THROWS_AS(tensor(dm(vacuum(1, 3)), dm(vacuum(1, 4))), ArgumentError);
    CHECK_THROWS_AS(hilbert_dimension(5, 2, 1 << 20), ArgumentError);
    CHECK_THROWS_AS(tensor(random_density_matrix(2, 9, 1, 1), random_density_matrix(2, 9, 1, 2)), ResourceError);
}

TEST_CASE("partial trace") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DensityMatrix a = random_density_matrix(1, 4, 2, seed);
        const DensityMatrix b = random_density_matrix(1, 4, 3, 50 + seed);
        const DensityMatrix ab = tensor(a, b);
        const std::array<std::size_t, 1> ka{0}, kb{1};
        CHECK((partial_trace(ab, ka).matrix() - a.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((partial_trace(ab, kb).matrix() - b.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
    }

    // Twin beam with psi_n proportional to x^n: the marginal is diagonal with p_n ~ x^{2n}.
    const std::size_t d = 30;
    const double x = 0.4;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
    for (std::size_t n = 0; n < d; ++n) v(n + n * d) = std::pow(x, n);
    const auto twin = FockStateVector::normalized(2, d, v);
    const std::array<std::size_t, 1> keep{0};
    const DensityMatrix red = partial_trace(DensityMatrix(twin), keep);
    const DensityMatrix red_v = partial_trace(twin, keep);
    double z = 0.0;
    for (std::size_t n = 0; n < d; ++n) z += std::pow(x, 2.0 * n);
    for (std::size_t n = 0; n < d; ++n) {
        CHECK(std::abs(red(n, n).real() - std::pow(x, 2.0 * n) / z) < 1e-14);
        CHECK(std::abs(red_v(n, n).real() - std::pow(x, 2.0 * n) / z) < 1e-14);
    }
    CHECK(red.is_diagonal());

    const DensityMatrix vac2(vacuum(2, 3));
    const std::array<std::size_t, 1> kb{1};
    CHECK(std::abs(partial_trace(vac2, kb)(0, 0) - 1.0) < 1e-14);
    CHECK_THROWS_AS(partial_trace(vac2, std::span<const std::size_t>{}), ArgumentError);
}

TEST_CASE("partial transpose") {
    const DensityMatrix prod = tensor(thermal(0.3, 20), dm(coherent(0.0, 20)));
    CHECK((partial_transpose(prod, 1) - prod.matrix()).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DensityMatrix b(FockStateVector(2, 2, bell));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(partial_transpose(b, 1));
    CHECK(std::abs(es.eigenvalues()(0) + 0.5) < 1e-14);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DensityMatrix r = random_density_matrix(2, 3, 4, seed);
        const Eigen::MatrixXcd pt = partial_transpose(r, seed % 2);
        CHECK(std::abs(pt.trace() - 1.0) < 1e-12);
        CHECK((pt - pt.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
    CHECK_THROWS_AS(partial_transpose(thermal(0.1, 12), 0), UnsupportedError);
}

TEST_CASE("purity, overlap and entropy") {
    CHECK(std::abs(purity(dm(fock(1, 3))) - 1.0) < 1e-14);
    CHECK(std::abs(purity(dm(vacuum(1, 3))) - 1.0) < 1e-14);
    const DensityMatrix th = thermal(1.0, 60);
    CHECK(std::abs(purity(th) - 1.0 / 3.0) < 1e-10);
    CHECK(std::abs(overlap(th, th) - purity(th)) < 1e-14);
    CHECK(std::abs(overlap(embed(dm(fock(1, 3)), 60), th) - 0.25) < 1e-10);
    CHECK(std::abs(overlap(dm(fock(0, 3)), dm(fock(1, 3)))) < 1e-15);
    CHECK(std::abs(von_neumann_entropy(th) - 2.0 * std::log(2.0)) < 1e-8);
    CHECK(std::abs(von_neumann_entropy(dm(coherent(cplx(0.5, 0.2), 30)))) < 1e-10);
    const std::array<double, 2> half{0.5, 0.5};
    CHECK(std::abs(von_neumann_entropy(diagonal_mixture(half, 2)) - std::log(2.0)) < 1e-14);
    CHECK(std::abs(von_neumann_entropy(diagonal_mixture(half, 2), LogBase::Two) - 1.0) < 1e-14);
    CHECK_THROWS_AS(overlap(th, dm(fock(0, 3))), ArgumentError);

    // Unitary invariance and overlap symmetry.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DensityMatrix r = random_density_matrix(1, 6, 1 + seed % 6, seed);
        const Eigen::MatrixXcd u = oracle::random_unitary(6, 77 + seed);
        const DensityMatrix rr(1, 6, u * r.matrix() * u.adjoint());
        CHECK(std::abs(purity(rr) - purity(r)) < 1e-10);
        CHECK(std::abs(von_neumann_entropy(rr) - von_neumann_entropy(r)) < 1e-10);
        CHECK(std::abs(von_neumann_entropy(r) - oracle::entropy_of(r.matrix())) < 1e-10);
        CHECK(std::abs(overlap(r, rr) - overlap(rr, r)) < 1e-12);
    }
}

TEST_CASE("negative eigenvalues are clamped or refused") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 1.0 + 5e-11;
    m(1, 1) = -5e-11;
    const DensityMatrix slightly(1, 2, m);
    const Spectrum s = clamped_spectrum(slightly);
    CHECK(s.eigenvalues.minCoeff() == 0.0);
    CHECK(std::abs(s.clamped_mass - 5e-11) < 1e-20);

    m(0, 0) = 1.1;
    m(1, 1) = -0.1;
    const DensityMatrix bad(1, 2, m);
    CHECK_THROWS_AS(von_neumann_entropy(bad), NumericalError);
    CHECK_THROWS_AS(bad.validate_positive(), NumericalError);
}

TEST_CASE("container validation") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix(1, 2, m), NumericalError);  // trace 2
    m(0, 1) = 0.1;
    m /= 2.0;
    CHECK_THROWS_AS(DensityMatrix(1, 2, m), NumericalError);  // not Hermitian
    CHECK_THROWS_AS(FockStateVector(1, 3, Eigen::VectorXcd::Ones(3)), NumericalError);
    CHECK_THROWS_AS(FockStateVector(1, 3, Eigen::VectorXcd::Ones(2)), ArgumentError);
    CHECK_THROWS_AS(FockStateVector::normalized(1, 3, Eigen::VectorXcd::Zero(3)), NumericalError);
}

TEST_CASE("random density matrices") {
    const DensityMatrix pure = random_density_matrix(1, 5, 1, 9);
    CHECK(std::abs(purity(pure) - 1.0) < 1e-12);
    const DensityMatrix a = random_density_matrix(2, 3, 5, 42);
    const DensityMatrix b = random_density_matrix(2, 3, 5, 42);
    CHECK(a.matrix() == b.matrix());
    a.validate_positive();
    CHECK_THROWS_AS(random_density_matrix(1, 3, 4, 1), ArgumentError);
    CHECK_THROWS_AS(random_density_matrix(1, 3, 0, 1), ArgumentError);

    double previous = 2.0;
    for (std::size_t d : {2u, 4u, 8u}) {
        double mean = 0.0;
        for (std::uint64_t s = 0; s < 1000; ++s) mean += purity(random_density_matrix(1, d, d, s + 7 * d));
        mean /= 1000.0;
        // Full-rank Ginibre states have mean purity 2d/(d^2+1).
        CHECK(std::abs(mean - 2.0 * d / (d * d + 1.0)) < 0.02);
        CHECK(mean < previous);
        previous = mean;
    }
}

TEST_CASE("mean photon number and embedding") {
    const DensityMatrix t = tensor(dm(fock(2, 4)), dm(fock(1, 4)));
    CHECK(std::abs(mean_photon_number(t, 0) - 2.0) < 1e-14);
    CHECK(std::abs(mean_photon_number(t, 1) - 1.0) < 1e-14);
    const auto e = embed(fock(2, 4), 9);
    CHECK(e.cutoff() == 9);
    CHECK(std::abs(mean_photon_number(e, 0) - 2.0) < 1e-14);
    CHECK_THROWS_AS(embed(fock(2, 4), 3), ArgumentError);
}
