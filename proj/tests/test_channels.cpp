#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "nongauss/channels.hpp"
#include "nongauss/errors.hpp"
#include "nongauss/measures.hpp"
#include "nongauss/zoo.hpp"
#include "oracles.hpp"

using namespace nongauss;

namespace {

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

double alpha_lp(int l, int p, double eta) {
    return binom(p, l) * std::pow(1.0 - eta, p - l) * std::pow(eta, l);
}

// Terminating 2F1(-p, -p; 1; z).
double hyp2f1_negp(int p, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < p; ++k) {
        term *= (-p + k) * (-p + k) / ((1.0 + k) * (k + 1.0)) * z;
        sum += term;
    }
    return sum;
}

double lossy_fock_delta_A(int p, double eta) {
    const double mu = std::pow(1.0 - eta, 2 * p) * hyp2f1_negp(p, eta * eta / ((eta - 1.0) * (eta - 1.0)));
    const double pe = p * eta;
    return (mu + 1.0 / (1.0 + 2.0 * pe) - 2.0 * std::pow(1.0 + (p - 1) * eta, p) / std::pow(1.0 + pe, p + 1)) /
           (2.0 * mu);
}

double lossy_fock_delta_B(int p, double eta) {
    const double pe = p * eta;
    double s = pe * std::log((pe + 1.0) / pe) + std::log(1.0 + pe);
    for (int l = 0; l <= p; ++l) {
        const double a = alpha_lp(l, p, eta);
        if (a > 0.0) s += a * std::log(a);
    }
    return s;
}

DensityMatrix dm(const FockStateVector& v) { return DensityMatrix(v); }

}  // namespace

TEST_CASE("loss: Fock weights, endpoints and trace") {
    for (double eta : {0.0, 0.3, 0.75, 1.0}) {
        const DensityMatrix out = loss(dm(fock(2, 6)), eta);
        CHECK(out(0, 0).real() == doctest::Approx(std::pow(1.0 - eta, 2)).epsilon(1e-14));
        CHECK(out(1, 1).real() == doctest::Approx(2.0 * eta * (1.0 - eta)).epsilon(1e-14));
        CHECK(out(2, 2).real() == doctest::Approx(eta * eta).epsilon(1e-14));
        CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-12);
    }
    const DensityMatrix rho = random_density_matrix(1, 10, 3, 17);
    CHECK((loss(rho, 1.0).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(loss(rho, 0.0)(0, 0) - 1.0) < 1e-12);
    CHECK_THROWS_AS(loss(rho, 1.2), ArgumentError);
    CHECK_THROWS_AS(loss(rho, -0.1), ArgumentError);
}

TEST_CASE("loss: semigroup composition on random states") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DensityMatrix rho = random_density_matrix(1, 12, 1 + seed % 12, seed);
        const double e1 = 0.1 + 0.04 * seed;
        const double e2 = 0.95 - 0.03 * seed;
        const Eigen::MatrixXcd lhs = loss(loss(rho, e1), e2).matrix();
        const Eigen::MatrixXcd rhs = loss(rho, e1 * e2).matrix();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8);
        const Spectrum s = clamped_spectrum(loss(rho, e1));
        CHECK(s.eigenvalues.minCoeff() >= -1e-10);
    }
}

TEST_CASE("loss: lossy Fock states against the closed forms") {
    for (int p = 1; p <= 5; ++p) {
        for (double eta : {0.2, 0.5, 0.8, 0.95}) {
            const DensityMatrix out = loss(dm(fock(p, 160)), eta);
            CHECK(delta_B(out).value == doctest::Approx(lossy_fock_delta_B(p, eta)).epsilon(1e-8));
            CHECK(delta_A(out).value == doctest::Approx(lossy_fock_delta_A(p, eta)).epsilon(1e-8));
        }
    }
}

TEST_CASE("loss: lossy Fock non-Gaussianity falls with time and rises with p") {
    const std::array<int, 4> ps{1, 2, 3, 5};
    for (int p : ps) {
        double prev_a = 1.0, prev_b = 1e9;
        for (double t = 0.0; t <= 3.0 + 1e-12; t += 0.25) {
            const DensityMatrix out = loss(dm(fock(p, 120)), std::exp(-t));
            const double a = delta_A(out).value;
            const double b = delta_B(out).value;
            CHECK(a <= prev_a + 1e-12);
            CHECK(b <= prev_b + 1e-12);
            prev_a = a;
            prev_b = b;
        }
    }
    for (double t = 0.25; t <= 3.0 + 1e-12; t += 0.25) {
        for (std::size_t i = 1; i < ps.size(); ++i) {
            const double eta = std::exp(-t);
            CHECK(lossy_fock_delta_B(ps[i], eta) > lossy_fock_delta_B(ps[i - 1], eta));
            CHECK(lossy_fock_delta_A(ps[i], eta) > lossy_fock_delta_A(ps[i - 1], eta) - 1e-12);
        }
    }
}

TEST_CASE("phase diffusion: damping, composition and the random-phase oracle") {
    const DensityMatrix rho = dm(coherent(cplx(1.0, 0.5), 24));
    const DensityMatrix out = phase_diffusion(rho, 0.4);
    CHECK(std::abs(out(0, 2) - std::exp(-4.0 * 0.16) * rho(0, 2)) < 1e-15);
    for (std::size_t n = 0; n < 24; ++n) CHECK(std::abs(out(n, n) - rho(n, n)) < 1e-15);
    CHECK((phase_diffusion(rho, 0.0).matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::MatrixXcd twice = phase_diffusion(phase_diffusion(rho, 0.3), 0.4).matrix();
    CHECK((twice - phase_diffusion(rho, 0.5).matrix()).cwiseAbs().maxCoeff() <= 1e-10);

    for (double delta : {0.1, 0.3, 0.6}) {
        const Eigen::MatrixXcd ref = oracle::random_phase_average(rho.matrix(), delta, 160);
        CHECK((phase_diffusion(rho, delta).matrix() - ref).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("phase diffusion: large-Delta coherent limit is the Poisson mixture") {
    for (double a : {0.5, 1.0, 1.5, 2.0}) {
        const cplx alpha(a, 0.0);
        const std::size_t d = 60;
        const DensityMatrix out = phase_diffusion(dm(coherent(alpha, d)), 6.0);
        const DiagonalNG ng = diagonal_ng(poisson_weights(a * a, d));
        CHECK(delta_B(out).value == doctest::Approx(ng.delta_B).epsilon(1e-4));
    }
}

TEST_CASE("kerr: trivial phases and growth with energy") {
    const FockStateVector psi = coherent(cplx(1.2, -0.3), 30);
    CHECK((kerr(psi, 0.0).amplitudes() - psi.amplitudes()).norm() == 0.0);
    CHECK((kerr(psi, 2.0 * std::numbers::pi).amplitudes() - psi.amplitudes()).norm() < 1e-12);
    const FockStateVector k = kerr(psi, 0.7);
    for (std::size_t n = 0; n < 30; ++n) CHECK(std::abs(std::norm(k[n]) - std::norm(psi[n])) < 1e-15);
    const DensityMatrix kd = kerr(dm(psi), 0.7);
    CHECK((kd.matrix() - dm(k).matrix()).cwiseAbs().maxCoeff() < 1e-14);

    double prev = 0.0;
    for (double n : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0}) {
        const cplx alpha(std::sqrt(n), 0.0);
        const double v = delta_B(kerr(coherent(alpha, 100), 1e-2)).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("Gaussian unitaries") {
    for (std::size_t d : {8u, 20u}) {
        const Eigen::MatrixXcd u = displacement_matrix(cplx(0.7, 0.2), d);
        const Eigen::MatrixXcd s = squeeze_matrix(0.4, 1.1, d);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
        CHECK((u.adjoint() * u - id).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((s.adjoint() * s - id).cwiseAbs().maxCoeff() <= 1e-8);
    }
    const FockStateVector vac = vacuum(1, 60);
    CHECK((displace(vac, cplx(0.0, 0.0)).amplitudes() - vac.amplitudes()).norm() < 1e-14);
    const FockStateVector c = displace(vac, cplx(0.8, -0.6));
    CHECK((c.amplitudes() - oracle::coherent(cplx(0.8, -0.6), 60)).norm() < 1e-8);

    const FockStateVector sq = squeeze(vac, 0.5, 0.3);
    CHECK((sq.amplitudes() - squeezed_vacuum(0.5, 0.3, 60).amplitudes()).norm() < 1e-8);
    const FockStateVector back = squeeze(sq, 0.5, 0.3 + std::numbers::pi);
    CHECK((back.amplitudes() - vac.amplitudes()).norm() < 1e-8);

    const DensityMatrix rho = random_density_matrix(1, 6, 2, 5);
    const DensityMatrix big = embed(rho, 40);
    const DensityMatrix rt = squeeze(squeeze(big, 0.3, 0.0), 0.3, std::numbers::pi);
    CHECK((rt.matrix() - big.matrix()).cwiseAbs().maxCoeff() < 1e-8);

    CHECK_THROWS_AS(displace(vacuum(1, 6), cplx(3.0, 0.0)), TruncationError);
}

TEST_CASE("beam splitter") {
    const std::size_t d = 5;
    const std::array<std::size_t, 2> n10{1, 0};
    const FockStateVector in = FockStateVector::basis(2, d, n10);
    const FockStateVector out = beam_splitter(in, std::numbers::pi / 4.0);
    CHECK(std::abs(out[1] - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(out[d] + 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-14);

    // Vacuum projection amplitude c^{n1} s^{n2} sqrt(N! / (n1! n2!)).
    const double th = 0.37;
    for (std::size_t n1 = 0; n1 < 4; ++n1)
        for (std::size_t n2 = 0; n2 < 4; ++n2) {
            const double ref = std::pow(std::cos(th), n1) * std::pow(std::sin(th), n2) *
                               std::sqrt(binom(int(n1 + n2), int(n1)));
            CHECK(std::abs(beam_splitter_amplitude(n1 + n2, 0, n1, n2, th)) ==
                  doctest::Approx(ref).epsilon(1e-13));
        }

    // Against the exponential of the truncated generator at a cutoff that holds
    // every photon-number block of the input.
    const std::size_t dd = 7;
    const Eigen::MatrixXcd a = oracle::lowering(dd);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dd, dd);
    const Eigen::MatrixXcd a1 = oracle::kron(id, a);
    const Eigen::MatrixXcd a2 = oracle::kron(a, id);
    const Eigen::MatrixXcd gen = th * (a1.adjoint() * a2 - a1 * a2.adjoint());
    const Eigen::MatrixXcd u = oracle::expm(gen);
    const DensityMatrix small = random_density_matrix(2, 3, 2, 11);
    Eigen::MatrixXcd emb = Eigen::MatrixXcd::Zero(dd * dd, dd * dd);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            emb((i % 3) + dd * (i / 3), (j % 3) + dd * (j / 3)) = small(i, j);
    const Eigen::MatrixXcd ref = u * emb * u.adjoint();
    const DensityMatrix got = beam_splitter(embed(small, dd), th);
    CHECK((got.matrix() - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("channel specs") {
    const ChannelSpec l = parse_channel("loss:0.8");
    CHECK(l.kind == ChannelSpec::Kind::Loss);
    CHECK(l.eta == 0.8);
    CHECK(parse_channel("dephase:0.5").kind == ChannelSpec::Kind::PhaseDiffusion);
    CHECK(parse_channel("kerr:0.01").gamma == 0.01);
    const ChannelSpec dsp = parse_channel("displace:1.0,0.5");
    CHECK(dsp.alpha == cplx(1.0, 0.5));
    const ChannelSpec s = parse_channel("squeeze:0.3,0");
    CHECK(s.r == 0.3);
    CHECK(s.is_gaussian());
    CHECK_FALSE(parse_channel("kerr:1").is_gaussian());
    CHECK_THROWS_AS(parse_channel("loss:1.5"), ArgumentError);
    CHECK_THROWS_AS(parse_channel("loss"), ArgumentError);
    CHECK_THROWS_AS(parse_channel("teleport:1"), ArgumentError);
    CHECK_THROWS_AS(parse_channel("loss:0.5,0.2"), ArgumentError);
    CHECK_THROWS_AS(parse_channel("dephase:-1"), ArgumentError);

    const DensityMatrix rho = dm(fock(2, 8));
    CHECK((apply_channel(rho, l).matrix() - loss(rho, 0.8).matrix()).cwiseAbs().maxCoeff() == 0.0);
}
