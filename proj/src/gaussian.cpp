#include "nongauss/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nongauss/errors.hpp"

namespace nongauss {

namespace {

void check_leakage(double leakage) {
    if (leakage > tolerances().leak_max) {
        throw TruncationError("state leakage " + std::to_string(leakage) +
                              " exceeds leak_max; moments are not reliable");
    }
}

std::vector<std::size_t> strides(std::size_t modes, std::size_t cutoff) {
    std::vector<std::size_t> s(modes, 1);
    for (std::size_t k = 1; k < modes; ++k) s[k] = s[k - 1] * cutoff;
    return s;
}

// expect(to, from, c) returns the contribution of O|from> = c|to>.
template <typename Expect>
LadderMoments ladder_impl(std::size_t modes, std::size_t cutoff, std::size_t dim, Expect expect) {
    const auto n = static_cast<Eigen::Index>(modes);
    LadderMoments lm;
    lm.a = Eigen::VectorXcd::Zero(n);
    lm.aa = Eigen::MatrixXcd::Zero(n, n);
    lm.ada = Eigen::MatrixXcd::Zero(n, n);
    const auto st = strides(modes, cutoff);
    for (std::size_t m = 0; m < dim; ++m) {
        const PhotonNumbers pn = decode_index(m, modes, cutoff);
        for (std::size_t j = 0; j < modes; ++j) {
            if (pn[j] == 0) continue;
            const double sj = std::sqrt(static_cast<double>(pn[j]));
            // a_j |m> = sqrt(m_j) |m - e_j>
            lm.a(static_cast<Eigen::Index>(j)) += expect(m - st[j], m, sj);
        }
        for (std::size_t k = 0; k < modes; ++k) {
            if (pn[k] == 0) continue;
            const double sk = std::sqrt(static_cast<double>(pn[k]));
            const std::size_t mk = m - st[k];
            for (std::size_t j = 0; j < modes; ++j) {
                const std::size_t nj = pn[j] - (j == k ? 1 : 0);
                // a_j a_k |m>
                if (nj > 0) {
                    lm.aa(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) +=
                        expect(mk - st[j], m, sk * std::sqrt(static_cast<double>(nj)));
                }
                // a_j^dagger a_k |m>
                if (nj + 1 < cutoff) {
                    lm.ada(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) +=
                        expect(mk + st[j], m, sk * std::sqrt(static_cast<double>(nj + 1)));
                }
            }
        }
    }
    return lm;
}

LadderMoments ladder_from_matrix(const Eigen::MatrixXcd& rho, std::size_t modes,
                                 std::size_t cutoff) {
    // For O|m> = c|m'>:  Tr[rho O] = sum_m c <m|rho|m'>.
    return ladder_impl(modes, cutoff, static_cast<std::size_t>(rho.rows()),
                       [&](std::size_t to, std::size_t from, double c) {
                           return c * rho(static_cast<Eigen::Index>(from),
                                          static_cast<Eigen::Index>(to));
                       });
}

}  // namespace

LadderMoments ladder_moments(const DensityMatrix& rho) {
    check_leakage(rho.leakage());
    return ladder_from_matrix(rho.matrix(), rho.modes(), rho.cutoff());
}

LadderMoments ladder_moments(const FockStateVector& psi) {
    check_leakage(psi.leakage());
    const auto& v = psi.amplitudes();
    return ladder_impl(psi.modes(), psi.cutoff(), psi.dimension(),
                       [&](std::size_t to, std::size_t from, double c) {
                           return c * std::conj(v(static_cast<Eigen::Index>(to))) *
                                  v(static_cast<Eigen::Index>(from));
                       });
}

GaussianData gaussian_data(const LadderMoments& m) {
    const auto n = m.a.size();
    GaussianData g;
    g.X.resize(2 * n);
    g.sigma.resize(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        g.X(2 * j) = std::sqrt(2.0) * m.a(j).real();
        g.X(2 * j + 1) = std::sqrt(2.0) * m.a(j).imag();
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx s = m.aa(j, k);
            const cplx nn = m.ada(j, k);
            const double delta = (j == k) ? 0.5 : 0.0;
            g.sigma(2 * j, 2 * k) = s.real() + nn.real() + delta;
            g.sigma(2 * j + 1, 2 * k + 1) = -s.real() + nn.real() + delta;
            g.sigma(2 * j, 2 * k + 1) = s.imag() + nn.imag();
        }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) g.sigma(2 * k + 1, 2 * j) = g.sigma(2 * j, 2 * k + 1);
    g.sigma -= g.X * g.X.transpose();
    g.sigma = 0.5 * (g.sigma + g.sigma.transpose()).eval();
    return g;
}

GaussianData moments(const DensityMatrix& rho) { return gaussian_data(ladder_moments(rho)); }
GaussianData moments(const FockStateVector& psi) { return gaussian_data(ladder_moments(psi)); }

double h(double x, LogBase base) {
    if (x < 0.5 - tolerances().symp) {
        throw NumericalError("h(x) requires x >= 1/2, got " + std::to_string(x));
    }
    if (x <= 0.5) return 0.0;
    const double up = x + 0.5;
    const double dn = x - 0.5;
    return (up * std::log(up) - dn * std::log(dn)) * log_scale(base);
}

SymplecticSpectrum symplectic_eigenvalues(const GaussianData& g) {
    const double tol = tolerances().symp;
    if (g.modes() == 1) {
        const double det = g.sigma.determinant();
        if (det < 0.0) throw NumericalError("covariance matrix has negative determinant");
        const double d = std::sqrt(det);
        return {d, d};
    }
    if (g.modes() != 2) throw UnsupportedError("symplectic spectrum is implemented for 1 or 2 modes");
    const double i1 = g.sigma.block<2, 2>(0, 0).determinant();
    const double i2 = g.sigma.block<2, 2>(2, 2).determinant();
    const double i3 = g.sigma.block<2, 2>(0, 2).determinant();
    const double i4 = g.sigma.determinant();
    const double delta = i1 + i2 + 2.0 * i3;
    double disc = delta * delta - 4.0 * i4;
    if (disc < -tol) {
        throw NumericalError("invalid covariance matrix: negative symplectic discriminant " +
                             std::to_string(disc));
    }
    disc = std::max(disc, 0.0);
    const double sq = std::sqrt(disc);
    const double lo = 0.5 * (delta - sq);
    const double hi = 0.5 * (delta + sq);
    if (lo < -tol) throw NumericalError("invalid covariance matrix: d_-^2 < 0");
    return {std::sqrt(std::max(lo, 0.0)), std::sqrt(hi)};
}

void validate(const GaussianData& g) {
    if (g.X.size() != g.sigma.rows() || g.sigma.rows() != g.sigma.cols() || g.X.size() % 2 != 0 ||
        g.X.size() == 0) {
        throw ArgumentError("inconsistent GaussianData dimensions");
    }
    const double asym = (g.sigma - g.sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > tolerances().herm) throw NumericalError("covariance matrix is not symmetric");
    const SymplecticSpectrum s = symplectic_eigenvalues(g);
    if (s.d_minus < 0.5 - tolerances().symp) {
        throw NumericalError("unphysical covariance matrix: d_- = " + std::to_string(s.d_minus) +
                             " < 1/2");
    }
}

double gaussian_entropy(const GaussianData& g, LogBase base) {
    const SymplecticSpectrum s = symplectic_eigenvalues(g);
    if (g.modes() == 1) return h(s.d_minus, base);
    return h(s.d_minus, base) + h(s.d_plus, base);
}

double gaussian_purity(const GaussianData& g) {
    return 1.0 / (std::pow(2.0, static_cast<double>(g.modes())) * std::sqrt(g.sigma.determinant()));
}

GaussianData marginal(const GaussianData& g, std::span<const std::size_t> modes) {
    const auto k = static_cast<Eigen::Index>(modes.size());
    GaussianData out;
    out.X.resize(2 * k);
    out.sigma.resize(2 * k, 2 * k);
    for (Eigen::Index a = 0; a < k; ++a) {
        const auto ma = static_cast<Eigen::Index>(modes[static_cast<std::size_t>(a)]);
        if (ma >= static_cast<Eigen::Index>(g.modes())) throw ArgumentError("mode out of range");
        out.X.segment<2>(2 * a) = g.X.segment<2>(2 * ma);
        for (Eigen::Index b = 0; b < k; ++b) {
            const auto mb = static_cast<Eigen::Index>(modes[static_cast<std::size_t>(b)]);
            out.sigma.block<2, 2>(2 * a, 2 * b) = g.sigma.block<2, 2>(2 * ma, 2 * mb);
        }
    }
    return out;
}

GaussianData loss_transformed(const GaussianData& g, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [0, 1]");
    GaussianData out;
    out.X = std::sqrt(eta) * g.X;
    out.sigma = eta * g.sigma +
                (1.0 - eta) * 0.5 * Eigen::MatrixXd::Identity(g.sigma.rows(), g.sigma.cols());
    return out;
}

SingleModeGaussianParams fit_single_mode_gaussian(const GaussianData& g) {
    if (g.modes() != 1) throw UnsupportedError("fit_single_mode_gaussian needs one mode");
    const double s11 = g.sigma(0, 0);
    const double s22 = g.sigma(1, 1);
    const double s12 = 0.5 * (g.sigma(0, 1) + g.sigma(1, 0));
    const double det = s11 * s22 - s12 * s12;
    if (det < 0.25 - tolerances().symp) {
        throw NumericalError("unphysical covariance matrix: det sigma = " + std::to_string(det));
    }
    const double d = std::sqrt(std::max(det, 0.25));
    SingleModeGaussianParams p;
    p.n_th = d - 0.5;
    const double half_diff = 0.5 * (s22 - s11);
    const double sinh2r = std::hypot(half_diff, s12) / d;
    p.r = 0.5 * std::asinh(sinh2r);
    if (p.r < 1e-12) {
        p.r = 0.0;
        p.phi = 0.0;
    } else {
        p.phi = std::atan2(s12, half_diff);
        if (p.phi < 0.0) p.phi += 2.0 * std::numbers::pi;
    }
    p.alpha = cplx(g.X(0), g.X(1)) / std::sqrt(2.0);

    const GaussianData back = single_mode_gaussian_data(p);
    const double scale = std::max(1.0, g.sigma.cwiseAbs().maxCoeff());
    const double resid = (back.sigma - g.sigma).cwiseAbs().maxCoeff();
    if (resid > 1e-9 * scale) {
        throw NumericalError("Gaussian fit reconstruction residual " + std::to_string(resid));
    }
    return p;
}

GaussianData single_mode_gaussian_data(const SingleModeGaussianParams& p) {
    if (p.n_th < -tolerances().eig) throw ArgumentError("n_th must be non-negative");
    if (p.r < 0.0) throw ArgumentError("squeezing magnitude must be non-negative");
    const double nh = std::max(p.n_th, 0.0) + 0.5;
    const double ch = std::cosh(2.0 * p.r);
    const double sh = std::sinh(2.0 * p.r);
    GaussianData g;
    g.X.resize(2);
    g.X << std::sqrt(2.0) * p.alpha.real(), std::sqrt(2.0) * p.alpha.imag();
    g.sigma.resize(2, 2);
    g.sigma(0, 0) = nh * (ch - sh * std::cos(p.phi));
    g.sigma(1, 1) = nh * (ch + sh * std::cos(p.phi));
    g.sigma(0, 1) = g.sigma(1, 0) = nh * sh * std::sin(p.phi);
    return g;
}

Eigen::MatrixXcd gaussian_fock_block(const GaussianData& g, std::size_t cutoff) {
    if (g.modes() != 1) throw UnsupportedError("Fock-basis synthesis is single-mode only");
    if (cutoff == 0) throw ArgumentError("cutoff must be positive");
    // Bargmann kernel sum_mn rho_mn x^m y^n / sqrt(m! n!) of the Gaussian
    // state is T exp(A x^2/2 + A^* y^2/2 + B x y + C x + C^* y), read off from
    // the Husimi function with Sigma = sigma + I/2.
    const Eigen::Matrix2d big = g.sigma + 0.5 * Eigen::Matrix2d::Identity();
    const double det = big.determinant();
    if (!(det > 0.0)) throw NumericalError("sigma + I/2 is not positive definite");
    const Eigen::Matrix2d p = big.inverse();
    const Eigen::Vector2d x = g.X;
    const Eigen::Vector2d v = p * x;
    const cplx w(0.5 * (p(0, 0) - p(1, 1)), -0.5 * (p(0, 1) + p(1, 0)));
    const cplx a = -std::conj(w);
    const double b = 1.0 - 0.5 * (p(0, 0) + p(1, 1));
    const cplx c = cplx(v(0), v(1)) / std::sqrt(2.0);
    const double t = std::exp(-0.5 * x.dot(v)) / std::sqrt(det);

    const auto d = static_cast<Eigen::Index>(cutoff);
    std::vector<double> sq(cutoff + 1);
    for (std::size_t k = 0; k <= cutoff; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    Eigen::MatrixXcd gm = Eigen::MatrixXcd::Zero(d, d);
    gm(0, 0) = 1.0;
    for (Eigen::Index n = 0; n < d; ++n) {
        if (n > 0) {
            const cplx prev2 = (n >= 2) ? gm(0, n - 2) : cplx(0.0);
            gm(0, n) = (std::conj(a) * sq[n - 1] * prev2 + std::conj(c) * gm(0, n - 1)) / sq[n];
        }
        for (Eigen::Index m = 0; m + 1 < d; ++m) {
            cplx acc = c * gm(m, n);
            if (m > 0) acc += a * sq[m] * gm(m - 1, n);
            if (n > 0) acc += b * sq[n] * gm(m, n - 1);
            gm(m + 1, n) = acc / sq[m + 1];
        }
    }
    gm *= t;
    return 0.5 * (gm + gm.adjoint());
}

namespace {

double moment_residual(const Eigen::MatrixXcd& block, const GaussianData& g) {
    const double tr = block.trace().real();
    const Eigen::MatrixXcd nb = block / tr;
    const GaussianData gb =
        gaussian_data(ladder_from_matrix(nb, 1, static_cast<std::size_t>(block.rows())));
    return std::max((gb.X - g.X).cwiseAbs().maxCoeff(),
                    (gb.sigma - g.sigma).cwiseAbs().maxCoeff());
}

}  // namespace

std::size_t gaussian_cutoff(const GaussianData& g, double tail) {
    const std::size_t limit = tolerances().max_dimension;
    std::size_t d = 8;
    while (true) {
        const Eigen::MatrixXcd block = gaussian_fock_block(g, d);
        const double deficit = 1.0 - block.trace().real();
        if (deficit <= tail && moment_residual(block, g) <= 0.1 * tolerances().ref) return d;
        if (d >= limit) {
            throw TruncationError("Gaussian state needs more than " + std::to_string(limit) +
                                      " Fock levels",
                                  2 * limit);
        }
        d = std::min(limit, d + d / 2);
    }
}

DensityMatrix gaussian_state(const GaussianData& g, std::size_t cutoff) {
    validate(g);
    const Eigen::MatrixXcd block = gaussian_fock_block(g, cutoff);
    const double deficit = 1.0 - block.trace().real();
    if (deficit > tolerances().tail) {
        throw TruncationError("Gaussian state has tail mass " + std::to_string(deficit) +
                                  " beyond cutoff " + std::to_string(cutoff),
                              gaussian_cutoff(g, tolerances().tail));
    }
    return DensityMatrix::normalized(1, cutoff, block, std::max(deficit, 0.0));
}

DensityMatrix gaussian_state(const SingleModeGaussianParams& p, std::size_t cutoff) {
    return gaussian_state(single_mode_gaussian_data(p), cutoff);
}

DensityMatrix reference_gaussian_state(const DensityMatrix& rho) {
    if (rho.modes() != 1) {
        throw UnsupportedError("reference Gaussian state synthesis is single-mode only");
    }
    const GaussianData g = moments(rho);
    validate(g);
    const std::size_t d = std::max(rho.cutoff(), gaussian_cutoff(g, tolerances().tail));
    DensityMatrix tau = gaussian_state(g, d);
    const GaussianData gt = moments(tau);
    const double resid = std::max((gt.X - g.X).cwiseAbs().maxCoeff(),
                                  (gt.sigma - g.sigma).cwiseAbs().maxCoeff());
    if (resid > tolerances().ref) {
        throw TruncationError("reference state moment residual " + std::to_string(resid) +
                                  " exceeds tol_ref",
                              2 * d);
    }
    return tau;
}

}  // namespace nongauss
