#include "nongauss/zoo.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "nongauss/errors.hpp"

namespace nongauss {

namespace {

constexpr std::size_t kCutoffSearchLimit = 1 << 16;

// Smallest cutoff d with 1 - sum_{n<d} weight(n) <= tol_tail, for a weight
// sequence already divided by its total.
std::size_t minimal_cutoff(const std::function<double(std::size_t)>& weight) {
    double kept = 0.0;
    for (std::size_t d = 1; d <= kCutoffSearchLimit; ++d) {
        kept += weight(d - 1);
        if (1.0 - kept <= tolerances().tail) return d;
    }
    return kCutoffSearchLimit;
}

[[noreturn]] void throw_tail(const std::string& what, double tail, std::size_t cutoff,
                             std::size_t suggested) {
    throw TruncationError(what + ": tail mass " + std::to_string(tail) + " beyond cutoff " +
                              std::to_string(cutoff) + " exceeds tol_tail; use cutoff >= " +
                              std::to_string(suggested),
                          suggested);
}

std::vector<cplx> coherent_amplitudes(cplx alpha, std::size_t count) {
    std::vector<cplx> c(count);
    if (count == 0) return c;
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 1; n < count; ++n) c[n] = c[n - 1] * alpha / std::sqrt(double(n));
    return c;
}

double poisson_term(double lambda, std::size_t n) {
    if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-lambda + double(n) * std::log(lambda) - std::lgamma(double(n) + 1.0));
}

}  // namespace

FockStateVector fock(std::size_t n, std::size_t cutoff) {
    const std::array<std::size_t, 1> p{n};
    return FockStateVector::basis(1, cutoff, p);
}

FockStateVector vacuum(std::size_t modes, std::size_t cutoff) {
    const std::vector<std::size_t> zeros(modes, 0);
    return FockStateVector::basis(modes, cutoff, zeros);
}

FockStateVector coherent(cplx alpha, std::size_t cutoff) {
    const auto c = coherent_amplitudes(alpha, cutoff);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(cutoff));
    double kept = 0.0;
    for (std::size_t n = 0; n < cutoff; ++n) {
        v(static_cast<Eigen::Index>(n)) = c[n];
        kept += std::norm(c[n]);
    }
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > tolerances().tail) {
        const double l = std::norm(alpha);
        throw_tail("coherent state", tail, cutoff,
                   minimal_cutoff([l](std::size_t n) { return poisson_term(l, n); }));
    }
    return FockStateVector::normalized(1, cutoff, std::move(v), tail);
}

std::vector<double> thermal_weights(double mean_photons, std::size_t count) {
    if (mean_photons < 0.0) throw ArgumentError("mean photon number must be non-negative");
    std::vector<double> p(count);
    const double q = mean_photons / (1.0 + mean_photons);
    double t = 1.0 / (1.0 + mean_photons);
    for (std::size_t n = 0; n < count; ++n) {
        p[n] = t;
        t *= q;
    }
    return p;
}

std::vector<double> poisson_weights(double lambda, std::size_t count) {
    if (lambda < 0.0) throw ArgumentError("Poisson mean must be non-negative");
    std::vector<double> p(count);
    for (std::size_t n = 0; n < count; ++n) p[n] = poisson_term(lambda, n);
    return p;
}

DensityMatrix thermal(double mean_photons, std::size_t cutoff) {
    const auto p = thermal_weights(mean_photons, cutoff);
    const double kept = std::accumulate(p.begin(), p.end(), 0.0);
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > tolerances().tail) {
        const double q = mean_photons / (1.0 + mean_photons);
        const auto d = static_cast<std::size_t>(
            std::ceil(std::log(tolerances().tail) / std::log(q)));
        throw_tail("thermal state", tail, cutoff, d);
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cutoff),
                                                static_cast<Eigen::Index>(cutoff));
    for (std::size_t n = 0; n < cutoff; ++n) m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = p[n];
    return DensityMatrix::normalized(1, cutoff, std::move(m), tail);
}

FockStateVector squeezed_vacuum(double r, double phi, std::size_t cutoff) {
    if (r < 0.0) throw ArgumentError("squeezing magnitude must be non-negative");
    const cplx ratio = -std::polar(std::tanh(r), -phi);
    auto amps = [&](std::size_t count) {
        std::vector<cplx> a(count, 0.0);
        cplx c = 1.0 / std::sqrt(std::cosh(r));
        for (std::size_t k = 0; 2 * k < count; ++k) {
            a[2 * k] = c;
            c *= ratio * std::sqrt(double((2 * k + 1) * (2 * k + 2))) / (2.0 * double(k + 1));
        }
        return a;
    };
    const auto a = amps(cutoff);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(cutoff));
    double kept = 0.0;
    for (std::size_t n = 0; n < cutoff; ++n) {
        v(static_cast<Eigen::Index>(n)) = a[n];
        kept += std::norm(a[n]);
    }
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > tolerances().tail) {
        std::size_t d = cutoff;
        double k2 = kept;
        std::vector<cplx> more;
        while (1.0 - k2 > tolerances().tail && d < kCutoffSearchLimit) {
            d = d + d / 2 + 2;
            more = amps(d);
            k2 = 0.0;
            for (const cplx& x : more) k2 += std::norm(x);
        }
        throw_tail("squeezed vacuum", tail, cutoff, d);
    }
    return FockStateVector::normalized(1, cutoff, std::move(v), tail);
}

FockStateVector fock_superposition(std::size_t n, std::size_t k, std::size_t cutoff) {
    if (k == 1 || k == 2) {
        throw ArgumentError("fock_superposition requires k = 0 or k > 2: for k = " +
                            std::to_string(k) + " the first or second moments of a are non-zero "
                            "and the thermal-reference closed forms do not apply");
    }
    if (k == 0) return fock(n, cutoff);
    if (n + k >= cutoff) {
        throw TruncationError("|n+k> = |" + std::to_string(n + k) + "> does not fit below cutoff " +
                                  std::to_string(cutoff),
                              n + k + 1);
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cutoff));
    v(static_cast<Eigen::Index>(n)) = 1.0 / std::sqrt(2.0);
    v(static_cast<Eigen::Index>(n + k)) = 1.0 / std::sqrt(2.0);
    return FockStateVector::normalized(1, cutoff, std::move(v));
}

DensityMatrix diagonal_mixture(std::span<const double> weights, std::size_t cutoff) {
    if (weights.empty()) throw ArgumentError("diagonal_mixture needs at least one weight");
    double total = 0.0;
    double tail = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        if (!(weights[n] >= 0.0)) {
            throw ArgumentError("weight q_" + std::to_string(n) + " is negative");
        }
        total += weights[n];
        if (n >= cutoff) tail += weights[n];
        if (weights[n] > 0.0) last_nonzero = n;
    }
    if (std::abs(total - 1.0) > tolerances().norm) {
        throw ArgumentError("weights sum to " + std::to_string(total) + ", not 1");
    }
    if (tail > tolerances().tail) throw_tail("diagonal mixture", tail, cutoff, last_nonzero + 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cutoff),
                                                static_cast<Eigen::Index>(cutoff));
    for (std::size_t n = 0; n < std::min(cutoff, weights.size()); ++n)
        m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = weights[n];
    return DensityMatrix::normalized(1, cutoff, std::move(m), tail);
}

DiagonalNG diagonal_ng(std::span<const double> weights, LogBase base) {
    DiagonalNG out;
    double total = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        out.mean_photons += double(n) * weights[n];
        total += weights[n];
    }
    out.mean_photons /= total;
    const auto tau = thermal_weights(out.mean_photons, weights.size());
    double kappa = 0.0;
    double mu = 0.0;
    double plogp = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const double q = weights[n] / total;
        kappa += q * tau[n];
        mu += q * q;
        if (q > 0.0) plogp += q * std::log(q);
    }
    const double mu_tau = 1.0 / (2.0 * out.mean_photons + 1.0);
    out.delta_A = 0.5 * (1.0 - (2.0 * kappa - mu_tau) / mu);
    out.delta_B = h(out.mean_photons + 0.5, base) + plogp * log_scale(base);
    return out;
}

FockStateVector cat(cplx alpha, double phi, std::size_t cutoff) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double s2 = std::sin(2.0 * phi);
    const double norm2 = (1.0 + s2) + s2 * std::expm1(-2.0 * std::norm(alpha));
    if (!(norm2 > 1e-300)) throw NumericalError("cat state normalisation vanishes");
    const auto coh = coherent_amplitudes(alpha, cutoff);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(cutoff));
    double kept = 0.0;
    for (std::size_t n = 0; n < cutoff; ++n) {
        const double parity = (n % 2 == 0) ? 1.0 : -1.0;
        v(static_cast<Eigen::Index>(n)) = coh[n] * (c + s * parity);
        kept += std::norm(v(static_cast<Eigen::Index>(n)));
    }
    const double tail = std::max(0.0, 1.0 - kept / norm2);
    if (tail > tolerances().tail) {
        const double l = std::norm(alpha);
        throw_tail("cat state", tail, cutoff, minimal_cutoff([=](std::size_t n) {
                       const double parity = (n % 2 == 0) ? 1.0 : -1.0;
                       const double f = c + s * parity;
                       return poisson_term(l, n) * f * f / norm2;
                   }));
    }
    return FockStateVector::normalized(1, cutoff, std::move(v), tail);
}

PnesFamily parse_pnes_family(const std::string& name) {
    if (name == "twin" || name == "twinbeam" || name == "twin-beam") return PnesFamily::TwinBeam;
    if (name == "tmc") return PnesFamily::TMC;
    if (name == "pssv") return PnesFamily::PSSV;
    if (name == "pasv") return PnesFamily::PASV;
    throw ArgumentError("unknown PNES family '" + name + "' (twin, tmc, pssv, pasv)");
}

std::string to_string(PnesFamily f) {
    switch (f) {
        case PnesFamily::TwinBeam: return "twin";
        case PnesFamily::TMC: return "tmc";
        case PnesFamily::PSSV: return "pssv";
        case PnesFamily::PASV: return "pasv";
    }
    return "?";
}

namespace {

// Unnormalised psi_n and the closed-form sum of psi_n^2.
double pnes_raw(PnesFamily f, double x, std::size_t n) {
    const double dn = double(n);
    switch (f) {
        case PnesFamily::TwinBeam: return std::pow(x, dn);
        case PnesFamily::TMC: {
            if (x == 0.0) return n == 0 ? 1.0 : 0.0;
            const double sign = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
            return sign * std::exp(dn * std::log(std::abs(x)) - std::lgamma(dn + 1.0));
        }
        case PnesFamily::PSSV: return (dn + 1.0) * std::pow(x, dn + 1.0);
        case PnesFamily::PASV: return n == 0 ? 0.0 : dn * std::pow(x, dn - 1.0);
    }
    return 0.0;
}

double pnes_norm2(PnesFamily f, double x) {
    const double x2 = x * x;
    switch (f) {
        case PnesFamily::TwinBeam: return 1.0 / (1.0 - x2);
        case PnesFamily::TMC: return std::cyl_bessel_i(0.0, 2.0 * std::abs(x));
        case PnesFamily::PSSV: return x2 * (1.0 + x2) / std::pow(1.0 - x2, 3);
        case PnesFamily::PASV: return (1.0 + x2) / std::pow(1.0 - x2, 3);
    }
    return 1.0;
}

}  // namespace

Eigen::VectorXd pnes_coefficients(const PNESSpec& spec) {
    const double x = spec.parameter;
    if (spec.family != PnesFamily::TMC) {
        if (!(x >= 0.0 && x < 1.0)) throw ArgumentError("PNES parameter x must lie in [0, 1)");
        if (spec.family == PnesFamily::PSSV && x == 0.0) {
            throw ArgumentError("photon-subtracted PNES is undefined at x = 0");
        }
    }
    if (spec.cutoff == 0) throw ArgumentError("cutoff must be positive");
    const double norm2 = pnes_norm2(spec.family, x);
    Eigen::VectorXd c(static_cast<Eigen::Index>(spec.cutoff));
    double kept = 0.0;
    for (std::size_t n = 0; n < spec.cutoff; ++n) {
        c(static_cast<Eigen::Index>(n)) = pnes_raw(spec.family, x, n);
        kept += c(static_cast<Eigen::Index>(n)) * c(static_cast<Eigen::Index>(n));
    }
    const double tail = std::max(0.0, 1.0 - kept / norm2);
    if (tail > tolerances().tail) {
        throw_tail("PNES " + to_string(spec.family), tail, spec.cutoff,
                   minimal_cutoff([&](std::size_t n) {
                       const double v = pnes_raw(spec.family, x, n);
                       return v * v / norm2;
                   }));
    }
    return c / std::sqrt(kept);
}

FockStateVector pnes(const PNESSpec& spec) {
    const Eigen::VectorXd c = pnes_coefficients(spec);
    const std::size_t d = spec.cutoff;
    const std::size_t dim = hilbert_dimension(2, d, std::size_t{1} << 22);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < d; ++n) v(static_cast<Eigen::Index>(n + n * d)) = c(static_cast<Eigen::Index>(n));
    return FockStateVector::normalized(2, d, std::move(v));
}

PnesMoments pnes_moments(const PNESSpec& spec) {
    const Eigen::VectorXd c = pnes_coefficients(spec);
    PnesMoments m;
    for (Eigen::Index n = 0; n < c.size(); ++n) {
        m.N += c(n) * c(n) * double(n);
        if (n + 1 < c.size()) m.C += c(n) * c(n + 1) * double(n + 1);
    }
    m.gaussian.X = Eigen::VectorXd::Zero(4);
    m.gaussian.sigma = (m.N + 0.5) * Eigen::MatrixXd::Identity(4, 4);
    m.gaussian.sigma(0, 2) = m.gaussian.sigma(2, 0) = m.C;
    m.gaussian.sigma(1, 3) = m.gaussian.sigma(3, 1) = -m.C;
    return m;
}

}  // namespace nongauss
