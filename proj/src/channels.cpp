#include "nongauss/channels.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "nongauss/errors.hpp"

namespace nongauss {

ChannelSpec ChannelSpec::loss(double eta) {
    ChannelSpec c;
    c.kind = Kind::Loss;
    c.eta = eta;
    return c;
}

ChannelSpec ChannelSpec::phase_diffusion(double delta) {
    ChannelSpec c;
    c.kind = Kind::PhaseDiffusion;
    c.delta = delta;
    return c;
}

ChannelSpec ChannelSpec::kerr(double gamma) {
    ChannelSpec c;
    c.kind = Kind::Kerr;
    c.gamma = gamma;
    return c;
}

ChannelSpec ChannelSpec::displace(cplx alpha) {
    ChannelSpec c;
    c.kind = Kind::Displace;
    c.alpha = alpha;
    return c;
}

ChannelSpec ChannelSpec::squeeze(double r, double phi) {
    ChannelSpec c;
    c.kind = Kind::Squeeze;
    c.r = r;
    c.phi = phi;
    return c;
}

void ChannelSpec::validate() const {
    switch (kind) {
        case Kind::Loss:
            if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("loss: eta must lie in [0, 1]");
            break;
        case Kind::PhaseDiffusion:
            if (!(delta >= 0.0)) throw ArgumentError("phase diffusion: delta must be >= 0");
            break;
        case Kind::Kerr:
            if (!std::isfinite(gamma)) throw ArgumentError("kerr: gamma must be finite");
            break;
        case Kind::Displace:
            if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
                throw ArgumentError("displace: alpha must be finite");
            break;
        case Kind::Squeeze:
            if (!(r >= 0.0) || !std::isfinite(phi)) throw ArgumentError("squeeze: need r >= 0");
            break;
    }
}

namespace {

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ArgumentError("cannot parse number '" + item + "'");
        }
        if (used != item.size()) throw ArgumentError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

ChannelSpec parse_channel(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ArgumentError("channel spec '" + text + "' must look like kind:params");
    }
    const std::string kind = text.substr(0, colon);
    const auto v = parse_numbers(text.substr(colon + 1));
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (v.size() < lo || v.size() > hi) {
            throw ArgumentError("channel '" + kind + "' takes " + std::to_string(lo) +
                                (lo == hi ? "" : "-" + std::to_string(hi)) + " parameter(s)");
        }
    };
    ChannelSpec c;
    if (kind == "loss") {
        need(1, 1);
        c = ChannelSpec::loss(v[0]);
    } else if (kind == "dephase" || kind == "phase" || kind == "phase-diffusion") {
        need(1, 1);
        c = ChannelSpec::phase_diffusion(v[0]);
    } else if (kind == "kerr") {
        need(1, 1);
        c = ChannelSpec::kerr(v[0]);
    } else if (kind == "displace") {
        need(1, 2);
        c = ChannelSpec::displace(cplx(v[0], v.size() > 1 ? v[1] : 0.0));
    } else if (kind == "squeeze") {
        need(1, 2);
        c = ChannelSpec::squeeze(v[0], v.size() > 1 ? v[1] : 0.0);
    } else {
        throw ArgumentError("unknown channel kind '" + kind +
                            "' (loss, dephase, kerr, displace, squeeze)");
    }
    c.validate();
    return c;
}

std::string describe(const ChannelSpec& c) {
    std::ostringstream os;
    os.precision(17);
    switch (c.kind) {
        case ChannelSpec::Kind::Loss: os << "loss:" << c.eta; break;
        case ChannelSpec::Kind::PhaseDiffusion: os << "dephase:" << c.delta; break;
        case ChannelSpec::Kind::Kerr: os << "kerr:" << c.gamma; break;
        case ChannelSpec::Kind::Displace:
            os << "displace:" << c.alpha.real() << "," << c.alpha.imag();
            break;
        case ChannelSpec::Kind::Squeeze: os << "squeeze:" << c.r << "," << c.phi; break;
    }
    return os.str();
}

namespace {

void require_single_mode(std::size_t modes, const char* what) {
    if (modes != 1) throw UnsupportedError(std::string(what) + " acts on single-mode states");
}

}  // namespace

DensityMatrix loss(const DensityMatrix& rho, double eta) {
    require_single_mode(rho.modes(), "loss");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("loss: eta must lie in [0, 1]");
    const std::size_t d = rho.cutoff();
    const auto& m = rho.matrix();
    // lb(n, k) = log C(n, k)
    auto lb = [](std::size_t n, std::size_t k) {
        return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
               std::lgamma(double(n - k) + 1.0);
    };
    std::vector<double> pe(d), pl(2 * d);
    for (std::size_t k = 0; k < d; ++k) pe[k] = std::pow(1.0 - eta, double(k));
    for (std::size_t k = 0; k < 2 * d; ++k) pl[k] = std::pow(std::sqrt(eta), double(k));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t k = 0; k < d; ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 0; k + j < d && l + j < d; ++j) {
                if (pe[j] == 0.0) break;
                const double w = pe[j] * pl[k + l] *
                                 std::exp(0.5 * (lb(k + j, j) + lb(l + j, j)));
                acc += w * m(static_cast<Eigen::Index>(k + j), static_cast<Eigen::Index>(l + j));
            }
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = acc;
        }
    return DensityMatrix::normalized(1, d, std::move(out), rho.leakage());
}

DensityMatrix phase_diffusion(const DensityMatrix& rho, double delta) {
    require_single_mode(rho.modes(), "phase diffusion");
    if (!(delta >= 0.0)) throw ArgumentError("phase diffusion: delta must be >= 0");
    Eigen::MatrixXcd out = rho.matrix();
    const double d2 = delta * delta;
    for (Eigen::Index m = 0; m < out.cols(); ++m)
        for (Eigen::Index n = 0; n < out.rows(); ++n) {
            const double k = double(n - m);
            out(n, m) *= std::exp(-d2 * k * k);
        }
    return DensityMatrix(1, rho.cutoff(), std::move(out), rho.leakage());
}

namespace {

cplx kerr_phase(double gamma, std::size_t n) {
    const double n2 = double(n) * double(n);
    return std::polar(1.0, -gamma * n2);
}

}  // namespace

FockStateVector kerr(const FockStateVector& psi, double gamma) {
    require_single_mode(psi.modes(), "kerr");
    Eigen::VectorXcd v = psi.amplitudes();
    for (Eigen::Index n = 0; n < v.size(); ++n) v(n) *= kerr_phase(gamma, static_cast<std::size_t>(n));
    return FockStateVector(1, psi.cutoff(), std::move(v), psi.leakage());
}

DensityMatrix kerr(const DensityMatrix& rho, double gamma) {
    require_single_mode(rho.modes(), "kerr");
    Eigen::MatrixXcd out = rho.matrix();
    for (Eigen::Index m = 0; m < out.cols(); ++m)
        for (Eigen::Index n = 0; n < out.rows(); ++n)
            out(n, m) *= kerr_phase(gamma, static_cast<std::size_t>(n)) *
                         std::conj(kerr_phase(gamma, static_cast<std::size_t>(m)));
    return DensityMatrix(1, rho.cutoff(), std::move(out), rho.leakage());
}

// ---------------------------------------------------------------------------
// Generator exponentials

namespace {

// exp(t G) = V diag(e^{i t lambda}) V^dagger for a real antisymmetric G = iH.
struct Decomposition {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
};

enum class Generator { Displace, Squeeze };

std::shared_ptr<const Decomposition> generator_decomposition(Generator g, std::size_t d) {
    static std::mutex mu;
    static std::map<std::pair<int, std::size_t>, std::shared_ptr<const Decomposition>> cache;
    const auto key = std::make_pair(static_cast<int>(g), d);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
    if (g == Generator::Displace) {
        // a^dagger - a
        for (Eigen::Index k = 0; k + 1 < n; ++k) {
            const double s = std::sqrt(double(k + 1));
            gen(k + 1, k) = s;
            gen(k, k + 1) = -s;
        }
    } else {
        // (a^2 - a^dagger^2) / 2
        for (Eigen::Index k = 0; k + 2 < n; ++k) {
            const double s = 0.5 * std::sqrt(double((k + 1) * (k + 2)));
            gen(k, k + 2) = s;
            gen(k + 2, k) = -s;
        }
    }
    const Eigen::MatrixXcd herm = cplx(0.0, -1.0) * gen.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success) throw NumericalError("generator diagonalisation failed");
    auto dec = std::make_shared<Decomposition>();
    dec->vectors = solver.eigenvectors();
    dec->values = solver.eigenvalues();
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, dec);
    return dec;
}

// R(theta) exp(t G) R(theta)^dagger with R = e^{i theta n}.
Eigen::MatrixXcd rotated_exponential(Generator g, double t, double theta, std::size_t d) {
    const auto dec = generator_decomposition(g, d);
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::VectorXcd phase(n);
    for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, t * dec->values(k));
    Eigen::MatrixXcd u = dec->vectors * phase.asDiagonal() * dec->vectors.adjoint();
    if (theta != 0.0) {
        Eigen::VectorXcd rot(n);
        for (Eigen::Index k = 0; k < n; ++k) rot(k) = std::polar(1.0, theta * double(k));
        u = rot.asDiagonal() * u * rot.conjugate().asDiagonal();
    }
    return u;
}

std::size_t internal_cutoff(std::size_t d, double mean_out) {
    const double pad = std::max(20.0, 4.0 * mean_out);
    return d + static_cast<std::size_t>(std::ceil(pad));
}

double mean_photons_diag(const Eigen::VectorXd& diag) {
    double n = 0.0;
    for (Eigen::Index k = 0; k < diag.size(); ++k) n += double(k) * diag(k);
    return n;
}

void check_leak(double leak, const std::string& generator, std::size_t cutoff) {
    if (leak > tolerances().leak_max) {
        std::ostringstream os;
        os << generator << " pushes " << leak << " of the state beyond cutoff " << cutoff
           << " (leak_max " << tolerances().leak_max << ")";
        throw TruncationError(os.str(), cutoff + cutoff / 2 + 10);
    }
}

FockStateVector apply_unitary_vector(const FockStateVector& psi, const Eigen::MatrixXcd& u,
                                    const std::string& name) {
    const std::size_t d = psi.cutoff();
    const Eigen::VectorXcd big = u * embed(psi, static_cast<std::size_t>(u.rows())).amplitudes();
    const double leak = big.tail(big.size() - static_cast<Eigen::Index>(d)).squaredNorm();
    check_leak(leak, name, d);
    return FockStateVector::normalized(1, d, big.head(static_cast<Eigen::Index>(d)),
                                       psi.leakage() + leak);
}

DensityMatrix apply_unitary_matrix(const DensityMatrix& rho, const Eigen::MatrixXcd& u,
                                   const std::string& name) {
    const std::size_t d = rho.cutoff();
    const auto di = static_cast<Eigen::Index>(d);
    // Only the first d rows of U contribute to the cropped block.
    const Eigen::MatrixXcd top = u.topLeftCorner(di, di);
    Eigen::MatrixXcd block = top * rho.matrix() * top.adjoint();
    const double leak = std::max(0.0, 1.0 - block.trace().real());
    check_leak(leak, name, d);
    return DensityMatrix::normalized(1, d, std::move(block), rho.leakage() + leak);
}

double displaced_mean(double n_in, cplx alpha) {
    const double s = std::sqrt(n_in) + std::abs(alpha);
    return s * s;
}

double squeezed_mean(double n_in, double r) { return (n_in + 0.5) * std::exp(2.0 * r); }

}  // namespace

Eigen::MatrixXcd displacement_matrix(cplx alpha, std::size_t cutoff) {
    return rotated_exponential(Generator::Displace, std::abs(alpha), std::arg(alpha), cutoff);
}

Eigen::MatrixXcd squeeze_matrix(double r, double phi, std::size_t cutoff) {
    return rotated_exponential(Generator::Squeeze, r, -0.5 * phi, cutoff);
}

FockStateVector displace(const FockStateVector& psi, cplx alpha) {
    require_single_mode(psi.modes(), "displacement");
    if (alpha == cplx(0.0, 0.0)) return psi;
    const double n = mean_photon_number(psi, 0);
    const std::size_t di = internal_cutoff(psi.cutoff(), displaced_mean(n, alpha));
    return apply_unitary_vector(psi, displacement_matrix(alpha, di), "displacement");
}

DensityMatrix displace(const DensityMatrix& rho, cplx alpha) {
    require_single_mode(rho.modes(), "displacement");
    if (alpha == cplx(0.0, 0.0)) return rho;
    const double n = mean_photons_diag(rho.matrix().diagonal().real());
    const std::size_t di = internal_cutoff(rho.cutoff(), displaced_mean(n, alpha));
    return apply_unitary_matrix(rho, displacement_matrix(alpha, di), "displacement");
}

FockStateVector squeeze(const FockStateVector& psi, double r, double phi) {
    require_single_mode(psi.modes(), "squeezing");
    if (r < 0.0) throw ArgumentError("squeezing magnitude must be non-negative");
    if (r == 0.0) return psi;
    const double n = mean_photon_number(psi, 0);
    const std::size_t di = internal_cutoff(psi.cutoff(), squeezed_mean(n, r));
    return apply_unitary_vector(psi, squeeze_matrix(r, phi, di), "squeezing");
}

DensityMatrix squeeze(const DensityMatrix& rho, double r, double phi) {
    require_single_mode(rho.modes(), "squeezing");
    if (r < 0.0) throw ArgumentError("squeezing magnitude must be non-negative");
    if (r == 0.0) return rho;
    const double n = mean_photons_diag(rho.matrix().diagonal().real());
    const std::size_t di = internal_cutoff(rho.cutoff(), squeezed_mean(n, r));
    return apply_unitary_matrix(rho, squeeze_matrix(r, phi, di), "squeezing");
}

// ---------------------------------------------------------------------------
// Beam splitter

double beam_splitter_amplitude(std::size_t p, std::size_t q, std::size_t n1, std::size_t n2,
                               double theta) {
    if (p + q != n1 + n2) return 0.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double lc = std::log(std::abs(c));
    const double ls = std::log(std::abs(s));
    auto lf = [](std::size_t n) { return std::lgamma(double(n) + 1.0); };
    const double half = 0.5 * (lf(p) + lf(q) - lf(n1) - lf(n2));
    // (c a1' - s a2')^{n1} (c a2' + s a1')^{n2}: j powers of c a1' from the
    // first factor, k powers of c a2' from the second, p = j + n2 - k.
    double acc = 0.0;
    const std::size_t j_lo = p > n2 ? p - n2 : 0;
    const std::size_t j_hi = std::min(n1, p);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        const std::size_t k = j + n2 - p;
        const std::size_t ec = j + k;
        const std::size_t es = (n1 - j) + (n2 - k);
        if ((ec > 0 && c == 0.0) || (es > 0 && s == 0.0)) continue;
        double lmag = lf(n1) - lf(j) - lf(n1 - j) + lf(n2) - lf(k) - lf(n2 - k) + half;
        if (ec > 0) lmag += double(ec) * lc;
        if (es > 0) lmag += double(es) * ls;
        double sign = ((n1 - j) % 2 == 0) ? 1.0 : -1.0;
        if (c < 0.0 && ec % 2 == 1) sign = -sign;
        if (s < 0.0 && es % 2 == 1) sign = -sign;
        acc += sign * std::exp(lmag);
    }
    return acc;
}

namespace {

struct BsTable {
    std::size_t d;
    double theta;
    std::vector<std::vector<double>> rows;  // rows[n1 * d + n2][p]
    std::vector<bool> ready;

    BsTable(std::size_t cutoff, double t) : d(cutoff), theta(t), rows(cutoff * cutoff), ready(cutoff * cutoff, false) {}

    const std::vector<double>& get(std::size_t n1, std::size_t n2) {
        const std::size_t key = n1 * d + n2;
        if (!ready[key]) {
            const std::size_t total = n1 + n2;
            auto& row = rows[key];
            row.assign(total + 1, 0.0);
            for (std::size_t p = 0; p <= total; ++p)
                row[p] = beam_splitter_amplitude(p, total - p, n1, n2, theta);
            ready[key] = true;
        }
        return rows[key];
    }
};

void check_bs_modes(std::size_t modes, std::size_t a, std::size_t b) {
    if (modes < 2) throw UnsupportedError("beam splitter needs at least two modes");
    if (a >= modes || b >= modes || a == b) throw ArgumentError("invalid beam-splitter modes");
}

}  // namespace

FockStateVector beam_splitter(const FockStateVector& psi, double theta, std::size_t mode_a,
                              std::size_t mode_b) {
    check_bs_modes(psi.modes(), mode_a, mode_b);
    const std::size_t d = psi.cutoff();
    const std::size_t modes = psi.modes();
    const auto& v = psi.amplitudes();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    BsTable table(d, theta);
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
        const cplx amp = v(static_cast<Eigen::Index>(i));
        if (amp == cplx(0.0, 0.0)) continue;
        PhotonNumbers n = decode_index(i, modes, d);
        const std::size_t n1 = n[mode_a];
        const std::size_t n2 = n[mode_b];
        const auto& row = table.get(n1, n2);
        const std::size_t total = n1 + n2;
        for (std::size_t p = 0; p <= total; ++p) {
            const std::size_t q = total - p;
            const double a = row[p];
            if (p >= d || q >= d) continue;
            n[mode_a] = p;
            n[mode_b] = q;
            out(static_cast<Eigen::Index>(encode_index(n, modes, d))) += amp * a;
        }
    }
    const double leak = std::max(0.0, 1.0 - out.squaredNorm());
    check_leak(leak, "beam splitter", d);
    return FockStateVector::normalized(modes, d, std::move(out), psi.leakage() + leak);
}

DensityMatrix beam_splitter(const DensityMatrix& rho, double theta, std::size_t mode_a,
                            std::size_t mode_b) {
    check_bs_modes(rho.modes(), mode_a, mode_b);
    const std::size_t d = rho.cutoff();
    const std::size_t modes = rho.modes();
    const auto dim = static_cast<Eigen::Index>(rho.dimension());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    BsTable table(d, theta);
    for (std::size_t i = 0; i < rho.dimension(); ++i) {
        PhotonNumbers n = decode_index(i, modes, d);
        const std::size_t n1 = n[mode_a];
        const std::size_t n2 = n[mode_b];
        const auto& row = table.get(n1, n2);
        for (std::size_t p = 0; p <= n1 + n2; ++p) {
            const std::size_t q = n1 + n2 - p;
            if (p >= d || q >= d) continue;
            n[mode_a] = p;
            n[mode_b] = q;
            u(static_cast<Eigen::Index>(encode_index(n, modes, d)), static_cast<Eigen::Index>(i)) =
                row[p];
        }
    }
    Eigen::MatrixXcd out = u * rho.matrix() * u.adjoint();
    const double leak = std::max(0.0, 1.0 - out.trace().real());
    check_leak(leak, "beam splitter", d);
    return DensityMatrix::normalized(modes, d, std::move(out), rho.leakage() + leak);
}

DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelSpec& c) {
    c.validate();
    switch (c.kind) {
        case ChannelSpec::Kind::Loss: return loss(rho, c.eta);
        case ChannelSpec::Kind::PhaseDiffusion: return phase_diffusion(rho, c.delta);
        case ChannelSpec::Kind::Kerr: return kerr(rho, c.gamma);
        case ChannelSpec::Kind::Displace: return displace(rho, c.alpha);
        case ChannelSpec::Kind::Squeeze: return squeeze(rho, c.r, c.phi);
    }
    throw ArgumentError("unknown channel kind");
}

}  // namespace nongauss
