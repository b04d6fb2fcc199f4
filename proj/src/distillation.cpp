#include "nongauss/distillation.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nongauss/channels.hpp"
#include "nongauss/errors.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/measures.hpp"
#include "nongauss/zoo.hpp"

namespace nongauss {

namespace {

constexpr double kPruneWeight = 1e-12;
constexpr double kMinSuccess = 1e-12;

void require_two_modes(std::size_t modes, const char* what) {
    if (modes != 2) throw ArgumentError(std::string(what) + " requires a two-mode state");
}

// Row P holds 2^{-P/2} sqrt(C(P, n)) for n <= P.
Eigen::MatrixXd balanced_weights(std::size_t max_total) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(max_total + 1),
                                              static_cast<Eigen::Index>(max_total + 1));
    for (std::size_t P = 0; P <= max_total; ++P) {
        const double lf = std::lgamma(static_cast<double>(P) + 1.0);
        for (std::size_t n = 0; n <= P; ++n) {
            const double lc = lf - std::lgamma(static_cast<double>(n) + 1.0) -
                              std::lgamma(static_cast<double>(P - n) + 1.0);
            w(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(n)) =
                std::exp(0.5 * lc - 0.5 * static_cast<double>(P) * std::numbers::ln2);
        }
    }
    return w;
}

// Post-selected amplitude on the (2d-1)^2 output grid, index P + Q (2d-1).
Eigen::VectorXcd contract_pair(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi,
                               std::size_t d, const Eigen::MatrixXd& w) {
    const std::size_t D = 2 * d - 1;
    Eigen::MatrixXcd conv = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D),
                                                   static_cast<Eigen::Index>(D));
    for (std::size_t nb = 0; nb < d; ++nb) {
        for (std::size_t na = 0; na < d; ++na) {
            const cplx a = psi(static_cast<Eigen::Index>(na + nb * d));
            if (a == cplx(0.0)) continue;
            for (std::size_t mb = 0; mb < d; ++mb) {
                for (std::size_t ma = 0; ma < d; ++ma) {
                    const cplx b = phi(static_cast<Eigen::Index>(ma + mb * d));
                    if (b == cplx(0.0)) continue;
                    const std::size_t P = na + ma;
                    const std::size_t Q = nb + mb;
                    conv(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(Q)) +=
                        w(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(na)) *
                        w(static_cast<Eigen::Index>(Q), static_cast<Eigen::Index>(nb)) * a * b;
                }
            }
        }
    }
    return conv.reshaped();
}

Eigen::VectorXcd crop(const Eigen::VectorXcd& wide, std::size_t d) {
    const std::size_t D = 2 * d - 1;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d * d));
    for (std::size_t q = 0; q < d; ++q)
        for (std::size_t p = 0; p < d; ++p)
            v(static_cast<Eigen::Index>(p + q * d)) = wide(static_cast<Eigen::Index>(p + q * D));
    return v;
}

Eigen::VectorXcd annihilate(const Eigen::VectorXcd& psi, std::size_t times) {
    Eigen::VectorXcd v = psi;
    const Eigen::Index d = v.size();
    for (std::size_t t = 0; t < times; ++t) {
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(d);
        for (Eigen::Index n = 0; n + 1 < d; ++n) next(n) = std::sqrt(static_cast<double>(n + 1)) * v(n + 1);
        v = std::move(next);
    }
    return v;
}

// Lowers mode `mode` of a two-mode vector once.
Eigen::VectorXcd annihilate_mode(const Eigen::VectorXcd& psi, std::size_t d, std::size_t mode) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
    for (std::size_t n1 = 0; n1 < d; ++n1) {
        for (std::size_t n0 = 0; n0 < d; ++n0) {
            const std::size_t n = mode == 0 ? n0 : n1;
            if (n + 1 >= d) continue;
            const std::size_t src = mode == 0 ? (n0 + 1) + n1 * d : n0 + (n1 + 1) * d;
            out(static_cast<Eigen::Index>(n0 + n1 * d)) =
                std::sqrt(static_cast<double>(n + 1)) * psi(static_cast<Eigen::Index>(src));
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

DensityMatrix browne_state(BrowneVariant variant, double lambda, std::size_t cutoff) {
    if (!(lambda > 0.0)) throw ArgumentError("browne_state requires lambda > 0");
    if (cutoff < 2) throw ArgumentError("browne_state requires cutoff >= 2");
    const std::size_t i00 = 0;
    const std::size_t i11 = 1 + cutoff;
    const std::size_t dim = cutoff * cutoff;
    const double nrm = 1.0 + lambda * lambda;
    const double coh = variant == BrowneVariant::A ? lambda / nrm : lambda / (2.0 * nrm);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    m(i00, i00) = 1.0 / nrm;
    m(i11, i11) = lambda * lambda / nrm;
    m(i00, i11) = coh;
    m(i11, i00) = coh;
    return DensityMatrix(2, cutoff, std::move(m));
}

BranchEnsemble BranchEnsemble::from_density(const DensityMatrix& rho) {
    require_two_modes(rho.modes(), "BranchEnsemble");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < -tolerances().eig) {
        throw NumericalError("density matrix has a negative eigenvalue beyond tol_eig");
    }
    BranchEnsemble e;
    double total = 0.0;
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
        const double lam = es.eigenvalues()(k);
        if (lam < kPruneWeight) continue;
        e.weights.push_back(lam);
        e.branches.push_back(
            FockStateVector::normalized(2, rho.cutoff(), es.eigenvectors().col(k)));
        total += lam;
    }
    for (double& w : e.weights) w /= total;
    return e;
}

DensityMatrix BranchEnsemble::to_density() const {
    if (branches.empty()) throw ArgumentError("empty branch ensemble");
    const std::size_t d = cutoff();
    const Eigen::Index dim = static_cast<Eigen::Index>(d * d);
    Eigen::MatrixXcd k(dim, static_cast<Eigen::Index>(branches.size()));
    for (std::size_t i = 0; i < branches.size(); ++i)
        k.col(static_cast<Eigen::Index>(i)) = std::sqrt(weights[i]) * branches[i].amplitudes();
    return DensityMatrix::normalized(2, d, k * k.adjoint());
}

std::size_t BranchEnsemble::cutoff() const {
    if (branches.empty()) throw ArgumentError("empty branch ensemble");
    return branches.front().cutoff();
}

ProtocolStep b_protocol_step(const BranchEnsemble& input) {
    const std::size_t d = input.cutoff();
    const Eigen::MatrixXd w = balanced_weights(2 * d - 2);
    const std::size_t r = input.rank();
    const Eigen::Index dim = static_cast<Eigen::Index>(d * d);
    Eigen::MatrixXcd kept(dim, static_cast<Eigen::Index>(r * r));
    double success = 0.0;
    double retained = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const Eigen::VectorXcd wide = contract_pair(input.branches[i].amplitudes(),
                                                        input.branches[j].amplitudes(), d, w);
            const double pij = input.weights[i] * input.weights[j];
            success += pij * wide.squaredNorm();
            Eigen::VectorXcd v = crop(wide, d);
            retained += pij * v.squaredNorm();
            kept.col(static_cast<Eigen::Index>(i * r + j)) = std::sqrt(pij) * v;
        }
    }
    if (success < kMinSuccess) {
        throw NumericalError("vacuum post-selection has vanishing success probability");
    }
    if (!(retained > 0.0)) {
        throw TruncationError("post-selected state lies entirely above the cutoff", 2 * d - 1);
    }
    ProtocolStep out{BranchEnsemble{}, DensityMatrix::normalized(2, d, kept * kept.adjoint()),
                     success, std::max(0.0, 1.0 - retained / success)};
    if (r == 1) {
        out.ensemble.weights = {1.0};
        out.ensemble.branches = {FockStateVector::normalized(2, d, kept.col(0))};
    } else {
        out.ensemble = BranchEnsemble::from_density(out.state);
    }
    return out;
}

ProtocolStep b_protocol_step(const DensityMatrix& rho) {
    return b_protocol_step(BranchEnsemble::from_density(rho));
}

// ---------------------------------------------------------------------------

double log_negativity(const DensityMatrix& rho) {
    require_two_modes(rho.modes(), "log_negativity");
    const Eigen::MatrixXcd pt = partial_transpose(rho, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const double norm = es.eigenvalues().cwiseAbs().sum();
    return std::max(0.0, std::log2(norm));
}

double log_negativity(const FockStateVector& psi) {
    require_two_modes(psi.modes(), "log_negativity");
    const Eigen::Index d = static_cast<Eigen::Index>(psi.cutoff());
    const Eigen::MatrixXcd c = psi.amplitudes().reshaped(d, d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
    const double s = svd.singularValues().sum();
    return std::max(0.0, 2.0 * std::log2(s));
}

double delta_M2(double N) {
    if (!(N >= 0.0)) throw ArgumentError("mean photon number must be non-negative");
    return 2.0 * h(0.5 * N + 0.5);
}

double renormalized_ng(const DensityMatrix& rho) {
    require_two_modes(rho.modes(), "renormalized_ng");
    const double N = mean_photon_number(rho, 0) + mean_photon_number(rho, 1);
    if (N < 1e-12) throw PreconditionError("renormalized_ng is undefined for the vacuum");
    return delta_B(rho).value / delta_M2(N);
}

// ---------------------------------------------------------------------------

namespace {

ProtocolRecord make_record(std::size_t step, const DensityMatrix& rho, double success,
                           double leakage, double en0) {
    ProtocolRecord rec;
    rec.step = step;
    rec.success_prob = success;
    rec.delta_B = delta_B(rho).value;
    rec.E_N = log_negativity(rho);
    rec.leakage = leakage;
    if (en0 > tolerances().eig) rec.Delta = (rec.E_N - en0) / en0;
    return rec;
}

}  // namespace

void ProtocolTrace::write_csv(std::ostream& os) const {
    os << "step,success_prob,delta_B,E_N,Delta_i,leakage\n";
    os.precision(12);
    for (const auto& r : records) {
        os << r.step << ',' << r.success_prob << ',' << r.delta_B << ',' << r.E_N << ',';
        if (r.Delta) os << *r.Delta;
        else os << "n/a";
        os << ',' << r.leakage << '\n';
    }
}

ProtocolTrace b_protocol_run(const DensityMatrix& rho, std::size_t steps) {
    if (steps < 1) throw ArgumentError("b_protocol_run requires steps >= 1");
    require_two_modes(rho.modes(), "b_protocol_run");
    ProtocolTrace trace{{}, rho};
    const double en0 = log_negativity(rho);
    trace.records.push_back(make_record(0, rho, 1.0, 0.0, en0));
    BranchEnsemble e = BranchEnsemble::from_density(rho);
    for (std::size_t s = 1; s <= steps; ++s) {
        ProtocolStep st = b_protocol_step(e);
        trace.records.push_back(make_record(s, st.state, st.success_prob, st.leakage, en0));
        trace.final_state = std::move(st.state);
        e = std::move(st.ensemble);
    }
    return trace;
}

ProtocolLimit b_protocol_limit(const DensityMatrix& rho, std::size_t max_steps, double tol) {
    require_two_modes(rho.modes(), "b_protocol_limit");
    ProtocolLimit lim;
    const double en0 = log_negativity(rho);
    if (!(en0 > tolerances().eig)) return lim;
    BranchEnsemble e = BranchEnsemble::from_density(rho);
    double prev = 0.0;
    for (std::size_t s = 1; s <= max_steps; ++s) {
        ProtocolStep st = b_protocol_step(e);
        const double gain = (log_negativity(st.state) - en0) / en0;
        lim.Delta = gain;
        lim.steps = s;
        if (std::abs(gain - prev) < tol) {
            lim.converged = true;
            break;
        }
        prev = gain;
        e = std::move(st.ensemble);
    }
    return lim;
}

// ---------------------------------------------------------------------------

TProtocolOutput t_protocol_output(double r, Subtraction subtracted, std::size_t cutoff) {
    if (!(r > 0.0)) throw ArgumentError("t_protocol_output requires r > 0");
    if (cutoff == 0) {
        cutoff = gaussian_cutoff(single_mode_gaussian_data({cplx(0.0), r, 0.0, 0.0}),
                                 tolerances().tail) + 2;
    }
    const FockStateVector sq = squeezed_vacuum(r, 0.0, cutoff);
    const FockStateVector vac = vacuum(1, cutoff);
    const double theta = std::numbers::pi / 4.0;
    const std::size_t nA = 1;
    const std::size_t nB = subtracted == Subtraction::Two ? 1 : 0;

    // a_A^{nA} a_B^{nB} B(pi/4) S_A(r) |00>
    const FockStateVector mixed = beam_splitter(tensor(sq, vac), theta);
    Eigen::VectorXcd u = mixed.amplitudes();
    for (std::size_t k = 0; k < nA; ++k) u = annihilate_mode(u, cutoff, 0);
    for (std::size_t k = 0; k < nB; ++k) u = annihilate_mode(u, cutoff, 1);
    if (u.norm() < 1e-12) throw NumericalError("photon subtraction annihilates the state");

    // B(pi/4) a_A^{nA+nB} S_A(r) |00>
    const Eigen::VectorXcd lowered = annihilate(sq.amplitudes(), nA + nB);
    if (lowered.norm() < 1e-12) throw NumericalError("photon subtraction annihilates the state");
    const FockStateVector pre = FockStateVector::normalized(1, cutoff, lowered);
    const FockStateVector commuted = beam_splitter(tensor(pre, vac), theta);

    FockStateVector out = FockStateVector::normalized(2, cutoff, u, sq.leakage());
    const cplx ov = commuted.amplitudes().dot(out.amplitudes());
    const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
    const double residual = (out.amplitudes() - phase * commuted.amplitudes()).norm();
    return {std::move(out), residual};
}

}  // namespace nongauss
