#include "nongauss/info.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nongauss/errors.hpp"
#include "nongauss/measures.hpp"
#include "nongauss/zoo.hpp"

namespace nongauss {

namespace {

constexpr double kIdentityTol = 1e-6;
constexpr double kHolevoIdentityTol = 1e-8;
constexpr double kMomentTol = 1e-8;

void require_two_modes(const DensityMatrix& rho, const char* what) {
    if (rho.modes() != 2) throw ArgumentError(std::string(what) + " requires a two-mode state");
}

void check_identity(double residual, double tol, const char* what) {
    if (residual > tol) {
        throw NumericalError(std::string(what) + " identity violated by " +
                             std::to_string(residual));
    }
}

DensityMatrix reduced(const DensityMatrix& rho, std::size_t mode) {
    const std::array<std::size_t, 1> keep{mode};
    return partial_trace(rho, keep);
}

GaussianData reduced(const GaussianData& g, std::size_t mode) {
    const std::array<std::size_t, 1> keep{mode};
    return marginal(g, keep);
}

double moment_distance(const GaussianData& a, const GaussianData& b) {
    return std::max((a.X - b.X).cwiseAbs().maxCoeff(), (a.sigma - b.sigma).cwiseAbs().maxCoeff());
}

}  // namespace

// ---------------------------------------------------------------------------

void Ensemble::validate() const {
    if (states.empty() || states.size() != probabilities.size()) {
        throw ArgumentError("ensemble needs one probability per state");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!(probabilities[i] > 0.0)) throw ArgumentError("ensemble probabilities must be positive");
        if (states[i].modes() != states[0].modes() || states[i].cutoff() != states[0].cutoff()) {
            throw ArgumentError("ensemble members must share modes and cutoff");
        }
        total += probabilities[i];
    }
    if (std::abs(total - 1.0) > tolerances().norm) {
        throw ArgumentError("ensemble probabilities sum to " + std::to_string(total));
    }
}

DensityMatrix Ensemble::average() const {
    validate();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(states[0].matrix().rows(), states[0].matrix().cols());
    double leak = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        m += probabilities[i] * states[i].matrix();
        leak += probabilities[i] * states[i].leakage();
    }
    return DensityMatrix::normalized(states[0].modes(), states[0].cutoff(), std::move(m), leak);
}

HolevoReport holevo_chi(const Ensemble& e, LogBase base) {
    const DensityMatrix avg = e.average();
    HolevoReport r;
    const double s_avg = von_neumann_entropy(avg, base);
    double s_members = 0.0;
    r.pure_members = true;
    for (std::size_t i = 0; i < e.states.size(); ++i) {
        s_members += e.probabilities[i] * von_neumann_entropy(e.states[i], base);
        if (std::abs(purity(e.states[i]) - 1.0) > tolerances().norm) r.pure_members = false;
    }
    r.chi = s_avg - s_members;
    if (r.chi < 0.0 && r.chi > -1e-9) r.chi = 0.0;
    if (r.pure_members) {
        const double s_tau = gaussian_entropy(moments(avg), base);
        r.identity_residual = std::abs(r.chi - (s_tau - delta_B(avg, base).value));
        check_identity(r.identity_residual, kHolevoIdentityTol, "pure-ensemble Holevo");
    }
    return r;
}

double gaussian_mutual_information(const GaussianData& g, LogBase base) {
    if (g.modes() != 2) throw ArgumentError("mutual information requires two modes");
    return gaussian_entropy(reduced(g, 0), base) + gaussian_entropy(reduced(g, 1), base) -
           gaussian_entropy(g, base);
}

MutualInformationReport mutual_information(const DensityMatrix& rho_ab, LogBase base) {
    require_two_modes(rho_ab, "mutual_information");
    const DensityMatrix ra = reduced(rho_ab, 0);
    const DensityMatrix rb = reduced(rho_ab, 1);
    MutualInformationReport r;
    r.I = von_neumann_entropy(ra, base) + von_neumann_entropy(rb, base) -
          von_neumann_entropy(rho_ab, base);
    r.I_G = gaussian_mutual_information(moments(rho_ab), base);
    r.Delta2 = delta_B(rho_ab, base).value - delta_B(ra, base).value - delta_B(rb, base).value;
    r.identity_residual = std::abs((r.I - r.I_G) - r.Delta2);
    check_identity(r.identity_residual, kIdentityTol, "mutual-information gap");
    return r;
}

double gaussian_conditional_entropy(const GaussianData& g, LogBase base) {
    if (g.modes() != 2) throw ArgumentError("conditional entropy requires two modes");
    return gaussian_entropy(g, base) - gaussian_entropy(reduced(g, 1), base);
}

ConditionalEntropyReport conditional_entropy(const DensityMatrix& rho_ab, LogBase base) {
    require_two_modes(rho_ab, "conditional_entropy");
    const DensityMatrix rb = reduced(rho_ab, 1);
    ConditionalEntropyReport r;
    r.S = von_neumann_entropy(rho_ab, base) - von_neumann_entropy(rb, base);
    r.S_G = gaussian_conditional_entropy(moments(rho_ab), base);
    r.Delta1 = delta_B(rho_ab, base).value - delta_B(rb, base).value;
    r.identity_residual = std::abs((r.S_G - r.S) - r.Delta1);
    check_identity(r.identity_residual, kIdentityTol, "conditional-entropy gap");
    return r;
}

// ---------------------------------------------------------------------------

StateFamily StateFamily::finite_difference(const std::function<DensityMatrix(double)>& family,
                                           double lambda0, double step, bool forward) {
    if (!(step > 0.0)) throw ArgumentError("finite-difference step must be positive");
    DensityMatrix rho = family(lambda0);
    Eigen::MatrixXcd d;
    if (forward) {
        d = (family(lambda0 + step).matrix() - rho.matrix()) / step;
    } else {
        d = (family(lambda0 + step).matrix() - family(lambda0 - step).matrix()) / (2.0 * step);
    }
    return {std::move(rho), std::move(d)};
}

double qfi(const StateFamily& f) {
    const Eigen::MatrixXcd& d = f.derivative;
    if (d.rows() != f.rho.matrix().rows() || d.cols() != f.rho.matrix().cols()) {
        throw ArgumentError("derivative dimensions do not match the state");
    }
    if ((d - d.adjoint()).cwiseAbs().maxCoeff() > tolerances().herm) {
        throw ArgumentError("state derivative is not Hermitian");
    }
    if (std::abs(d.trace()) > 1e-10) throw ArgumentError("state derivative is not traceless");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.rho.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Eigen::VectorXd& p = es.eigenvalues();
    const Eigen::MatrixXcd dm = es.eigenvectors().adjoint() * d * es.eigenvectors();
    const double floor = tolerances().eig_floor;
    double H = 0.0;
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        for (Eigen::Index m = 0; m < p.size(); ++m) {
            const double s = std::max(0.0, p(n)) + std::max(0.0, p(m));
            if (s < floor) continue;
            H += 2.0 * std::norm(dm(m, n)) / s;
        }
    }
    return H;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dimension() != b.dimension()) throw ArgumentError("fidelity of mismatched states");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.matrix());
    if (ea.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Eigen::VectorXd root = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sa = ea.eigenvectors() * root.asDiagonal() * ea.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(sa * b.matrix() * sa, Eigen::EigenvaluesOnly);
    if (em.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    return em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double bures_qfi(const std::function<DensityMatrix(double)>& family, double lambda0, double eps) {
    if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
    const double F = fidelity(family(lambda0), family(lambda0 + eps));
    return 8.0 * (1.0 - F) / (eps * eps);
}

QfiBoundReport qfi_ng_bound_check(const StateFamily& at_lambda0,
                                  const std::function<DensityMatrix(double)>& family,
                                  double lambda0, const std::vector<double>& eps) {
    const GaussianData g0 = moments(at_lambda0.rho);
    const double ng0 = delta_B(at_lambda0.rho).value;
    if (ng0 > kMomentTol) {
        throw PreconditionError("qfi_ng_bound_check needs a Gaussian state at lambda0 (delta_B = " +
                                std::to_string(ng0) + ")");
    }
    QfiBoundReport rep;
    rep.H = qfi(at_lambda0);
    for (double e : eps) {
        if (!(e > 0.0)) throw ArgumentError("eps must be positive");
        const DensityMatrix rho = family(lambda0 + e);
        const double dist = moment_distance(moments(rho), g0);
        if (dist > kMomentTol) {
            throw PreconditionError("family changes the moments by " + std::to_string(dist) +
                                    " at eps = " + std::to_string(e));
        }
        QfiBoundEntry entry;
        entry.eps = e;
        entry.rhs = 2.0 * delta_B(rho).value / (e * e);
        entry.tol_bound = std::max(1e-4, 10.0 * e);
        entry.holds = rep.H <= entry.rhs + entry.tol_bound;
        rep.holds = rep.holds && entry.holds;
        rep.entries.push_back(entry);
    }
    return rep;
}

std::vector<double> mean_matched_weights(const std::vector<double>& base, double N) {
    if (base.size() < 2) throw ArgumentError("need at least two photon-number weights");
    if (!(N > 0.0) || !(N < static_cast<double>(base.size() - 1))) {
        throw ArgumentError("target mean is outside the support");
    }
    for (double b : base) {
        if (!(b > 0.0)) throw ArgumentError("base weights must be positive");
    }
    auto tilted = [&](double t) {
        std::vector<double> w(base.size());
        double mx = -1e300;
        for (std::size_t n = 0; n < base.size(); ++n) {
            w[n] = std::log(base[n]) + t * static_cast<double>(n);
            mx = std::max(mx, w[n]);
        }
        double z = 0.0;
        for (double& x : w) {
            x = std::exp(x - mx);
            z += x;
        }
        for (double& x : w) x /= z;
        return w;
    };
    auto mean = [](const std::vector<double>& w) {
        double m = 0.0;
        for (std::size_t n = 0; n < w.size(); ++n) m += static_cast<double>(n) * w[n];
        return m;
    };
    double lo = -50.0;
    double hi = 50.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean(tilted(mid)) < N) lo = mid;
        else hi = mid;
    }
    return tilted(0.5 * (lo + hi));
}

std::function<DensityMatrix(double)> thermal_mixture_family(double N,
                                                            const std::vector<double>& base) {
    const std::size_t d = base.size();
    DensityMatrix nu = thermal(N, d);
    double mean_nu = 0.0;
    for (std::size_t n = 0; n < d; ++n) mean_nu += static_cast<double>(n) * nu(n, n).real();
    const std::vector<double> w = mean_matched_weights(base, mean_nu);
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t n = 0; n < d; ++n) diag(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = w[n];
    Eigen::MatrixXcd thermal_part = nu.matrix();
    const double leak = nu.leakage();
    return [thermal_part, diag, d, leak](double lambda) {
        if (lambda < 0.0 || lambda > 1.0) throw ArgumentError("mixing weight must lie in [0, 1]");
        return DensityMatrix::normalized(1, d, (1.0 - lambda) * thermal_part + lambda * diag, leak);
    };
}

}  // namespace nongauss
