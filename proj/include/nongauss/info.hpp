#pragma once

// Entropic quantities and their Gaussian counterparts, plus the quantum
// Fisher information.  Entropies are in nats unless a base is given.
//
// Gaps, with delta = delta_B:
//   I(A:B)   - I_G(A:B)   = delta[AB] - delta[A] - delta[B]   (Delta_2)
//   S_G(A|B) - S(A|B)     = delta[AB] - delta[B]              (Delta_1)
//   chi of a pure ensemble = S(tau) - delta[rho_bar]

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "nongauss/config.hpp"
#include "nongauss/fock.hpp"
#include "nongauss/gaussian.hpp"

namespace nongauss {

struct Ensemble {
    std::vector<double> probabilities;
    std::vector<DensityMatrix> states;

    /// Throws ArgumentError for mismatched dimensions or probabilities that
    /// are not positive or do not sum to one within tol_norm.
    void validate() const;
    DensityMatrix average() const;
};

struct HolevoReport {
    double chi = 0.0;
    bool pure_members = false;
    double identity_residual = 0.0;  // |chi - (S(tau) - delta_B[rho_bar])| when pure
};
HolevoReport holevo_chi(const Ensemble& e, LogBase base = LogBase::Nat);

struct MutualInformationReport {
    double I = 0.0;
    double I_G = 0.0;
    double Delta2 = 0.0;             // delta[AB] - delta[A] - delta[B]
    double identity_residual = 0.0;  // |(I - I_G) - Delta2|
};
MutualInformationReport mutual_information(const DensityMatrix& rho_ab,
                                           LogBase base = LogBase::Nat);
double gaussian_mutual_information(const GaussianData& g, LogBase base = LogBase::Nat);

struct ConditionalEntropyReport {
    double S = 0.0;      // S(A|B)
    double S_G = 0.0;    // Gaussian value at the same moments
    double Delta1 = 0.0; // delta[AB] - delta[B]
    double identity_residual = 0.0;
};
ConditionalEntropyReport conditional_entropy(const DensityMatrix& rho_ab,
                                             LogBase base = LogBase::Nat);
double gaussian_conditional_entropy(const GaussianData& g, LogBase base = LogBase::Nat);

/// rho at lambda_0 with its derivative.
struct StateFamily {
    DensityMatrix rho;
    Eigen::MatrixXcd derivative;

    /// Central difference (forward when `forward` is set).
    static StateFamily finite_difference(const std::function<DensityMatrix(double)>& family,
                                         double lambda0, double step, bool forward = false);
};

/// 2 sum |<m| d rho |n>|^2 / (p_n + p_m) over pairs with p_n + p_m above eig_floor.
double qfi(const StateFamily& f);

/// Root fidelity tr |sqrt(a) sqrt(b)|.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// 8 (1 - F(rho_lambda, rho_{lambda + eps})) / eps^2.
double bures_qfi(const std::function<DensityMatrix(double)>& family, double lambda0, double eps);

struct QfiBoundEntry {
    double eps = 0.0;
    double rhs = 0.0;        // 2 delta_B[rho_{lambda0 + eps}] / eps^2
    double tol_bound = 0.0;  // max(1e-4, 10 eps)
    bool holds = true;
};
struct QfiBoundReport {
    double H = 0.0;
    std::vector<QfiBoundEntry> entries;
    bool holds = true;
};

/// Requires rho_{lambda0} Gaussian and the first and second moments of every
/// rho_{lambda0 + eps} to match within 1e-8 (PreconditionError otherwise).
QfiBoundReport qfi_ng_bound_check(const StateFamily& at_lambda0,
                                  const std::function<DensityMatrix(double)>& family,
                                  double lambda0, const std::vector<double>& eps);

/// Photon-number weights proportional to base_n e^{t n}, with t chosen so the
/// mean is N.
std::vector<double> mean_matched_weights(const std::vector<double>& base, double N);

/// lambda -> (1 - lambda) nu(N) + lambda rho_D on the cutoff base.size().
/// rho_D is diagonal with mean_matched_weights(base, <n>_nu), so the first and
/// second moments do not depend on lambda.
std::function<DensityMatrix(double)> thermal_mixture_family(double N,
                                                            const std::vector<double>& base);

}  // namespace nongauss
