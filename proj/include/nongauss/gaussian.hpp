#pragma once

// First and second moments, symplectic spectra, Gaussian entropies and the
// reference Gaussian state.
//
// Conventions: hbar = 1, R = (q_1, p_1, ..., q_n, p_n) with
// q = (a + a^dagger)/sqrt(2), p = (a - a^dagger)/(i sqrt(2)), so the vacuum
// has sigma = I/2.  The single-mode squeezer is
//
//     S(zeta) = exp[(zeta a^2 - zeta^* a^dagger^2) / 2],   zeta = r e^{i phi},
//
// for which D(alpha) S(zeta) nu(n) S^dagger D^dagger has
//     sigma_11 = (n+1/2)[cosh 2r - sinh 2r cos phi]
//     sigma_22 = (n+1/2)[cosh 2r + sinh 2r cos phi]
//     sigma_12 = (n+1/2) sinh 2r sin phi.

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "nongauss/config.hpp"
#include "nongauss/fock.hpp"

namespace nongauss {

struct GaussianData {
    Eigen::VectorXd X;      // length 2n
    Eigen::MatrixXd sigma;  // 2n x 2n

    std::size_t modes() const noexcept { return static_cast<std::size_t>(X.size() / 2); }
};

/// Throws NumericalError unless sigma is symmetric (tol_herm) and its smallest
/// symplectic eigenvalue is at least 1/2 - tol_symp.  1 or 2 modes.
void validate(const GaussianData& g);

struct SingleModeGaussianParams {
    cplx alpha{0.0, 0.0};
    double r = 0.0;
    double phi = 0.0;  // in [0, 2 pi)
    double n_th = 0.0;
};

struct SymplecticSpectrum {
    double d_minus = 0.5;
    double d_plus = 0.5;
};

/// Normal-ordered ladder expectations: a(j) = <a_j>, aa(j,k) = <a_j a_k>,
/// ada(j,k) = <a_j^dagger a_k>.
struct LadderMoments {
    Eigen::VectorXcd a;
    Eigen::MatrixXcd aa;
    Eigen::MatrixXcd ada;
};

/// Exact expectations in the truncated space.  Throws TruncationError when the
/// state's leakage exceeds leak_max.
LadderMoments ladder_moments(const DensityMatrix& rho);
LadderMoments ladder_moments(const FockStateVector& psi);

GaussianData gaussian_data(const LadderMoments& m);

/// X and sigma of a 1..4 mode state (symmetrised).
GaussianData moments(const DensityMatrix& rho);
GaussianData moments(const FockStateVector& psi);

/// (x+1/2) log(x+1/2) - (x-1/2) log(x-1/2), with h(1/2) = 0.
double h(double x, LogBase base = LogBase::Nat);

/// Closed-form two-mode spectrum from the local invariants; for one mode both
/// fields hold sqrt(det sigma).
SymplecticSpectrum symplectic_eigenvalues(const GaussianData& g);

/// h(sqrt det sigma) for one mode, h(d_-) + h(d_+) for two.
double gaussian_entropy(const GaussianData& g, LogBase base = LogBase::Nat);

/// 1 / (2^n sqrt det sigma).
double gaussian_purity(const GaussianData& g);

/// Moments of the listed modes only.
GaussianData marginal(const GaussianData& g, std::span<const std::size_t> modes);

/// sigma -> eta sigma + (1 - eta) I/2, X -> sqrt(eta) X (pure loss on every mode).
GaussianData loss_transformed(const GaussianData& g, double eta);

SingleModeGaussianParams fit_single_mode_gaussian(const GaussianData& g);
GaussianData single_mode_gaussian_data(const SingleModeGaussianParams& p);

/// <m|tau|n> for m, n < cutoff of the single-mode Gaussian state with the
/// given moments.  Elements are exact (no truncation of the infinite state);
/// the block's trace is one minus the tail beyond the cutoff.
Eigen::MatrixXcd gaussian_fock_block(const GaussianData& g, std::size_t cutoff);

/// Gaussian state at `cutoff`; throws TruncationError when its tail mass
/// exceeds tol_tail.
DensityMatrix gaussian_state(const GaussianData& g, std::size_t cutoff);
DensityMatrix gaussian_state(const SingleModeGaussianParams& p, std::size_t cutoff);

/// Smallest cutoff whose block holds all but `tail` of the state's trace and
/// reproduces its moments within tol_ref.
std::size_t gaussian_cutoff(const GaussianData& g, double tail);

/// Reference Gaussian state of a single-mode rho.  The returned state lives at
/// a cutoff >= rho.cutoff() chosen so that its moments match those of rho
/// within tol_ref; leakage records the (renormalised) tail mass.
DensityMatrix reference_gaussian_state(const DensityMatrix& rho);

}  // namespace nongauss
