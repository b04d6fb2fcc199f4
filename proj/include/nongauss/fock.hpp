#pragma once

// Truncated Fock-space states and the linear-algebra primitives used by every
// other module.
//
// Basis convention: each mode holds photon numbers 0 .. cutoff-1, and a
// multi-mode basis index is little-endian mixed radix,
//
//     index = n_0 + n_1 * d + n_2 * d^2 + ...
//
// so mode 0 varies fastest.  All modes of one object share the same cutoff d.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nongauss/config.hpp"

namespace nongauss {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxModes = 4;

/// Photon numbers of each mode, unused trailing entries are zero.
using PhotonNumbers = std::array<std::size_t, kMaxModes>;

PhotonNumbers decode_index(std::size_t index, std::size_t modes, std::size_t cutoff);
std::size_t encode_index(const PhotonNumbers& n, std::size_t modes, std::size_t cutoff);

/// cutoff^modes, throwing ResourceError when above `limit`.
std::size_t hilbert_dimension(std::size_t modes, std::size_t cutoff, std::size_t limit);

/// Pure state over the truncated basis.
class FockStateVector {
public:
    /// Validates the length and that the norm is within tol_norm of one.
    FockStateVector(std::size_t modes, std::size_t cutoff, Eigen::VectorXcd amplitudes,
                    double leakage = 0.0);

    /// Normalises `amplitudes` first; throws NumericalError for a null vector.
    static FockStateVector normalized(std::size_t modes, std::size_t cutoff,
                                      Eigen::VectorXcd amplitudes, double leakage = 0.0);

    static FockStateVector basis(std::size_t modes, std::size_t cutoff,
                                 std::span<const std::size_t> photons);

    std::size_t modes() const noexcept { return modes_; }
    std::size_t cutoff() const noexcept { return cutoff_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
    double leakage() const noexcept { return leakage_; }

private:
    std::size_t modes_;
    std::size_t cutoff_;
    Eigen::VectorXcd amps_;
    double leakage_;
};

/// Mixed state over the truncated basis.
///
/// Construction checks dimensions, Hermiticity (tol_herm) and unit trace
/// (tol_norm); the matrix is symmetrised on the way in.  Positivity is only
/// checked on demand by validate_positive() because it needs a diagonalisation.
class DensityMatrix {
public:
    DensityMatrix(std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd matrix,
                  double leakage = 0.0);

    /// |psi><psi|, inheriting the vector's leakage.
    explicit DensityMatrix(const FockStateVector& psi);

    /// Divides by the trace after checking it is positive.
    static DensityMatrix normalized(std::size_t modes, std::size_t cutoff,
                                    Eigen::MatrixXcd matrix, double leakage = 0.0);

    std::size_t modes() const noexcept { return modes_; }
    std::size_t cutoff() const noexcept { return cutoff_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
    cplx operator()(std::size_t i, std::size_t j) const {
        return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double leakage() const noexcept { return leakage_; }

    /// True when every off-diagonal entry is exactly zero.
    bool is_diagonal() const;

    /// Throws NumericalError when the smallest eigenvalue is below -tol_eig.
    void validate_positive() const;

private:
    std::size_t modes_;
    std::size_t cutoff_;
    Eigen::MatrixXcd rho_;
    double leakage_;
};

/// Measure value together with the numbers needed to audit it.
struct MeasureReport {
    double value = 0.0;
    std::map<std::string, double> diagnostics;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
FockStateVector tensor(const FockStateVector& a, const FockStateVector& b);

/// Reduced state on the modes in `keep` (kept in increasing mode order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const FockStateVector& psi, std::span<const std::size_t> keep);

/// Partial transpose of a two-mode state with respect to `mode` (0 or 1).
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, std::size_t mode);

double purity(const DensityMatrix& rho);

/// Tr[a b].
double overlap(const DensityMatrix& a, const DensityMatrix& b);

/// Eigenvalues of rho with entries in [-tol_eig, 0) set to zero.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    double clamped_mass = 0.0;  // total magnitude of the clamped eigenvalues
};

/// Throws NumericalError when an eigenvalue lies below -tol_eig.
Spectrum clamped_spectrum(const DensityMatrix& rho);

double von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::Nat);

/// -sum p log p over a probability vector, 0 log 0 := 0.
double shannon_entropy(std::span<const double> p, LogBase base = LogBase::Nat);

/// Entropy of an eigenvalue list, 0 log 0 := 0.
double spectrum_entropy(const Eigen::VectorXd& eigenvalues, LogBase base = LogBase::Nat);

/// Random state drawn from the Ginibre-induced measure: G is dimension x rank
/// with i.i.d. standard complex normal entries, rho = G G^dagger / Tr[G G^dagger].
DensityMatrix random_density_matrix(std::size_t modes, std::size_t cutoff, std::size_t rank,
                                    std::uint64_t seed);

/// sum_n photon number of `mode` weighted by the diagonal of rho.
double mean_photon_number(const DensityMatrix& rho, std::size_t mode);
double mean_photon_number(const FockStateVector& psi, std::size_t mode);

/// Zero-pads a state into a larger cutoff.
DensityMatrix embed(const DensityMatrix& rho, std::size_t cutoff);
FockStateVector embed(const FockStateVector& psi, std::size_t cutoff);

}  // namespace nongauss
