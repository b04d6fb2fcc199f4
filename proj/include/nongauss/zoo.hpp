#pragma once

// State families: Fock states and superpositions, Fock-diagonal mixtures, cat
// states, coherent / thermal / squeezed states and two-mode photon-number
// entangled states.  Every constructor refuses a cutoff that leaves more than
// tol_tail of the state's weight outside the truncated basis; the error
// carries the smallest adequate cutoff.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nongauss/config.hpp"
#include "nongauss/fock.hpp"
#include "nongauss/gaussian.hpp"

namespace nongauss {

FockStateVector fock(std::size_t n, std::size_t cutoff);
FockStateVector vacuum(std::size_t modes, std::size_t cutoff);
FockStateVector coherent(cplx alpha, std::size_t cutoff);

/// Thermal state with mean photon number N.
DensityMatrix thermal(double mean_photons, std::size_t cutoff);

/// S(zeta)|0> with zeta = r e^{i phi} in the squeezing convention of gaussian.hpp.
FockStateVector squeezed_vacuum(double r, double phi, std::size_t cutoff);

/// (|n> + |n+k>)/sqrt(2); k = 0 gives |n>.  k = 1, 2 are rejected.
FockStateVector fock_superposition(std::size_t n, std::size_t k, std::size_t cutoff);

/// sum_n q_n |n><n|.  Weights past the cutoff count as tail mass.
DensityMatrix diagonal_mixture(std::span<const double> weights, std::size_t cutoff);

/// Closed forms for a Fock-diagonal state whose reference is the thermal
/// state with the same mean photon number.
struct DiagonalNG {
    double mean_photons = 0.0;
    double delta_A = 0.0;
    double delta_B = 0.0;
};
DiagonalNG diagonal_ng(std::span<const double> weights, LogBase base = LogBase::Nat);

/// Poisson weights e^{-lambda} lambda^n / n!, n < count.
std::vector<double> poisson_weights(double lambda, std::size_t count);

/// Thermal weights N^n / (1+N)^{n+1}, n < count.
std::vector<double> thermal_weights(double mean_photons, std::size_t count);

/// (cos phi |alpha> + sin phi |-alpha>) / sqrt(1 + sin 2phi e^{-2|alpha|^2}).
FockStateVector cat(cplx alpha, double phi, std::size_t cutoff);

enum class PnesFamily { TwinBeam, TMC, PSSV, PASV };

struct PNESSpec {
    PnesFamily family = PnesFamily::TwinBeam;
    double parameter = 0.0;
    std::size_t cutoff = 0;
};

PnesFamily parse_pnes_family(const std::string& name);
std::string to_string(PnesFamily f);

/// Normalised Schmidt coefficients psi_n, n < cutoff.
Eigen::VectorXd pnes_coefficients(const PNESSpec& spec);

/// sum_n psi_n |n>|n>.
FockStateVector pnes(const PNESSpec& spec);

/// N = sum psi_n^2 n, C = sum psi_n psi_{n+1} (n+1) and the structured CM
/// with diagonal N + 1/2 and off-diagonal blocks diag(C, -C).
struct PnesMoments {
    double N = 0.0;
    double C = 0.0;
    GaussianData gaussian;
};
PnesMoments pnes_moments(const PNESSpec& spec);

}  // namespace nongauss
