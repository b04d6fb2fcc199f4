#pragma once

// Loss, phase diffusion and Kerr evolution, and the Gaussian unitaries
// displacement, squeezing and the two-mode beam splitter.
//
// Beam splitter: B(theta) = exp[theta (a_1^dagger a_2 - a_1 a_2^dagger)], so
// B a_1^dagger B^dagger = cos(theta) a_1^dagger - sin(theta) a_2^dagger and
// B(pi/4)|1,0> = (|1,0> - |0,1>)/sqrt(2).

#include <cstddef>
#include <string>

#include "nongauss/fock.hpp"

namespace nongauss {

struct ChannelSpec {
    enum class Kind { Loss, PhaseDiffusion, Kerr, Displace, Squeeze };
    Kind kind = Kind::Loss;
    double eta = 1.0;    // Loss
    double delta = 0.0;  // PhaseDiffusion
    double gamma = 0.0;  // Kerr
    cplx alpha{0.0, 0.0};  // Displace
    double r = 0.0;      // Squeeze
    double phi = 0.0;    // Squeeze

    static ChannelSpec loss(double eta);
    static ChannelSpec phase_diffusion(double delta);
    static ChannelSpec kerr(double gamma);
    static ChannelSpec displace(cplx alpha);
    static ChannelSpec squeeze(double r, double phi);

    bool is_gaussian() const noexcept {
        return kind != Kind::PhaseDiffusion && kind != Kind::Kerr;
    }
    /// Throws ArgumentError for out-of-range parameters.
    void validate() const;
};

/// "loss:0.8", "dephase:0.5", "kerr:0.01", "displace:1.0,0.5", "squeeze:0.3,0".
ChannelSpec parse_channel(const std::string& text);
std::string describe(const ChannelSpec& c);

/// Pure-loss Kraus map with transmissivity eta (single mode).
DensityMatrix loss(const DensityMatrix& rho, double eta);

/// rho_nm -> exp(-delta^2 (n-m)^2) rho_nm.
DensityMatrix phase_diffusion(const DensityMatrix& rho, double delta);

/// Amplitudes times exp(-i gamma n^2).
FockStateVector kerr(const FockStateVector& psi, double gamma);
DensityMatrix kerr(const DensityMatrix& rho, double gamma);

/// exp(alpha a^dagger - alpha^* a) and S(r e^{i phi}) applied through the
/// generator exponential at an enlarged internal cutoff and cropped back.
/// The cropped mass is added to the leakage and the state renormalised;
/// leakage above leak_max raises TruncationError.
FockStateVector displace(const FockStateVector& psi, cplx alpha);
DensityMatrix displace(const DensityMatrix& rho, cplx alpha);
FockStateVector squeeze(const FockStateVector& psi, double r, double phi);
DensityMatrix squeeze(const DensityMatrix& rho, double r, double phi);

/// Truncated-generator unitaries of size cutoff x cutoff.
Eigen::MatrixXcd displacement_matrix(cplx alpha, std::size_t cutoff);
Eigen::MatrixXcd squeeze_matrix(double r, double phi, std::size_t cutoff);

/// Beam splitter on modes (mode_a, mode_b).  Amplitudes are exact within each
/// photon-number block; output components beyond the cutoff count as leakage.
FockStateVector beam_splitter(const FockStateVector& psi, double theta, std::size_t mode_a = 0,
                              std::size_t mode_b = 1);
DensityMatrix beam_splitter(const DensityMatrix& rho, double theta, std::size_t mode_a = 0,
                            std::size_t mode_b = 1);

/// <p, q| B(theta) |n1, n2> (zero unless p + q = n1 + n2).
double beam_splitter_amplitude(std::size_t p, std::size_t q, std::size_t n1, std::size_t n2,
                               double theta);

DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelSpec& c);

}  // namespace nongauss
