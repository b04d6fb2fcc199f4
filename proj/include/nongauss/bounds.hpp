#pragma once

// Lower bounds on delta_B from photon counting.
//
//   epsilon_A = S(nu_M) - H(q)       Fock-diagonal rho, detector efficiency eta
//   epsilon_B = S(nu_N) - H(p_nn)    <a> = <a^2> = 0, ideal detection
//   epsilon_C = S(nu_M) - H(q)       <a> = <a^2> = 0, efficiency eta
//   epsilon_D = S(tau)  - H(p_nn)    any rho with known moments
//   epsilon_E = S(tau_eta) - H(q)    any rho, tau_eta from sigma -> eta sigma + (1-eta)/2 I
//
// q_m = Tr[rho Pi_m] with Pi_m = sum_{s>=m} C(s,m) eta^m (1-eta)^{s-m} |s><s|.

#include <cstddef>
#include <istream>
#include <vector>

#include "nongauss/config.hpp"
#include "nongauss/fock.hpp"

namespace nongauss {

class PhotodetectionPOVM {
public:
    PhotodetectionPOVM(double eta, std::size_t cutoff);

    double eta() const noexcept { return eta_; }
    std::size_t cutoff() const noexcept { return cutoff_; }
    /// alpha_{m,s}(eta); zero for s < m.
    double weight(std::size_t m, std::size_t s) const;
    /// Diagonal of Pi_m.
    std::vector<double> element(std::size_t m) const;

private:
    double eta_;
    std::size_t cutoff_;
    std::vector<double> table_;  // row s, column m
};

/// Single-mode rho; cutoffs must match.
std::vector<double> detection_statistics(const DensityMatrix& rho, const PhotodetectionPOVM& povm);

/// From a measured distribution; q is renormalised.
double epsilon_A(const std::vector<double>& q, LogBase base = LogBase::Nat);
/// PreconditionError unless rho is Fock-diagonal.
double epsilon_A(const DensityMatrix& rho, double eta, LogBase base = LogBase::Nat);

/// PreconditionError unless |<a>| and |<a^2>| are below 1e-8.
double epsilon_B(const DensityMatrix& rho, LogBase base = LogBase::Nat);
double epsilon_C(const DensityMatrix& rho, double eta, LogBase base = LogBase::Nat);
double epsilon_D(const DensityMatrix& rho, LogBase base = LogBase::Nat);
double epsilon_E(const DensityMatrix& rho, double eta, LogBase base = LogBase::Nat);

/// "m,count" rows (an optional header line is skipped); returns the
/// normalised distribution indexed by m.
std::vector<double> read_histogram(std::istream& in);

}  // namespace nongauss
