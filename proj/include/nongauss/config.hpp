#pragma once

#include <cstddef>
#include <string>

namespace nongauss {

/// Numerical tolerances shared by all modules.
///
/// The active set is process-wide and read-only while computations run; call
/// set_tolerances() once at start-up (the CLI does this from
/// --tolerance-profile) before spawning workers.
struct Tolerances {
    double norm = 1e-8;       // trace / vector norm
    double herm = 1e-10;      // Hermiticity, max-norm of M - M^dagger
    double eig = 1e-10;       // most negative eigenvalue accepted (as -eig)
    double symp = 1e-7;       // physicality of covariance matrices
    double ref = 1e-6;        // reference-state moment matching
    double tail = 1e-10;      // constructor tail mass beyond the cutoff
    double leak_max = 1e-6;   // leakage accepted before moments are refused
    double clamp = 1e-6;      // window in which negative measures are set to 0
    double eig_floor = 1e-12; // QFI denominator floor
    std::size_t max_dimension = 4096;  // dense density-matrix dimension cap
};

const Tolerances& tolerances() noexcept;
void set_tolerances(const Tolerances& t) noexcept;

/// Named profiles: "default", "strict" (tolerances / 100) and "loose" (x 100).
Tolerances tolerance_profile(const std::string& name);

enum class LogBase { Nat, Two };

/// Factor converting a natural-log quantity into the given base.
double log_scale(LogBase base) noexcept;

}  // namespace nongauss
