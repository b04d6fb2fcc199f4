#pragma once

// Non-Gaussianity measures.
//
//   delta_A  squared Hilbert-Schmidt distance to the reference Gaussian state,
//            divided by the purity of rho
//   delta_B  relative entropy S(rho || tau) = S(tau) - S(rho)
//   delta_C  Wehrl-entropy difference H_W(tau) - H_W(rho)
//
// Diagnostics always carry "leakage", "cutoff_used" and
// "clamped_eigenvalue_mass".

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nongauss/channels.hpp"
#include "nongauss/config.hpp"
#include "nongauss/fock.hpp"
#include "nongauss/gaussian.hpp"

namespace nongauss {

MeasureReport delta_A(const DensityMatrix& rho);
MeasureReport delta_A(const FockStateVector& psi);

/// One or two modes.
MeasureReport delta_B(const DensityMatrix& rho, LogBase base = LogBase::Nat);
MeasureReport delta_B(const FockStateVector& psi, LogBase base = LogBase::Nat);

/// Square grid over alpha = x + i y centred on the origin.  half_width <= 0
/// selects the larger of sqrt(2(<n>+1)) + 5 and |<alpha>| + 6.5 standard
/// deviations of Q along its widest axis.
struct WehrlGrid {
    double half_width = 0.0;
    double spacing = 0.05;
};

/// -int Q log(pi Q) d^2 alpha on the grid, nats.  `residual` receives
/// |int Q d^2 alpha - 1|.
double wehrl_entropy(const DensityMatrix& rho, const WehrlGrid& grid, double* residual = nullptr);
double wehrl_entropy(const GaussianData& g, const WehrlGrid& grid, double* residual = nullptr);

/// Throws QuadratureError when either normalisation residual exceeds 1e-4.
MeasureReport delta_C(const DensityMatrix& rho, const WehrlGrid& grid = {});

struct InequalityCheck {
    bool holds = true;
    double margin = 0.0;  // delta_B - delta_A * mu
    double delta_A = 0.0;
    double delta_B = 0.0;
    double purity = 0.0;
};
InequalityCheck check_measure_inequality(const DensityMatrix& rho);

/// Random-state survey of delta_A.  Each sample draws a rank uniformly in
/// [1, d] and a Ginibre state with a seed derived from (seed, d, index).
/// The maximum and the histogram also include |1>, the mean does not.
struct A5Summary {
    std::size_t cutoff = 0;
    std::size_t samples = 0;
    double max_delta_A = 0.0;
    double mean_delta_A = 0.0;
    double mode_delta_A = 0.0;               // centre of the fullest bin
    std::vector<std::size_t> histogram;      // bins over [0, 1/2]
    double reference_fock1 = 0.0;            // delta_A(|1>) at this cutoff
    bool bounded = true;                     // max <= 1/2 + 1e-6
};
std::vector<A5Summary> conjecture_A5_sweep(std::size_t samples,
                                           const std::vector<std::size_t>& cutoffs,
                                           std::uint64_t seed, std::size_t threads = 1,
                                           std::size_t bins = 50);

/// Budgeted search for max over Gaussian probes of delta_B[E(rho_G)].  The
/// result is a lower bound on the supremum.
struct MapSearch {
    double energy_cap = 4.0;     // |alpha|^2 + (n_th + 1/2) cosh 2r - 1/2
    std::size_t budget = 500;    // channel applications
};
MeasureReport ng_of_map(const ChannelSpec& channel, const MapSearch& search = {});

}  // namespace nongauss
