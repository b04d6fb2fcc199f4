#pragma once

// Entanglement distillation protocols on two-mode states.
//
// B-protocol step: two copies rho (x) rho on (A1 B1) (A2 B2), balanced beam
// splitters on A1A2 and B1B2, vacuum post-selection on A2 and B2.  The
// four-mode object is never formed; each pair of pure branches contracts to
//
//   out(P, Q) = 2^{-(P+Q)/2} sum sqrt(C(P,n) C(Q,m)) psi(n, m) phi(P-n, Q-m).
//
// T-protocol: photon subtraction on a squeezed vacuum split at a balanced
// beam splitter.

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "nongauss/fock.hpp"

namespace nongauss {

enum class BrowneVariant { A, B };

/// A: (|00> + lambda |11>)/sqrt(1 + lambda^2).  B: same diagonal, halved
/// coherences.
DensityMatrix browne_state(BrowneVariant variant, double lambda, std::size_t cutoff = 8);

/// Mixture of pure two-mode branches; weights below 1e-12 are pruned.
struct BranchEnsemble {
    std::vector<double> weights;
    std::vector<FockStateVector> branches;

    static BranchEnsemble from_density(const DensityMatrix& rho);
    DensityMatrix to_density() const;
    std::size_t cutoff() const;
    std::size_t rank() const noexcept { return branches.size(); }
};

struct ProtocolStep {
    BranchEnsemble ensemble;
    DensityMatrix state;
    double success_prob = 1.0;
    double leakage = 0.0;  // fraction of the post-selected mass cropped by the cutoff
};

/// One B-protocol step at the input cutoff.  The output is renormalised
/// within the cutoff; success_prob is the full pre-normalisation trace.
/// Throws NumericalError when success_prob < 1e-12.
ProtocolStep b_protocol_step(const BranchEnsemble& input);
ProtocolStep b_protocol_step(const DensityMatrix& rho);

struct ProtocolRecord {
    std::size_t step = 0;
    double success_prob = 1.0;
    double delta_B = 0.0;
    double E_N = 0.0;
    std::optional<double> Delta;  // empty when E_N at step 0 vanishes
    double leakage = 0.0;
};

struct ProtocolTrace {
    std::vector<ProtocolRecord> records;  // records[0] is the input state
    DensityMatrix final_state;

    void write_csv(std::ostream& os) const;
};

/// Runs `steps` iterations (steps >= 1).
ProtocolTrace b_protocol_run(const DensityMatrix& rho, std::size_t steps);

/// Iterates until |Delta(i) - Delta(i-1)| < tol and returns the last gain.
struct ProtocolLimit {
    std::optional<double> Delta;
    std::size_t steps = 0;
    bool converged = false;
};
ProtocolLimit b_protocol_limit(const DensityMatrix& rho, std::size_t max_steps = 60,
                               double tol = 1e-6);

/// log2 || rho^Gamma ||_1 (two modes).  The vector form uses the Schmidt
/// coefficients.
double log_negativity(const DensityMatrix& rho);
double log_negativity(const FockStateVector& psi);

/// 2 h(N/2 + 1/2) in nats.
double delta_M2(double N);

/// delta_B / delta_M2(N); PreconditionError for N = 0.
double renormalized_ng(const DensityMatrix& rho);

enum class Subtraction { One, Two };

struct TProtocolOutput {
    FockStateVector state;
    double commuted_residual = 0.0;  // min over phases of ||u - e^{i t} v||
};

/// cutoff = 0 picks the squeezed-vacuum cutoff for tail tol_tail plus two.
TProtocolOutput t_protocol_output(double r, Subtraction subtracted, std::size_t cutoff = 0);

}  // namespace nongauss
