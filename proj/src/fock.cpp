#include "nongauss/fock.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nongauss/errors.hpp"

namespace nongauss {

PhotonNumbers decode_index(std::size_t index, std::size_t modes, std::size_t cutoff) {
    PhotonNumbers n{};
    for (std::size_t k = 0; k < modes; ++k) {
        n[k] = index % cutoff;
        index /= cutoff;
    }
    return n;
}

std::size_t encode_index(const PhotonNumbers& n, std::size_t modes, std::size_t cutoff) {
    std::size_t index = 0;
    for (std::size_t k = modes; k-- > 0;) index = index * cutoff + n[k];
    return index;
}

std::size_t hilbert_dimension(std::size_t modes, std::size_t cutoff, std::size_t limit) {
    if (modes == 0 || modes > kMaxModes) {
        throw ArgumentError("number of modes must be between 1 and " +
                            std::to_string(kMaxModes));
    }
    if (cutoff == 0) throw ArgumentError("cutoff must be positive");
    std::size_t dim = 1;
    for (std::size_t k = 0; k < modes; ++k) {
        if (dim > limit / cutoff) {
            throw ResourceError("Hilbert dimension " + std::to_string(cutoff) + "^" +
                                std::to_string(modes) + " exceeds the configured maximum " +
                                std::to_string(limit));
        }
        dim *= cutoff;
    }
    return dim;
}

namespace {

constexpr std::size_t kMaxVectorDimension = std::size_t{1} << 22;

void check_dimension(std::size_t modes, std::size_t cutoff, Eigen::Index size,
                     std::size_t limit, const char* what) {
    const std::size_t dim = hilbert_dimension(modes, cutoff, limit);
    if (static_cast<std::size_t>(size) != dim) {
        std::ostringstream os;
        os << what << " has length " << size << " but " << cutoff << "^" << modes << " = " << dim
           << " was declared";
        throw ArgumentError(os.str());
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// FockStateVector

FockStateVector::FockStateVector(std::size_t modes, std::size_t cutoff,
                                 Eigen::VectorXcd amplitudes, double leakage)
    : modes_(modes), cutoff_(cutoff), amps_(std::move(amplitudes)), leakage_(leakage) {
    check_dimension(modes_, cutoff_, amps_.size(), kMaxVectorDimension, "amplitude vector");
    const double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > tolerances().norm) {
        throw NumericalError("state vector norm^2 = " + std::to_string(n2) + " is not 1");
    }
    if (leakage_ < 0.0) throw ArgumentError("leakage must be non-negative");
}

FockStateVector FockStateVector::normalized(std::size_t modes, std::size_t cutoff,
                                            Eigen::VectorXcd amplitudes, double leakage) {
    const double n = amplitudes.norm();
    if (!(n > 1e-300)) throw NumericalError("cannot normalise a null state vector");
    amplitudes /= n;
    return FockStateVector(modes, cutoff, std::move(amplitudes), leakage);
}

FockStateVector FockStateVector::basis(std::size_t modes, std::size_t cutoff,
                                       std::span<const std::size_t> photons) {
    if (photons.size() != modes) throw ArgumentError("one photon number per mode required");
    PhotonNumbers n{};
    for (std::size_t k = 0; k < modes; ++k) {
        if (photons[k] >= cutoff) {
            throw TruncationError("photon number " + std::to_string(photons[k]) +
                                      " does not fit below cutoff " + std::to_string(cutoff),
                                  photons[k] + 1);
        }
        n[k] = photons[k];
    }
    const std::size_t dim = hilbert_dimension(modes, cutoff, kMaxVectorDimension);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(encode_index(n, modes, cutoff))) = 1.0;
    return FockStateVector(modes, cutoff, std::move(v));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd matrix,
                             double leakage)
    : modes_(modes), cutoff_(cutoff), rho_(std::move(matrix)), leakage_(leakage) {
    if (rho_.rows() != rho_.cols()) throw ArgumentError("density matrix must be square");
    check_dimension(modes_, cutoff_, rho_.rows(), tolerances().max_dimension, "density matrix");
    const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tolerances().herm) {
        throw NumericalError("density matrix is not Hermitian (max |rho - rho^+| = " +
                             std::to_string(asym) + ")");
    }
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > tolerances().norm) {
        throw NumericalError("density matrix trace " + std::to_string(tr) + " is not 1");
    }
    if (leakage_ < 0.0) throw ArgumentError("leakage must be non-negative");
}

DensityMatrix::DensityMatrix(const FockStateVector& psi)
    : DensityMatrix(psi.modes(), psi.cutoff(), psi.amplitudes() * psi.amplitudes().adjoint(),
                    psi.leakage()) {}

DensityMatrix DensityMatrix::normalized(std::size_t modes, std::size_t cutoff,
                                        Eigen::MatrixXcd matrix, double leakage) {
    const double tr = matrix.trace().real();
    if (!(tr > 1e-300)) throw NumericalError("cannot normalise a matrix with trace <= 0");
    matrix /= tr;
    return DensityMatrix(modes, cutoff, std::move(matrix), leakage);
}

bool DensityMatrix::is_diagonal() const {
    const Eigen::Index n = rho_.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j && rho_(i, j) != cplx(0.0, 0.0)) return false;
    return true;
}

void DensityMatrix::validate_positive() const { (void)clamped_spectrum(*this); }

// ---------------------------------------------------------------------------
// Products and reductions

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.cutoff() != b.cutoff()) {
        throw ArgumentError("tensor product requires equal cutoffs (" +
                            std::to_string(a.cutoff()) + " vs " + std::to_string(b.cutoff()) + ")");
    }
    const std::size_t modes = a.modes() + b.modes();
    const std::size_t dim = hilbert_dimension(modes, a.cutoff(), tolerances().max_dimension);
    // a's modes come first, so a's index varies fastest: kron(b, a).
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const Eigen::Index da = a.matrix().rows();
    const Eigen::Index db = b.matrix().rows();
    for (Eigen::Index bj = 0; bj < db; ++bj)
        for (Eigen::Index bi = 0; bi < db; ++bi)
            m.block(bi * da, bj * da, da, da) = b.matrix()(bi, bj) * a.matrix();
    return DensityMatrix(modes, a.cutoff(), std::move(m), a.leakage() + b.leakage());
}

FockStateVector tensor(const FockStateVector& a, const FockStateVector& b) {
    if (a.cutoff() != b.cutoff()) throw ArgumentError("tensor product requires equal cutoffs");
    const std::size_t modes = a.modes() + b.modes();
    const std::size_t dim = hilbert_dimension(modes, a.cutoff(), kMaxVectorDimension);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    const Eigen::Index da = a.amplitudes().size();
    for (Eigen::Index bi = 0; bi < b.amplitudes().size(); ++bi)
        v.segment(bi * da, da) = b.amplitudes()(bi) * a.amplitudes();
    return FockStateVector::normalized(modes, a.cutoff(), std::move(v), a.leakage() + b.leakage());
}

namespace {

struct Split {
    std::vector<std::size_t> kept;
    std::vector<std::size_t> traced;
    // full_index[i * traced_dim + t]
    std::vector<std::size_t> full_index;
    std::size_t kept_dim = 1;
    std::size_t traced_dim = 1;
};

Split split_modes(std::size_t modes, std::size_t cutoff, std::span<const std::size_t> keep) {
    if (keep.empty()) throw ArgumentError("partial trace needs a non-empty set of kept modes");
    Split s;
    std::vector<bool> flag(modes, false);
    for (std::size_t k : keep) {
        if (k >= modes) throw ArgumentError("kept mode " + std::to_string(k) + " out of range");
        flag[k] = true;
    }
    for (std::size_t k = 0; k < modes; ++k) (flag[k] ? s.kept : s.traced).push_back(k);
    for (std::size_t k = 0; k < s.kept.size(); ++k) s.kept_dim *= cutoff;
    for (std::size_t k = 0; k < s.traced.size(); ++k) s.traced_dim *= cutoff;
    s.full_index.resize(s.kept_dim * s.traced_dim);
    for (std::size_t i = 0; i < s.kept_dim; ++i) {
        const PhotonNumbers ni = decode_index(i, s.kept.size(), cutoff);
        for (std::size_t t = 0; t < s.traced_dim; ++t) {
            const PhotonNumbers nt = decode_index(t, s.traced.size(), cutoff);
            PhotonNumbers full{};
            for (std::size_t k = 0; k < s.kept.size(); ++k) full[s.kept[k]] = ni[k];
            for (std::size_t k = 0; k < s.traced.size(); ++k) full[s.traced[k]] = nt[k];
            s.full_index[i * s.traced_dim + t] = encode_index(full, modes, cutoff);
        }
    }
    return s;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
    const Split s = split_modes(rho.modes(), rho.cutoff(), keep);
    const auto kd = static_cast<Eigen::Index>(s.kept_dim);
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(kd, kd);
    const auto& m = rho.matrix();
    for (std::size_t j = 0; j < s.kept_dim; ++j)
        for (std::size_t i = 0; i < s.kept_dim; ++i) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < s.traced_dim; ++t)
                acc += m(static_cast<Eigen::Index>(s.full_index[i * s.traced_dim + t]),
                         static_cast<Eigen::Index>(s.full_index[j * s.traced_dim + t]));
            red(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    return DensityMatrix::normalized(s.kept.size(), rho.cutoff(), std::move(red), rho.leakage());
}

DensityMatrix partial_trace(const FockStateVector& psi, std::span<const std::size_t> keep) {
    const Split s = split_modes(psi.modes(), psi.cutoff(), keep);
    Eigen::MatrixXcd c(static_cast<Eigen::Index>(s.kept_dim),
                       static_cast<Eigen::Index>(s.traced_dim));
    for (std::size_t i = 0; i < s.kept_dim; ++i)
        for (std::size_t t = 0; t < s.traced_dim; ++t)
            c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
                psi[s.full_index[i * s.traced_dim + t]];
    return DensityMatrix::normalized(s.kept.size(), psi.cutoff(), c * c.adjoint(), psi.leakage());
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, std::size_t mode) {
    if (rho.modes() != 2) throw UnsupportedError("partial transpose is defined for two-mode states");
    if (mode > 1) throw ArgumentError("partial transpose mode must be 0 or 1");
    const std::size_t d = rho.cutoff();
    const auto dim = static_cast<Eigen::Index>(rho.dimension());
    Eigen::MatrixXcd out(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        PhotonNumbers nj = decode_index(static_cast<std::size_t>(j), 2, d);
        for (Eigen::Index i = 0; i < dim; ++i) {
            PhotonNumbers ni = decode_index(static_cast<std::size_t>(i), 2, d);
            std::swap(ni[mode], nj[mode]);
            out(i, j) = rho.matrix()(static_cast<Eigen::Index>(encode_index(ni, 2, d)),
                                     static_cast<Eigen::Index>(encode_index(nj, 2, d)));
            std::swap(ni[mode], nj[mode]);
        }
    }
    return out;
}

double purity(const DensityMatrix& rho) {
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.modes() != b.modes() || a.cutoff() != b.cutoff()) {
        throw ArgumentError("overlap requires states of equal dimensions");
    }
    // Tr[ab] = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij).
    return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

Spectrum clamped_spectrum(const DensityMatrix& rho) {
    Spectrum s;
    if (rho.is_diagonal()) {
        s.eigenvalues = rho.matrix().diagonal().real();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
        s.eigenvalues = solver.eigenvalues();
    }
    const double tol = tolerances().eig;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        double& l = s.eigenvalues(i);
        if (l < 0.0) {
            if (l < -tol) {
                throw NumericalError("density matrix has eigenvalue " + std::to_string(l) +
                                     " below -tol_eig");
            }
            s.clamped_mass += -l;
            l = 0.0;
        }
    }
    return s;
}

double spectrum_entropy(const Eigen::VectorXd& eigenvalues, LogBase base) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double l = eigenvalues(i);
        if (l > 0.0) s -= l * std::log(l);
    }
    return s * log_scale(base);
}

double von_neumann_entropy(const DensityMatrix& rho, LogBase base) {
    return spectrum_entropy(clamped_spectrum(rho).eigenvalues, base);
}

double shannon_entropy(std::span<const double> p, LogBase base) {
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return s * log_scale(base);
}

DensityMatrix random_density_matrix(std::size_t modes, std::size_t cutoff, std::size_t rank,
                                    std::uint64_t seed) {
    const std::size_t dim = hilbert_dimension(modes, cutoff, tolerances().max_dimension);
    if (rank < 1 || rank > dim) {
        throw ArgumentError("rank " + std::to_string(rank) + " must lie in [1, " +
                            std::to_string(dim) + "]");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    return DensityMatrix::normalized(modes, cutoff, g * g.adjoint());
}

double mean_photon_number(const DensityMatrix& rho, std::size_t mode) {
    if (mode >= rho.modes()) throw ArgumentError("mode out of range");
    double n = 0.0;
    for (std::size_t i = 0; i < rho.dimension(); ++i)
        n += static_cast<double>(decode_index(i, rho.modes(), rho.cutoff())[mode]) * rho(i, i).real();
    return n;
}

double mean_photon_number(const FockStateVector& psi, std::size_t mode) {
    if (mode >= psi.modes()) throw ArgumentError("mode out of range");
    double n = 0.0;
    for (std::size_t i = 0; i < psi.dimension(); ++i)
        n += static_cast<double>(decode_index(i, psi.modes(), psi.cutoff())[mode]) *
             std::norm(psi[i]);
    return n;
}

DensityMatrix embed(const DensityMatrix& rho, std::size_t cutoff) {
    if (cutoff < rho.cutoff()) throw ArgumentError("embed target cutoff is smaller than the state's");
    if (cutoff == rho.cutoff()) return rho;
    const std::size_t dim = hilbert_dimension(rho.modes(), cutoff, tolerances().max_dimension);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    std::vector<Eigen::Index> map(rho.dimension());
    for (std::size_t i = 0; i < rho.dimension(); ++i)
        map[i] = static_cast<Eigen::Index>(
            encode_index(decode_index(i, rho.modes(), rho.cutoff()), rho.modes(), cutoff));
    for (std::size_t j = 0; j < rho.dimension(); ++j)
        for (std::size_t i = 0; i < rho.dimension(); ++i) m(map[i], map[j]) = rho(i, j);
    return DensityMatrix(rho.modes(), cutoff, std::move(m), rho.leakage());
}

FockStateVector embed(const FockStateVector& psi, std::size_t cutoff) {
    if (cutoff < psi.cutoff()) throw ArgumentError("embed target cutoff is smaller than the state's");
    if (cutoff == psi.cutoff()) return psi;
    const std::size_t dim = hilbert_dimension(psi.modes(), cutoff, kMaxVectorDimension);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < psi.dimension(); ++i)
        v(static_cast<Eigen::Index>(encode_index(decode_index(i, psi.modes(), psi.cutoff()),
                                                 psi.modes(), cutoff))) = psi[i];
    return FockStateVector(psi.modes(), cutoff, std::move(v), psi.leakage());
}

}  // namespace nongauss
