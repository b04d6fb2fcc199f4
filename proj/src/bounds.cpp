#include "nongauss/bounds.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "nongauss/errors.hpp"
#include "nongauss/gaussian.hpp"

namespace nongauss {

namespace {

constexpr double kThermalReferenceTol = 1e-8;

void require_single_mode(const DensityMatrix& rho, const char* what) {
    if (rho.modes() != 1) throw UnsupportedError(std::string(what) + " is single-mode");
}

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("detector efficiency must lie in [0, 1]");
}

std::vector<double> photon_distribution(const DensityMatrix& rho) {
    std::vector<double> p(rho.cutoff());
    for (std::size_t n = 0; n < p.size(); ++n) p[n] = std::max(0.0, rho(n, n).real());
    return p;
}

double thermal_entropy(double mean, LogBase base) { return h(mean + 0.5, base); }

double mean_of(const std::vector<double>& q) {
    double m = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) m += static_cast<double>(k) * q[k];
    return m;
}

void require_thermal_reference(const DensityMatrix& rho, const char* what) {
    const LadderMoments lm = ladder_moments(rho);
    const double a = std::abs(lm.a(0));
    const double aa = std::abs(lm.aa(0, 0));
    if (a > kThermalReferenceTol || aa > kThermalReferenceTol) {
        throw PreconditionError(std::string(what) +
                                " requires <a> = <a^2> = 0 (thermal reference state)");
    }
}

}  // namespace

PhotodetectionPOVM::PhotodetectionPOVM(double eta, std::size_t cutoff)
    : eta_(eta), cutoff_(cutoff), table_(cutoff * cutoff, 0.0) {
    check_eta(eta);
    if (cutoff == 0) throw ArgumentError("cutoff must be positive");
    for (std::size_t s = 0; s < cutoff; ++s) {
        // Binomial row by recurrence, exact at the endpoints eta = 0 and 1.
        std::vector<double> row(s + 1, 0.0);
        row[0] = 1.0;
        for (std::size_t k = 1; k <= s; ++k) {
            for (std::size_t m = k; m > 0; --m) row[m] = row[m] * (1.0 - eta) + row[m - 1] * eta;
            row[0] *= 1.0 - eta;
        }
        for (std::size_t m = 0; m <= s; ++m) table_[s * cutoff + m] = row[m];
    }
}

double PhotodetectionPOVM::weight(std::size_t m, std::size_t s) const {
    if (m >= cutoff_ || s >= cutoff_) throw ArgumentError("POVM index beyond the cutoff");
    return table_[s * cutoff_ + m];
}

std::vector<double> PhotodetectionPOVM::element(std::size_t m) const {
    std::vector<double> diag(cutoff_, 0.0);
    for (std::size_t s = m; s < cutoff_; ++s) diag[s] = weight(m, s);
    return diag;
}

std::vector<double> detection_statistics(const DensityMatrix& rho, const PhotodetectionPOVM& povm) {
    require_single_mode(rho, "photodetection");
    if (rho.cutoff() != povm.cutoff()) throw ArgumentError("POVM and state cutoffs differ");
    const std::vector<double> p = photon_distribution(rho);
    std::vector<double> q(p.size(), 0.0);
    for (std::size_t s = 0; s < p.size(); ++s)
        for (std::size_t m = 0; m <= s; ++m) q[m] += p[s] * povm.weight(m, s);
    return q;
}

double epsilon_A(const std::vector<double>& q, LogBase base) {
    double total = 0.0;
    for (double x : q) {
        if (x < 0.0) throw ArgumentError("detection probabilities must be non-negative");
        total += x;
    }
    if (!(total > 0.0)) throw ArgumentError("empty detection statistics");
    std::vector<double> qn(q);
    for (double& x : qn) x /= total;
    return thermal_entropy(mean_of(qn), base) - shannon_entropy(qn, base);
}

double epsilon_A(const DensityMatrix& rho, double eta, LogBase base) {
    require_single_mode(rho, "epsilon_A");
    if (!rho.is_diagonal()) throw PreconditionError("epsilon_A requires a Fock-diagonal state");
    return epsilon_A(detection_statistics(rho, PhotodetectionPOVM(eta, rho.cutoff())), base);
}

double epsilon_B(const DensityMatrix& rho, LogBase base) {
    require_single_mode(rho, "epsilon_B");
    require_thermal_reference(rho, "epsilon_B");
    const std::vector<double> p = photon_distribution(rho);
    return thermal_entropy(mean_of(p), base) - shannon_entropy(p, base);
}

double epsilon_C(const DensityMatrix& rho, double eta, LogBase base) {
    require_single_mode(rho, "epsilon_C");
    require_thermal_reference(rho, "epsilon_C");
    return epsilon_A(detection_statistics(rho, PhotodetectionPOVM(eta, rho.cutoff())), base);
}

double epsilon_D(const DensityMatrix& rho, LogBase base) {
    require_single_mode(rho, "epsilon_D");
    return gaussian_entropy(moments(rho), base) - shannon_entropy(photon_distribution(rho), base);
}

double epsilon_E(const DensityMatrix& rho, double eta, LogBase base) {
    require_single_mode(rho, "epsilon_E");
    check_eta(eta);
    const std::vector<double> q = detection_statistics(rho, PhotodetectionPOVM(eta, rho.cutoff()));
    return gaussian_entropy(loss_transformed(moments(rho), eta), base) - shannon_entropy(q, base);
}

std::vector<double> read_histogram(std::istream& in) {
    std::vector<double> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string m_s, c_s;
        if (!std::getline(ss, m_s, ',') || !std::getline(ss, c_s)) {
            throw ArgumentError("histogram line " + std::to_string(lineno) + " is not 'm,count'");
        }
        std::size_t m = 0;
        double c = 0.0;
        try {
            std::size_t used = 0;
            const long long mv = std::stoll(m_s, &used);
            if (mv < 0) throw ArgumentError("negative photon count in histogram");
            m = static_cast<std::size_t>(mv);
            c = std::stod(c_s);
        } catch (const std::invalid_argument&) {
            if (lineno == 1) continue;  // header
            throw ArgumentError("histogram line " + std::to_string(lineno) + " is not numeric");
        }
        if (c < 0.0) throw ArgumentError("negative count in histogram");
        if (m >= counts.size()) counts.resize(m + 1, 0.0);
        counts[m] += c;
    }
    double total = 0.0;
    for (double c : counts) total += c;
    if (!(total > 0.0)) throw ArgumentError("histogram has no counts");
    for (double& c : counts) c /= total;
    return counts;
}

}  // namespace nongauss
