#include "nongauss/measures.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "nongauss/errors.hpp"
#include "nongauss/parallel.hpp"
#include "nongauss/zoo.hpp"

namespace nongauss {

namespace {

void base_diagnostics(MeasureReport& r, double leakage, std::size_t cutoff, double clamped) {
    r.diagnostics["leakage"] = leakage;
    r.diagnostics["cutoff_used"] = static_cast<double>(cutoff);
    r.diagnostics["clamped_eigenvalue_mass"] = clamped;
}

double clamp_measure(double v, const char* name) {
    if (v >= 0.0) return v;
    if (v >= -tolerances().clamp) return 0.0;
    throw NumericalError(std::string(name) + " = " + std::to_string(v) +
                         " is negative beyond the clamping window");
}

double diff_over_purity(double mu, double mu_tau, double kappa) {
    return (mu + mu_tau - 2.0 * kappa) / (2.0 * mu);
}

}  // namespace

MeasureReport delta_A(const DensityMatrix& rho) {
    if (rho.modes() != 1) throw UnsupportedError("delta_A is implemented for single-mode states");
    const GaussianData g = moments(rho);
    validate(g);
    const Eigen::MatrixXcd tau = gaussian_fock_block(g, rho.cutoff());
    const double mu = purity(rho);
    const double mu_tau = gaussian_purity(g);
    const double kappa = (rho.matrix().array() * tau.conjugate().array()).sum().real();
    MeasureReport r;
    r.value = clamp_measure(diff_over_purity(mu, mu_tau, kappa), "delta_A");
    base_diagnostics(r, rho.leakage(), rho.cutoff(), 0.0);
    r.diagnostics["purity"] = mu;
    r.diagnostics["reference_purity"] = mu_tau;
    r.diagnostics["overlap"] = kappa;
    r.diagnostics["reference_tail"] = std::max(0.0, 1.0 - tau.trace().real());
    return r;
}

MeasureReport delta_A(const FockStateVector& psi) {
    if (psi.modes() != 1) throw UnsupportedError("delta_A is implemented for single-mode states");
    const GaussianData g = moments(psi);
    validate(g);
    const Eigen::MatrixXcd tau = gaussian_fock_block(g, psi.cutoff());
    const double mu_tau = gaussian_purity(g);
    const double kappa = psi.amplitudes().dot(tau * psi.amplitudes()).real();
    MeasureReport r;
    r.value = clamp_measure(diff_over_purity(1.0, mu_tau, kappa), "delta_A");
    base_diagnostics(r, psi.leakage(), psi.cutoff(), 0.0);
    r.diagnostics["purity"] = 1.0;
    r.diagnostics["reference_purity"] = mu_tau;
    r.diagnostics["overlap"] = kappa;
    r.diagnostics["reference_tail"] = std::max(0.0, 1.0 - tau.trace().real());
    return r;
}

MeasureReport delta_B(const DensityMatrix& rho, LogBase base) {
    const GaussianData g = moments(rho);
    const double s_tau = gaussian_entropy(g, base);
    const Spectrum sp = clamped_spectrum(rho);
    const double s_rho = spectrum_entropy(sp.eigenvalues, base);
    MeasureReport r;
    r.value = clamp_measure(s_tau - s_rho, "delta_B");
    base_diagnostics(r, rho.leakage(), rho.cutoff(), sp.clamped_mass);
    r.diagnostics["reference_entropy"] = s_tau;
    r.diagnostics["entropy"] = s_rho;
    return r;
}

MeasureReport delta_B(const FockStateVector& psi, LogBase base) {
    const GaussianData g = moments(psi);
    const double s_tau = gaussian_entropy(g, base);
    MeasureReport r;
    r.value = clamp_measure(s_tau, "delta_B");
    base_diagnostics(r, psi.leakage(), psi.cutoff(), 0.0);
    r.diagnostics["reference_entropy"] = s_tau;
    r.diagnostics["entropy"] = 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Wehrl entropy

namespace {

struct Grid {
    double h;
    std::vector<double> x;
};

// Q has covariance (sigma + I/2) / 2 in the alpha plane.
double default_half_width(const GaussianData& g) {
    const double n = 0.5 * (g.sigma.trace() + g.X.squaredNorm()) - 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g.sigma);
    const double spread = std::sqrt(0.5 * (es.eigenvalues().maxCoeff() + 0.5));
    return std::max(std::sqrt(2.0 * (n + 1.0)) + 5.0, g.X.norm() / std::sqrt(2.0) + 6.5 * spread);
}

Grid make_grid(const WehrlGrid& spec, const GaussianData& mom) {
    if (!(spec.spacing > 0.0)) throw ArgumentError("Wehrl grid spacing must be positive");
    const double r = spec.half_width > 0.0 ? spec.half_width : default_half_width(mom);
    const auto m = static_cast<std::size_t>(std::ceil(r / spec.spacing));
    Grid g;
    g.h = spec.spacing;
    g.x.resize(2 * m + 1);
    for (std::size_t i = 0; i < g.x.size(); ++i)
        g.x[i] = (static_cast<double>(i) - static_cast<double>(m)) * spec.spacing;
    return g;
}

double q_log_term(double q) { return q > 0.0 ? q * std::log(std::numbers::pi * q) : 0.0; }

double wehrl_on(const DensityMatrix& rho, const Grid& grid, double* residual) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    if (solver.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
        if (solver.eigenvalues()(k) > 1e-15) keep.push_back(k);
    const auto nk = static_cast<Eigen::Index>(keep.size());
    const auto d = static_cast<Eigen::Index>(rho.cutoff());
    Eigen::MatrixXcd v(d, nk);
    Eigen::VectorXd lam(nk);
    for (Eigen::Index j = 0; j < nk; ++j) {
        v.col(j) = solver.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
        lam(j) = solver.eigenvalues()(keep[static_cast<std::size_t>(j)]);
    }
    const auto npts = static_cast<Eigen::Index>(grid.x.size());
    std::vector<double> isq(static_cast<std::size_t>(d));
    for (Eigen::Index n = 0; n < d; ++n) isq[static_cast<std::size_t>(n)] = 1.0 / std::sqrt(double(n));

    double norm = 0.0;
    double ent = 0.0;
    Eigen::MatrixXcd coh(npts, d);
    for (const double y : grid.x) {
        // Row of conj(<n|beta>) = e^{-|beta|^2/2} conj(beta)^n / sqrt(n!).
        for (Eigen::Index i = 0; i < npts; ++i) {
            const cplx beta_c(grid.x[static_cast<std::size_t>(i)], -y);
            cplx c = std::exp(-0.5 * std::norm(beta_c));
            coh(i, 0) = c;
            for (Eigen::Index n = 1; n < d; ++n) {
                c *= beta_c * isq[static_cast<std::size_t>(n)];
                coh(i, n) = c;
            }
        }
        const Eigen::MatrixXcd amp = coh * v;
        for (Eigen::Index i = 0; i < npts; ++i) {
            double q = 0.0;
            for (Eigen::Index j = 0; j < nk; ++j) q += lam(j) * std::norm(amp(i, j));
            q /= std::numbers::pi;
            norm += q;
            ent -= q_log_term(q);
        }
    }
    const double area = grid.h * grid.h;
    if (residual) *residual = std::abs(norm * area - 1.0);
    return ent * area;
}

double wehrl_on(const GaussianData& g, const Grid& grid, double* residual) {
    if (g.modes() != 1) throw UnsupportedError("Wehrl entropy is single-mode only");
    const Eigen::Matrix2d big = g.sigma + 0.5 * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d p = big.inverse();
    const double pref = 1.0 / (std::numbers::pi * std::sqrt(big.determinant()));
    double norm = 0.0;
    double ent = 0.0;
    for (const double y : grid.x)
        for (const double x : grid.x) {
            const Eigen::Vector2d u(std::sqrt(2.0) * x - g.X(0), std::sqrt(2.0) * y - g.X(1));
            const double q = pref * std::exp(-0.5 * u.dot(p * u));
            norm += q;
            ent -= q_log_term(q);
        }
    const double area = grid.h * grid.h;
    if (residual) *residual = std::abs(norm * area - 1.0);
    return ent * area;
}

constexpr double kQuadratureTolerance = 1e-4;

}  // namespace

double wehrl_entropy(const DensityMatrix& rho, const WehrlGrid& grid, double* residual) {
    if (rho.modes() != 1) throw UnsupportedError("Wehrl entropy is single-mode only");
    return wehrl_on(rho, make_grid(grid, moments(rho)), residual);
}

double wehrl_entropy(const GaussianData& g, const WehrlGrid& grid, double* residual) {
    if (g.modes() != 1) throw UnsupportedError("Wehrl entropy is single-mode only");
    return wehrl_on(g, make_grid(grid, g), residual);
}

MeasureReport delta_C(const DensityMatrix& rho, const WehrlGrid& spec) {
    if (rho.modes() != 1) throw UnsupportedError("delta_C is implemented for single-mode states");
    const GaussianData g = moments(rho);
    validate(g);
    const Grid grid = make_grid(spec, g);
    double res_rho = 0.0;
    double res_tau = 0.0;
    const double hw_rho = wehrl_on(rho, grid, &res_rho);
    const double hw_tau = wehrl_on(g, grid, &res_tau);
    if (res_rho > kQuadratureTolerance || res_tau > kQuadratureTolerance) {
        throw QuadratureError("Wehrl quadrature normalisation residual " +
                              std::to_string(std::max(res_rho, res_tau)) +
                              " exceeds 1e-4; enlarge the grid");
    }
    MeasureReport r;
    r.value = hw_tau - hw_rho;
    base_diagnostics(r, rho.leakage(), rho.cutoff(), 0.0);
    r.diagnostics["wehrl_state"] = hw_rho;
    r.diagnostics["wehrl_reference"] = hw_tau;
    r.diagnostics["quadrature_residual"] = std::max(res_rho, res_tau);
    r.diagnostics["grid_half_width"] = grid.x.back();
    r.diagnostics["grid_spacing"] = grid.h;
    return r;
}

InequalityCheck check_measure_inequality(const DensityMatrix& rho) {
    InequalityCheck c;
    c.delta_A = delta_A(rho).value;
    c.delta_B = delta_B(rho).value;
    c.purity = purity(rho);
    c.margin = c.delta_B - c.delta_A * c.purity;
    c.holds = c.margin >= -1e-6;
    return c;
}

// ---------------------------------------------------------------------------
// Random-state survey

std::vector<A5Summary> conjecture_A5_sweep(std::size_t samples,
                                           const std::vector<std::size_t>& cutoffs,
                                           std::uint64_t seed, std::size_t threads,
                                           std::size_t bins) {
    if (samples < 1) throw ArgumentError("conjecture_A5_sweep needs at least one sample");
    if (bins < 1) throw ArgumentError("histogram needs at least one bin");
    std::vector<A5Summary> out;
    for (const std::size_t d : cutoffs) {
        if (d < 2) throw ArgumentError("cutoff must be at least 2");
        std::vector<double> values(samples);
        const std::uint64_t base = mix_seed(seed ^ mix_seed(d));
        parallel_for(samples, threads, [&](std::size_t i) {
            std::mt19937_64 rng(mix_seed(base + i));
            std::uniform_int_distribution<std::size_t> rank(1, d);
            const std::size_t k = rank(rng);
            values[i] = delta_A(random_density_matrix(1, d, k, rng())).value;
        });
        A5Summary s;
        s.cutoff = d;
        s.samples = samples;
        s.histogram.assign(bins, 0);
        s.reference_fock1 = delta_A(fock(1, d)).value;
        auto add = [&](double v) {
            s.max_delta_A = std::max(s.max_delta_A, v);
            auto b = static_cast<std::size_t>(std::floor(v / 0.5 * double(bins)));
            s.histogram[std::min(b, bins - 1)] += 1;
        };
        double sum = 0.0;
        for (double v : values) {
            add(v);
            sum += v;
        }
        add(s.reference_fock1);
        s.mean_delta_A = sum / double(samples);
        std::size_t best = 0;
        for (std::size_t b = 1; b < bins; ++b)
            if (s.histogram[b] > s.histogram[best]) best = b;
        s.mode_delta_A = (double(best) + 0.5) * 0.5 / double(bins);
        s.bounded = s.max_delta_A <= 0.5 + 1e-6;
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Non-Gaussianity of a map

namespace {

using Probe = std::array<double, 5>;  // n_th, r, phi, |alpha|, arg alpha

SingleModeGaussianParams to_params(const Probe& p) {
    SingleModeGaussianParams g;
    g.n_th = std::abs(p[0]);
    g.r = std::abs(p[1]);
    g.phi = p[2];
    g.alpha = std::polar(std::abs(p[3]), p[4]);
    return g;
}

double probe_energy(const Probe& p) {
    const auto g = to_params(p);
    return std::norm(g.alpha) + (g.n_th + 0.5) * std::cosh(2.0 * g.r) - 0.5;
}

class MapObjective {
public:
    MapObjective(const ChannelSpec& c, const MapSearch& s) : channel_(c), search_(s) {}

    // Returns -inf for infeasible probes or once the budget is spent.
    double operator()(const Probe& p) {
        if (probe_energy(p) > search_.energy_cap + 1e-12) return -std::numeric_limits<double>::infinity();
        if (evaluations_ >= search_.budget) return -std::numeric_limits<double>::infinity();
        ++evaluations_;
        const GaussianData g = single_mode_gaussian_data(to_params(p));
        std::size_t d = gaussian_cutoff(g, tolerances().tail);
        for (int attempt = 0;; ++attempt) {
            try {
                const DensityMatrix out = apply_channel(gaussian_state(g, d), channel_);
                const double v = delta_B(out).value;
                if (v > best_value_) {
                    best_value_ = v;
                    best_ = p;
                    best_cutoff_ = d;
                }
                return v;
            } catch (const TruncationError&) {
                if (attempt >= 3) throw;
                d = d * 2;
            }
        }
    }

    std::size_t evaluations() const { return evaluations_; }
    bool exhausted() const { return evaluations_ >= search_.budget; }
    double best_value() const { return best_value_; }
    const Probe& best() const { return best_; }
    std::size_t best_cutoff() const { return best_cutoff_; }

private:
    ChannelSpec channel_;
    MapSearch search_;
    std::size_t evaluations_ = 0;
    double best_value_ = -std::numeric_limits<double>::infinity();
    Probe best_{};
    std::size_t best_cutoff_ = 0;
};

// Maximises f with a Nelder-Mead simplex until f reports an exhausted budget
// or the simplex collapses.
void nelder_mead(MapObjective& f, const Probe& start, const Probe& step) {
    constexpr std::size_t n = 5;
    std::array<Probe, n + 1> pts;
    std::array<double, n + 1> val;
    pts[0] = start;
    val[0] = f(start);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1] = start;
        pts[i + 1][i] += step[i];
        val[i + 1] = f(pts[i + 1]);
    }
    auto add = [](const Probe& a, const Probe& b, double t) {
        Probe r;
        for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
        return r;
    };
    while (!f.exhausted()) {
        std::array<std::size_t, n + 1> order;
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second = order[n - 1];
        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(pts[i][k] - pts[best][k]));
        if (size < 1e-6) return;
        Probe centroid{};
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / double(n);
        }
        const Probe refl = add(centroid, pts[worst], -1.0);
        const double fr = f(refl);
        if (fr > val[best]) {
            const Probe exp = add(centroid, pts[worst], -2.0);
            const double fe = f(exp);
            if (fe > fr) {
                pts[worst] = exp;
                val[worst] = fe;
            } else {
                pts[worst] = refl;
                val[worst] = fr;
            }
        } else if (fr > val[second]) {
            pts[worst] = refl;
            val[worst] = fr;
        } else {
            const Probe con = add(centroid, pts[worst], 0.5);
            const double fc = f(con);
            if (fc > val[worst]) {
                pts[worst] = con;
                val[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    pts[i] = add(pts[best], pts[i], 0.5);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
}

}  // namespace

MeasureReport ng_of_map(const ChannelSpec& channel, const MapSearch& search) {
    channel.validate();
    if (!(search.energy_cap > 0.0)) throw ArgumentError("energy cap must be positive");
    if (search.budget < 1) throw ArgumentError("search budget must be at least 1");
    MapObjective f(channel, search);
    const double e = search.energy_cap;
    const double r_max = 0.5 * std::acosh(2.0 * e + 1.0);
    for (double nth : {0.0, 0.25 * e, 0.5 * e})
        for (double r : {0.0, 0.3 * r_max, 0.6 * r_max})
            for (double phi : {0.0, 0.5 * std::numbers::pi}) {
                if (r == 0.0 && phi != 0.0) continue;
                for (double a : {0.0, 0.5 * std::sqrt(e), 0.9 * std::sqrt(e)}) f({nth, r, phi, a, 0.0});
            }
    if (!f.exhausted() && std::isfinite(f.best_value())) {
        nelder_mead(f, f.best(), {0.3, 0.2, 0.5, 0.3, 0.5});
    }
    MeasureReport rep;
    rep.value = std::max(0.0, f.best_value());
    base_diagnostics(rep, 0.0, f.best_cutoff(), 0.0);
    const auto p = to_params(f.best());
    rep.diagnostics["probe_n_th"] = p.n_th;
    rep.diagnostics["probe_r"] = p.r;
    auto wrap = [](double a) {
        const double t = std::fmod(a, 2.0 * std::numbers::pi);
        return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
    };
    rep.diagnostics["probe_phi"] = wrap(p.phi);
    rep.diagnostics["probe_abs_alpha"] = std::abs(p.alpha);
    rep.diagnostics["probe_arg_alpha"] = std::abs(p.alpha) > 0.0 ? wrap(std::arg(p.alpha)) : 0.0;
    rep.diagnostics["probe_energy"] = probe_energy(f.best());
    rep.diagnostics["evaluations"] = static_cast<double>(f.evaluations());
    rep.diagnostics["energy_cap"] = e;
    return rep;
}

}  // namespace nongauss
