#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "nongauss/channels.hpp"
#include "nongauss/distillation.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/measures.hpp"
#include "nongauss/parallel.hpp"
#include "nongauss/serialize.hpp"
#include "nongauss/zoo.hpp"

namespace nongauss::cli {

namespace {

using Row = std::vector<std::string>;

struct Table {
    json meta;
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

constexpr double kPi = std::numbers::pi;

std::string count_str(std::size_t n) { return std::to_string(n); }

/// Evaluates rows[i] = f(i) on the worker pool; grid order is preserved.
template <typename F>
std::vector<Row> rows_parallel(std::size_t n, std::size_t threads, F&& f) {
    std::vector<Row> rows(n);
    parallel_for(n, threads, [&](std::size_t i) { rows[i] = f(i); });
    return rows;
}

void append(std::vector<Row>& dst, std::vector<Row>&& src) {
    for (auto& r : src) dst.push_back(std::move(r));
}

/// Builds f at the smallest adequate cutoff plus kPad, so truncation error
/// sits far below the smallest values a figure shows.  An explicit --cutoff
/// is used as given.
constexpr std::size_t kPad = 20;
template <typename F>
auto padded(const Settings& s, std::size_t start, F&& f) -> decltype(f(std::size_t{})) {
    if (s.cutoff != 0) return f(s.cutoff);
    const std::size_t c = with_cutoff(0, start, [&](std::size_t k) {
        (void)f(k);
        return k;
    });
    return f(c + kPad);
}

double nat_to(LogBase base, double v) { return v * log_scale(base); }

// -- 1: pure PNES vs twice its marginal --------------------------------------

Table figure_1(const Settings& s) {
    const LogBase base = s.base();
    struct Series {
        PnesFamily family;
        std::vector<double> x;
    };
    const std::vector<Series> series = {{PnesFamily::TMC, linspace(0.05, 2.0, 40)},
                                        {PnesFamily::PSSV, linspace(0.05, 0.7, 14)},
                                        {PnesFamily::PASV, linspace(0.05, 0.7, 14)}};
    Table t;
    t.columns = {"family", "x", "energy", "deltaB_pure", "twice_deltaB_marginal"};
    json grid;
    for (const auto& se : series) {
        grid[to_string(se.family)] = se.x;
        append(t.rows, rows_parallel(se.x.size(), s.threads, [&](std::size_t i) {
            const PNESSpec spec = with_cutoff(s.cutoff, 8, [&](std::size_t c) {
                PNESSpec p{se.family, se.x[i], c};
                (void)pnes(p);
                return p;
            });
            const FockStateVector psi = pnes(spec);
            const Eigen::VectorXd c = pnes_coefficients(spec);
            std::vector<double> q(static_cast<std::size_t>(c.size()));
            for (Eigen::Index n = 0; n < c.size(); ++n) q[static_cast<std::size_t>(n)] = c(n) * c(n);
            const DiagonalNG marg = diagonal_ng(q, base);
            return Row{to_string(se.family), num(se.x[i]), num(2.0 * marg.mean_photons),
                       num(delta_B(psi, base).value), num(2.0 * marg.delta_B)};
        }));
    }
    t.meta["grid"] = grid;
    return t;
}

// -- 2: Wehrl measure of squeezed Fock states --------------------------------

Table figure_2(const Settings& s) {
    const LogBase base = s.base();
    const std::vector<double> r = linspace(0.0, 1.0, 21);
    const std::vector<std::size_t> ns = {1, 2, 3, 4};
    Table t;
    t.columns = {"n", "r", "deltaC", "deltaB"};
    t.meta["grid"] = {{"n", ns}, {"r", r}};
    t.rows = rows_parallel(ns.size() * r.size(), s.threads, [&](std::size_t i) {
        const std::size_t n = ns[i / r.size()];
        const double ri = r[i % r.size()];
        const FockStateVector psi = with_cutoff(s.cutoff, 80, [&](std::size_t c) {
            return squeeze(fock(n, c), ri, 0.0);
        });
        return Row{count_str(n), num(ri), num(nat_to(base, delta_C(DensityMatrix(psi)).value)),
                   num(delta_B(psi, base).value)};
    });
    return t;
}

// -- 3: Fock states and two-component superpositions --------------------------

Table figure_3(const Settings& s) {
    const LogBase base = s.base();
    struct Point {
        std::size_t n, k;
    };
    std::vector<Point> pts;
    for (std::size_t n = 1; n <= 15; ++n) pts.push_back({n, 0});
    for (std::size_t k : {3, 4, 5})
        for (std::size_t n = 0; n <= 15; ++n) pts.push_back({n, k});
    Table t;
    t.columns = {"family", "n", "k", "deltaA", "deltaB"};
    t.meta["grid"] = {{"fock_n", "1..15"}, {"superposition_n", "0..15"}, {"superposition_k", {3, 4, 5}}};
    t.rows = rows_parallel(pts.size(), s.threads, [&](std::size_t i) {
        const auto [n, k] = pts[i];
        const std::size_t c = std::max(s.cutoff, n + k + 1);
        const FockStateVector psi = k == 0 ? fock(n, c) : fock_superposition(n, k, c);
        return Row{k == 0 ? "fock" : "superposition", count_str(n), count_str(k),
                   num(delta_A(psi).value), num(delta_B(psi, base).value)};
    });
    return t;
}

// -- 4: Fock-diagonal mixtures ----------------------------------------------

/// q_n proportional to n^k exp(-n / lambda), summed until the terms are negligible.
std::vector<double> gamma_weights(double lambda, int k) {
    std::vector<double> q;
    double total = 0.0;
    const double peak = k * lambda;
    for (std::size_t n = 0;; ++n) {
        const double dn = static_cast<double>(n);
        const double w = n == 0 && k > 0 ? 0.0 : std::exp(k * std::log(std::max(dn, 1.0)) - dn / lambda);
        q.push_back(w);
        total += w;
        if (dn > peak + 5.0 && w < 1e-18 * total) break;
    }
    for (double& x : q) x /= total;
    return q;
}

std::vector<double> marginal_weights(PnesFamily family, double x, std::size_t cutoff) {
    const PNESSpec spec = with_cutoff(cutoff, 8, [&](std::size_t c) {
        PNESSpec p{family, x, c};
        (void)pnes_coefficients(p);
        return p;
    });
    const Eigen::VectorXd c = pnes_coefficients(spec);
    std::vector<double> q(static_cast<std::size_t>(c.size()));
    for (Eigen::Index n = 0; n < c.size(); ++n) q[static_cast<std::size_t>(n)] = c(n) * c(n);
    return q;
}

Table figure_4(const Settings& s, std::size_t samples) {
    const LogBase base = s.base();
    Table t;
    t.columns = {"family", "param", "sample", "mean_photons", "deltaA", "deltaB"};
    auto row = [&](const std::string& fam, double param, std::size_t sample,
                   const std::vector<double>& q) {
        const DiagonalNG d = diagonal_ng(q, base);
        return Row{fam, num(param), count_str(sample), num(d.mean_photons), num(d.delta_A),
                   num(d.delta_B)};
    };

    const std::vector<double> lam = linspace(0.1, 5.0, 50);
    const std::vector<double> x_tmc = linspace(0.05, 2.0, 40);
    const std::vector<double> x_sq = linspace(0.05, 0.7, 14);
    for (const auto& [fam, grid] :
         std::vector<std::pair<std::string, std::vector<double>>>{
             {"poisson", lam}, {"tmc", x_tmc}, {"pasv", x_sq}, {"pssv", x_sq},
             {"gamma2", lam}, {"gamma4", lam}}) {
        append(t.rows, rows_parallel(grid.size(), s.threads, [&](std::size_t i) {
            const double p = grid[i];
            std::vector<double> q;
            if (fam == "poisson") {
                q = poisson_weights(p, static_cast<std::size_t>(p + 12.0 * std::sqrt(p) + 64.0));
            } else if (fam == "gamma2") {
                q = gamma_weights(p, 2);
            } else if (fam == "gamma4") {
                q = gamma_weights(p, 4);
            } else {
                q = marginal_weights(parse_pnes_family(fam), p, s.cutoff);
            }
            return row(fam, p, 0, q);
        }));
    }

    const std::vector<std::size_t> H = {10, 100, 1000};
    for (std::size_t h : H) {
        append(t.rows, rows_parallel(samples, s.threads, [&](std::size_t i) {
            std::mt19937_64 rng(mix_seed(s.seed ^ mix_seed(h) ^ mix_seed(i + 1)));
            std::exponential_distribution<double> e(1.0);
            std::vector<double> q(h + 1);
            double total = 0.0;
            for (double& x : q) total += (x = e(rng));
            for (double& x : q) x /= total;
            return row("random", static_cast<double>(h), i, q);
        }));
    }
    t.meta["grid"] = {{"poisson_lambda", lam}, {"gamma_lambda", lam},   {"tmc_x", x_tmc},
                      {"pasv_x", x_sq},        {"pssv_x", x_sq},        {"random_H", H},
                      {"random_samples", samples}, {"random_weights", "flat Dirichlet over n = 0..H"}};
    return t;
}

// -- 5, 6: cat states --------------------------------------------------------

Row cat_row(const Settings& s, const std::string& series, double alpha, double phi) {
    const FockStateVector psi =
        padded(s, 8, [&](std::size_t c) { return cat(cplx(alpha, 0.0), phi, c); });
    return Row{series, num(alpha), num(phi), num(delta_A(psi).value),
               num(delta_B(psi, s.base()).value)};
}

Table figure_5(const Settings& s) {
    const std::vector<double> alpha = {0.5, 5.0};
    const std::vector<double> phi = linspace(-kPi / 2, kPi / 2, 61);
    Table t;
    t.columns = {"series", "alpha", "phi", "deltaA", "deltaB"};
    t.meta["grid"] = {{"alpha", alpha}, {"phi", phi}};
    t.rows = rows_parallel(alpha.size() * phi.size(), s.threads, [&](std::size_t i) {
        return cat_row(s, "alpha", alpha[i / phi.size()], phi[i % phi.size()]);
    });
    return t;
}

Table figure_6(const Settings& s) {
    const std::vector<double> alpha_fixed = {0.5, 2.5};
    const std::vector<double> phi_fixed = {-kPi / 3, kPi / 6, 2 * kPi / 5};
    std::vector<double> phi(60), alpha(50);
    for (std::size_t i = 0; i < phi.size(); ++i)
        phi[i] = -kPi / 2 + kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(phi.size());
    for (std::size_t i = 0; i < alpha.size(); ++i)
        alpha[i] = 2.5 * static_cast<double>(i + 1) / static_cast<double>(alpha.size());
    Table t;
    t.columns = {"series", "alpha", "phi", "deltaA", "deltaB"};
    t.meta["grid"] = {{"fixed_alpha", alpha_fixed}, {"phi", phi}, {"fixed_phi", phi_fixed},
                      {"alpha", alpha}};
    t.rows = rows_parallel(alpha_fixed.size() * phi.size(), s.threads, [&](std::size_t i) {
        return cat_row(s, "fixed_alpha", alpha_fixed[i / phi.size()], phi[i % phi.size()]);
    });
    append(t.rows, rows_parallel(phi_fixed.size() * alpha.size(), s.threads, [&](std::size_t i) {
        return cat_row(s, "fixed_phi", alpha[i % alpha.size()], phi_fixed[i / alpha.size()]);
    }));
    return t;
}

// -- 7, 7b, 8: channels ------------------------------------------------------

Table figure_7(const Settings& s) {
    const LogBase base = s.base();
    const std::vector<std::size_t> p = {2, 4, 6, 8};
    const std::vector<double> time = linspace(0.0, 3.0, 61);
    Table t;
    t.columns = {"p", "t", "deltaA", "deltaB"};
    t.meta["grid"] = {{"p", p}, {"t", time}, {"eta", "exp(-t)"}};
    t.rows = rows_parallel(p.size() * time.size(), s.threads, [&](std::size_t i) {
        const std::size_t n = p[i / time.size()];
        const double ti = time[i % time.size()];
        const DensityMatrix out =
            loss(DensityMatrix(fock(n, std::max(s.cutoff, n + 1))), std::exp(-ti));
        return Row{count_str(n), num(ti), num(delta_A(out).value), num(delta_B(out, base).value)};
    });
    return t;
}

DensityMatrix dephased_coherent(const Settings& s, double alpha2, double delta) {
    const DensityMatrix rho = padded(s, 8, [&](std::size_t c) {
        return DensityMatrix(coherent(cplx(std::sqrt(alpha2), 0.0), c));
    });
    if (std::isinf(delta)) {
        Eigen::MatrixXcd d = rho.matrix().diagonal().asDiagonal();
        return DensityMatrix(1, rho.cutoff(), d, rho.leakage());
    }
    return phase_diffusion(rho, delta);
}

Table figure_7b(const Settings& s) {
    const LogBase base = s.base();
    const std::vector<double> a2 = {1, 2, 3, 4, 5};
    const std::vector<double> delta = linspace(0.0, 2.0, 41);
    const std::vector<double> delta_fixed = {0.25, 0.5, std::numeric_limits<double>::infinity()};
    const std::vector<double> a2_grid = linspace(0.1, 5.0, 50);
    Table t;
    t.columns = {"series", "alpha2", "Delta", "deltaB"};
    t.meta["grid"] = {{"alpha2", a2}, {"Delta", delta}, {"fixed_Delta", {"0.25", "0.5", "inf"}},
                      {"alpha2_grid", a2_grid}};
    auto row = [&](const std::string& series, double x, double d) {
        const double v = delta_B(dephased_coherent(s, x, d), base).value;
        return Row{series, num(x), std::isinf(d) ? "inf" : num(d), num(v)};
    };
    t.rows = rows_parallel(a2.size() * delta.size(), s.threads, [&](std::size_t i) {
        return row("vs_Delta", a2[i / delta.size()], delta[i % delta.size()]);
    });
    append(t.rows, rows_parallel(delta_fixed.size() * a2_grid.size(), s.threads, [&](std::size_t i) {
        return row("vs_alpha2", a2_grid[i % a2_grid.size()], delta_fixed[i / a2_grid.size()]);
    }));
    return t;
}

Table figure_8(const Settings& s) {
    const LogBase base = s.base();
    const std::vector<double> gamma = {1e-6, 1e-4, 1e-2};
    const std::vector<double> n = linspace(0.25, 10.0, 40);
    Table t;
    t.columns = {"gamma", "n", "deltaB", "max_deltaB"};
    t.meta["grid"] = {{"gamma", gamma}, {"n", n}, {"max_deltaB", "h(n + 1/2)"}};
    t.rows = rows_parallel(gamma.size() * n.size(), s.threads, [&](std::size_t i) {
        const double g = gamma[i / n.size()];
        const double ni = n[i % n.size()];
        const FockStateVector psi = padded(s, 8, [&](std::size_t c) {
            return coherent(cplx(std::sqrt(ni), 0.0), c);
        });
        return Row{num(g), num(ni), num(delta_B(kerr(psi, g), base).value), num(h(ni + 0.5, base))};
    });
    return t;
}

// -- 9, 10, 11: distillation -------------------------------------------------

std::size_t browne_cutoff(const Settings& s) { return s.cutoff == 0 ? 8 : s.cutoff; }

Table figure_9(const Settings& s) {
    const double scale = log_scale(s.base());
    const std::vector<double> lambda = linspace(0.05, 1.5, 30);
    const std::vector<std::size_t> steps = {0, 5, 10, 20};
    const std::size_t d = browne_cutoff(s);
    Table t;
    t.columns = {"lambda", "step", "deltaB", "success_prob", "leakage"};
    t.meta["grid"] = {{"lambda", lambda}, {"step", steps}, {"variant", "a"}, {"cutoff", d}};
    std::vector<std::vector<Row>> blocks(lambda.size());
    parallel_for(lambda.size(), s.threads, [&](std::size_t i) {
        const ProtocolTrace tr = b_protocol_run(browne_state(BrowneVariant::A, lambda[i], d), 20);
        for (std::size_t k : steps) {
            const ProtocolRecord& r = tr.records[k];
            blocks[i].push_back(Row{num(lambda[i]), count_str(k), num(r.delta_B * scale),
                                    num(r.success_prob), num(r.leakage)});
        }
    });
    for (auto& b : blocks) append(t.rows, std::move(b));
    return t;
}

Table figure_10(const Settings& s) {
    const std::vector<double> lambda = linspace(0.1, 1.0, 19);
    const std::size_t d = browne_cutoff(s);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Table t;
    t.columns = {"variant", "lambda", "deltaR", "Delta1", "Delta2", "Delta5", "DeltaInf"};
    t.meta["grid"] = {{"variant", {"a", "b"}}, {"lambda", lambda}, {"steps", {1, 2, 5, "limit"}},
                      {"cutoff", d}};
    t.rows = rows_parallel(2 * lambda.size(), s.threads, [&](std::size_t i) {
        const bool a = i < lambda.size();
        const double l = lambda[i % lambda.size()];
        const DensityMatrix rho = browne_state(a ? BrowneVariant::A : BrowneVariant::B, l, d);
        const ProtocolTrace tr = b_protocol_run(rho, 5);
        const ProtocolLimit lim = b_protocol_limit(rho);
        auto gain = [&](std::size_t k) { return tr.records[k].Delta.value_or(nan); };
        return Row{a ? "a" : "b", num(l), num(renormalized_ng(rho)), num(gain(1)), num(gain(2)),
                   num(gain(5)), num(lim.Delta.value_or(nan))};
    });
    return t;
}

Table figure_11(const Settings& s) {
    const LogBase base = s.base();
    const std::vector<double> r = linspace(0.05, 1.5, 30);
    Table t;
    t.columns = {"r", "E_N_one", "E_N_two", "deltaB_one", "deltaB_two"};
    t.meta["grid"] = {{"r", r}, {"subtracted", {1, 2}}};
    t.rows = rows_parallel(r.size(), s.threads, [&](std::size_t i) {
        const TProtocolOutput one = t_protocol_output(r[i], Subtraction::One, s.cutoff);
        const TProtocolOutput two = t_protocol_output(r[i], Subtraction::Two, s.cutoff);
        return Row{num(r[i]), num(log_negativity(one.state)), num(log_negativity(two.state)),
                   num(delta_B(one.state, base).value), num(delta_B(two.state, base).value)};
    });
    return t;
}

struct FigureInfo {
    std::string name;
    std::string title;
};

const std::vector<FigureInfo>& figure_info() {
    static const std::vector<FigureInfo> info = {
        {"1", "pure photon-number entangled states vs twice their marginals"},
        {"2", "Wehrl measure of squeezed Fock states"},
        {"3", "Fock states and superpositions (|n> + |n+k>)/sqrt 2"},
        {"4", "Fock-diagonal mixtures and random truncated mixtures"},
        {"5", "cat states vs phase"},
        {"6", "cat states, deltaB vs deltaA"},
        {"7", "Fock states under loss"},
        {"7b", "coherent states under phase diffusion"},
        {"8", "coherent states under Kerr evolution"},
        {"9", "B-protocol output per step"},
        {"10", "B-protocol entanglement gain vs renormalised non-Gaussianity"},
        {"11", "T-protocol outputs"},
    };
    return info;
}

}  // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& f : figure_info()) n.push_back(f.name);
        return n;
    }();
    return names;
}

int figure(const Settings& s, const std::string& name, std::size_t samples) {
    Table t;
    if (name == "1") t = figure_1(s);
    else if (name == "2") t = figure_2(s);
    else if (name == "3") t = figure_3(s);
    else if (name == "4") t = figure_4(s, samples);
    else if (name == "5") t = figure_5(s);
    else if (name == "6") t = figure_6(s);
    else if (name == "7") t = figure_7(s);
    else if (name == "7b") t = figure_7b(s);
    else if (name == "8") t = figure_8(s);
    else if (name == "9") t = figure_9(s);
    else if (name == "10") t = figure_10(s);
    else if (name == "11") t = figure_11(s);
    else throw ArgumentError("unknown figure '" + name + "'");

    json meta;
    meta["figure"] = name;
    for (const auto& f : figure_info())
        if (f.name == name) meta["title"] = f.title;
    meta["columns"] = t.columns;
    meta["grid"] = t.meta["grid"];
    meta["log_base"] = s.log_base;
    meta["seed"] = s.seed;
    meta["tolerance_profile"] = s.tolerance_profile;
    emit(s, [&](std::ostream& os) {
        csv_header(os, meta.dump());
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << '\n';
        }
    });
    return 0;
}

}  // namespace nongauss::cli
