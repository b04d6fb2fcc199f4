#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "nongauss/bounds.hpp"
#include "nongauss/channels.hpp"
#include "nongauss/distillation.hpp"
#include "nongauss/gaussian.hpp"
#include "nongauss/measures.hpp"
#include "nongauss/parallel.hpp"
#include "nongauss/serialize.hpp"

namespace nongauss::cli {

namespace {

MeasureReport run_measure(const std::string& which, const State& st, LogBase base,
                          double wehrl_spacing) {
    if (which == "deltaA") return st.psi ? delta_A(*st.psi) : delta_A(st.rho);
    if (which == "deltaB") return st.psi ? delta_B(*st.psi, base) : delta_B(st.rho, base);
    if (which == "deltaC") {
        WehrlGrid grid;
        if (wehrl_spacing > 0.0) grid.spacing = wehrl_spacing;
        MeasureReport r = delta_C(st.rho, grid);
        r.value *= log_scale(base);
        return r;
    }
    throw ArgumentError("measure must be deltaA, deltaB or deltaC, got '" + which + "'");
}

State apply(State st, const ChannelSpec& c) {
    c.validate();
    if (st.psi) {
        switch (c.kind) {
            case ChannelSpec::Kind::Kerr: return State(kerr(*st.psi, c.gamma));
            case ChannelSpec::Kind::Displace: return State(displace(*st.psi, c.alpha));
            case ChannelSpec::Kind::Squeeze: return State(squeeze(*st.psi, c.r, c.phi));
            default: break;
        }
    }
    return State(apply_channel(st.rho, c));
}

/// Replaces every "{var}" in text with the value.
std::string substitute(std::string text, const std::string& var, double value) {
    const std::string key = "{" + var + "}";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos)) {
        text.replace(pos, key.size(), buf);
        pos += std::char_traits<char>::length(buf);
    }
    return text;
}

double scalar_measure(const std::string& name, const State& st, LogBase base) {
    if (name == "deltaA" || name == "deltaB" || name == "deltaC") {
        return run_measure(name, st, base, 0.0).value;
    }
    if (name == "purity") return purity(st.rho);
    if (name == "entropy") return von_neumann_entropy(st.rho, base);
    if (name == "mean") return mean_photon_number(st.rho, 0);
    if (name == "EN") return st.psi ? log_negativity(*st.psi) : log_negativity(st.rho);
    throw ArgumentError("sweep measure must be deltaA, deltaB, deltaC, purity, entropy, mean or EN");
}

}  // namespace

int state_build(const Settings& s, const std::string& spec) {
    const State st = parse_state(spec, s.cutoff);
    const json j = st.psi ? to_json(*st.psi) : to_json(st.rho);
    emit(s, [&](std::ostream& os) { os << j.dump() << '\n'; });
    return 0;
}

int state_inspect(const Settings& s, const std::string& spec) {
    const State st = parse_state(spec, s.cutoff);
    const DensityMatrix& rho = st.rho;
    json j;
    j["kind"] = st.psi ? "vector" : "density";
    j["modes"] = rho.modes();
    j["cutoff"] = rho.cutoff();
    j["dimension"] = rho.dimension();
    j["leakage"] = rho.leakage();
    j["purity"] = purity(rho);
    j["entropy"] = von_neumann_entropy(rho, s.base());
    json n = json::array();
    for (std::size_t m = 0; m < rho.modes(); ++m) n.push_back(mean_photon_number(rho, m));
    j["mean_photons"] = n;
    j["moments"] = to_json(st.psi ? moments(*st.psi) : moments(rho));
    if (rho.modes() == 2) j["log_negativity"] = st.psi ? log_negativity(*st.psi) : log_negativity(rho);
    emit(s, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return 0;
}

int measure(const Settings& s, const std::string& which, const std::string& spec, bool as_json,
            int digits, double wehrl_spacing) {
    const State st = parse_state(spec, s.cutoff);
    const MeasureReport r = run_measure(which, st, s.base(), wehrl_spacing);
    emit(s, [&](std::ostream& os) {
        if (as_json) {
            json j = to_json(r);
            j["measure"] = which;
            j["state"] = spec;
            j["log_base"] = s.log_base;
            os << j.dump(2) << '\n';
        } else {
            os << std::fixed << std::setprecision(digits) << r.value << '\n';
        }
    });
    return 0;
}

int channel_apply(const Settings& s, const std::string& spec,
                  const std::vector<std::string>& channels) {
    State st = parse_state(spec, s.cutoff);
    for (const auto& c : channels) st = apply(std::move(st), parse_channel(c));
    const json j = st.psi ? to_json(*st.psi) : to_json(st.rho);
    emit(s, [&](std::ostream& os) { os << j.dump() << '\n'; });
    return 0;
}

int protocol_browne(const Settings& s, const std::string& variant, double lambda,
                    const std::string& spec, std::size_t steps) {
    const std::string source =
        spec.empty() ? "browne:" + variant + "," + substitute("{l}", "l", lambda) : spec;
    const State st = parse_state(source, s.cutoff);
    const ProtocolTrace trace = b_protocol_run(st.rho, steps);
    json meta;
    meta["protocol"] = "browne";
    meta["state"] = source;
    meta["steps"] = steps;
    meta["cutoff"] = st.rho.cutoff();
    emit(s, [&](std::ostream& os) {
        csv_header(os, meta.dump());
        trace.write_csv(os);
    });
    return 0;
}

int protocol_taka(const Settings& s, const std::vector<double>& r) {
    struct Row {
        double EN = 0.0, dB = 0.0, residual = 0.0;
        std::size_t cutoff = 0;
    };
    std::vector<Row> rows(2 * r.size());
    const LogBase base = s.base();
    parallel_for(rows.size(), s.threads, [&](std::size_t i) {
        const Subtraction sub = i % 2 == 0 ? Subtraction::One : Subtraction::Two;
        const TProtocolOutput o = t_protocol_output(r[i / 2], sub, s.cutoff);
        rows[i] = {log_negativity(o.state), delta_B(o.state, base).value, o.commuted_residual,
                   o.state.cutoff()};
    });
    json meta;
    meta["protocol"] = "taka";
    meta["r"] = r;
    meta["log_base"] = s.log_base;
    emit(s, [&](std::ostream& os) {
        csv_header(os, meta.dump());
        os << "r,subtracted,E_N,deltaB,commuted_residual,cutoff\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << num(r[i / 2]) << ',' << (i % 2 + 1) << ',' << num(rows[i].EN) << ','
               << num(rows[i].dB) << ',' << num(rows[i].residual) << ',' << rows[i].cutoff << '\n';
        }
    });
    return 0;
}

int bound(const Settings& s, const std::string& which, const std::string& spec,
          const std::string& hist, double eta) {
    const LogBase base = s.base();
    double value = 0.0;
    if (which == "A" && !hist.empty()) {
        std::ifstream in(hist);
        if (!in) throw ArgumentError("cannot open histogram '" + hist + "'");
        value = epsilon_A(read_histogram(in), base);
    } else {
        if (spec.empty()) throw ArgumentError("bound " + which + " needs --state" +
                                              (which == "A" ? " or --hist" : ""));
        const DensityMatrix rho = parse_state(spec, s.cutoff).rho;
        if (which == "A") {
            value = epsilon_A(rho, eta, base);
        } else if (which == "B") {
            value = epsilon_B(rho, base);
        } else if (which == "C") {
            value = epsilon_C(rho, eta, base);
        } else if (which == "D") {
            value = epsilon_D(rho, base);
        } else if (which == "E") {
            value = epsilon_E(rho, eta, base);
        } else {
            throw ArgumentError("bound must be one of A, B, C, D, E");
        }
    }
    emit(s, [&](std::ostream& os) { os << std::fixed << std::setprecision(6) << value << '\n'; });
    return 0;
}

int sweep(const Settings& s, const std::string& state_template, const std::string& channel,
          const std::string& measure_name, const std::string& var, const std::string& grid) {
    const std::vector<double> xs = parse_grid(grid);
    const LogBase base = s.base();
    std::vector<double> values(xs.size()), leak(xs.size());
    parallel_for(xs.size(), s.threads, [&](std::size_t i) {
        State st = parse_state(substitute(state_template, var, xs[i]), s.cutoff);
        if (!channel.empty()) {
            for (const auto& c : split(substitute(channel, var, xs[i]), ';'))
                st = apply(std::move(st), parse_channel(c));
        }
        values[i] = scalar_measure(measure_name, st, base);
        leak[i] = st.rho.leakage();
    });
    json meta;
    meta["sweep"] = {{"state", state_template}, {"channel", channel}, {"measure", measure_name},
                     {"var", var}, {"grid", xs}};
    emit(s, [&](std::ostream& os) {
        csv_header(os, meta.dump());
        os << var << ',' << measure_name << ",leakage\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << num(xs[i]) << ',' << num(values[i]) << ',' << num(leak[i]) << '\n';
    });
    return 0;
}

}  // namespace nongauss::cli
