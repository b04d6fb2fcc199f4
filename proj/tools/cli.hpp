#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nongauss/config.hpp"
#include "nongauss/errors.hpp"
#include "nongauss/fock.hpp"

namespace nongauss::cli {

/// Global flags shared by every subcommand.
struct Settings {
    std::size_t cutoff = 0;  // 0 = automatic
    std::string tolerance_profile = "default";
    std::string log_base = "nat";
    std::uint64_t seed = 20240601;
    std::string out;  // empty = stdout
    std::size_t threads = 1;
    bool json_errors = false;

    LogBase base() const;
};

/// A parsed state; `psi` is set for pure states so measures can take the
/// cheaper vector paths.
struct State {
    std::optional<FockStateVector> psi;
    DensityMatrix rho;

    explicit State(FockStateVector v);
    explicit State(DensityMatrix m);
};

/// State specs:
///   vacuum | fock:n | coherent:re[,im] | thermal:N | squeezed:r[,phi]
///   sqfock:n,r[,phi] | super:n,k | cat:alpha,phi | poisson:lambda
///   diag:q0,q1,... | pnes:{twin|tmc|pssv|pasv},x | browne:{a|b},lambda
///   file:path.json
/// cutoff = 0 starts from a small basis and grows it until the tail fits.
State parse_state(const std::string& spec, std::size_t cutoff);

/// Runs f(cutoff).  With requested = 0 it starts at `start` and retries with
/// the cutoff suggested by each TruncationError, up to `cap`.
template <typename F>
auto with_cutoff(std::size_t requested, std::size_t start, F&& f, std::size_t cap = 400)
    -> decltype(f(std::size_t{})) {
    if (requested != 0) return f(requested);
    std::size_t c = start;
    while (true) {
        try {
            return f(c);
        } catch (const TruncationError& e) {
            const std::size_t next = std::max(e.suggested_cutoff(), c + 1);
            if (next > cap) throw;
            c = next;
        }
    }
}

/// Splits "a,b,c" (empty fields are kept).
std::vector<std::string> split(const std::string& text, char sep);
double parse_double(const std::string& text, const std::string& what);
std::size_t parse_count(const std::string& text, const std::string& what);

/// Uniform grid lo, lo + h, ..., hi with `points` entries, rounded to 12
/// significant digits; parse_grid reads "lo:hi:points" or "a,b,c".
std::vector<double> linspace(double lo, double hi, std::size_t points);
std::vector<double> parse_grid(const std::string& text);

/// CSV number format ("%.12g"); NaN is written as n/a.
std::string num(double v);
/// "# {json}" metadata line opening every CSV output.
void csv_header(std::ostream& os, const std::string& json_text);

/// Writes to Settings::out, or stdout when it is empty.
void emit(const Settings& s, const std::function<void(std::ostream&)>& body);

// Subcommand bodies.
int state_build(const Settings& s, const std::string& spec);
int state_inspect(const Settings& s, const std::string& spec);
int measure(const Settings& s, const std::string& which, const std::string& spec, bool as_json,
            int digits, double wehrl_spacing);
int channel_apply(const Settings& s, const std::string& spec,
                  const std::vector<std::string>& channels);
int protocol_browne(const Settings& s, const std::string& variant, double lambda,
                    const std::string& spec, std::size_t steps);
int protocol_taka(const Settings& s, const std::vector<double>& r);
int bound(const Settings& s, const std::string& which, const std::string& spec,
          const std::string& hist, double eta);
int sweep(const Settings& s, const std::string& state_template, const std::string& channel,
          const std::string& measure_name, const std::string& var, const std::string& grid);

/// Figure names accepted by `figure`, in order.
const std::vector<std::string>& figure_names();
/// `samples` sizes the random-mixture clouds of figure 4.
int figure(const Settings& s, const std::string& name, std::size_t samples);

}  // namespace nongauss::cli
