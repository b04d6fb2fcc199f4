#include "nongauss/config.hpp"

#include <cmath>

#include "nongauss/errors.hpp"

namespace nongauss {

namespace {
Tolerances g_tolerances;
}

const Tolerances& tolerances() noexcept { return g_tolerances; }

void set_tolerances(const Tolerances& t) noexcept { g_tolerances = t; }

Tolerances tolerance_profile(const std::string& name) {
    Tolerances t;
    if (name == "default") return t;
    double f = 0.0;
    if (name == "strict") {
        f = 0.01;
    } else if (name == "loose") {
        f = 100.0;
    } else {
        throw ArgumentError("unknown tolerance profile '" + name +
                            "' (expected default, strict or loose)");
    }
    t.norm *= f;
    t.herm *= f;
    t.eig *= f;
    t.symp *= f;
    t.ref *= f;
    t.tail *= f;
    t.leak_max *= f;
    t.clamp *= f;
    return t;
}

double log_scale(LogBase base) noexcept {
    return base == LogBase::Two ? 1.0 / std::log(2.0) : 1.0;
}

}  // namespace nongauss
