#include "nongauss/serialize.hpp"

#include <fstream>

#include "nongauss/errors.hpp"

namespace nongauss {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ArgumentError(std::string("JSON is missing field '") + key + "'");
    }
    return j.at(key);
}

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("JSON field '") + key + "': " + e.what());
    }
}

Eigen::VectorXcd complex_entries(const json& j, std::size_t expected) {
    const auto re = get_as<std::vector<double>>(j, "re");
    const auto im = get_as<std::vector<double>>(j, "im");
    if (re.size() != expected || im.size() != expected) {
        throw ArgumentError("state JSON has " + std::to_string(re.size()) + " entries, expected " +
                            std::to_string(expected));
    }
    Eigen::VectorXcd v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) v(static_cast<Eigen::Index>(i)) = cplx(re[i], im[i]);
    return v;
}

json header(const char* kind, std::size_t modes, std::size_t cutoff, double leakage) {
    return json{{"kind", kind}, {"modes", modes}, {"cutoff", cutoff}, {"leakage", leakage}};
}

std::size_t state_dimension(const json& j) {
    const auto modes = get_as<std::size_t>(j, "modes");
    const auto cutoff = get_as<std::size_t>(j, "cutoff");
    if (modes == 0 || modes > kMaxModes || cutoff == 0) throw ArgumentError("bad modes or cutoff in state JSON");
    std::size_t dim = 1;
    for (std::size_t k = 0; k < modes; ++k) dim *= cutoff;
    return dim;
}

}  // namespace

json to_json(const FockStateVector& psi) {
    json j = header("vector", psi.modes(), psi.cutoff(), psi.leakage());
    std::vector<double> re(psi.dimension()), im(psi.dimension());
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
        re[i] = psi[i].real();
        im[i] = psi[i].imag();
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

json to_json(const DensityMatrix& rho) {
    json j = header("density", rho.modes(), rho.cutoff(), rho.leakage());
    const std::size_t n = rho.dimension();
    std::vector<double> re(n * n), im(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            re[r * n + c] = rho(r, c).real();
            im[r * n + c] = rho(r, c).imag();
        }
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

json to_json(const GaussianData& g) {
    json sigma = json::array();
    for (Eigen::Index r = 0; r < g.sigma.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(g.sigma.cols()));
        for (Eigen::Index c = 0; c < g.sigma.cols(); ++c) row[static_cast<std::size_t>(c)] = g.sigma(r, c);
        sigma.push_back(row);
    }
    return json{{"X", std::vector<double>(g.X.data(), g.X.data() + g.X.size())}, {"sigma", sigma}};
}

json to_json(const MeasureReport& r) { return json{{"value", r.value}, {"diagnostics", r.diagnostics}}; }

bool is_vector_state(const json& j) {
    if (j.is_object() && j.contains("kind")) return get_as<std::string>(j, "kind") == "vector";
    const std::size_t dim = state_dimension(j);
    return field(j, "re").size() == dim;
}

FockStateVector vector_from_json(const json& j) {
    if (!is_vector_state(j)) throw ArgumentError("JSON holds a density matrix, not a state vector");
    const std::size_t dim = state_dimension(j);
    const double leak = j.contains("leakage") ? get_as<double>(j, "leakage") : 0.0;
    return FockStateVector(get_as<std::size_t>(j, "modes"), get_as<std::size_t>(j, "cutoff"),
                           complex_entries(j, dim), leak);
}

DensityMatrix density_from_json(const json& j) {
    if (is_vector_state(j)) return DensityMatrix(vector_from_json(j));
    const std::size_t dim = state_dimension(j);
    const Eigen::VectorXcd flat = complex_entries(j, dim * dim);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                flat(static_cast<Eigen::Index>(r * dim + c));
    const double leak = j.contains("leakage") ? get_as<double>(j, "leakage") : 0.0;
    return DensityMatrix(get_as<std::size_t>(j, "modes"), get_as<std::size_t>(j, "cutoff"),
                         std::move(m), leak);
}

GaussianData gaussian_from_json(const json& j) {
    const auto X = get_as<std::vector<double>>(j, "X");
    const auto S = get_as<std::vector<std::vector<double>>>(j, "sigma");
    if (X.empty() || X.size() % 2 != 0 || S.size() != X.size()) {
        throw ArgumentError("Gaussian JSON needs X of even length and a matching sigma");
    }
    GaussianData g;
    g.X = Eigen::Map<const Eigen::VectorXd>(X.data(), static_cast<Eigen::Index>(X.size()));
    g.sigma.resize(static_cast<Eigen::Index>(X.size()), static_cast<Eigen::Index>(X.size()));
    for (std::size_t r = 0; r < S.size(); ++r) {
        if (S[r].size() != X.size()) throw ArgumentError("sigma must be square");
        for (std::size_t c = 0; c < S.size(); ++c)
            g.sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = S[r][c];
    }
    return g;
}

MeasureReport report_from_json(const json& j) {
    MeasureReport r;
    r.value = get_as<double>(j, "value");
    if (j.contains("diagnostics")) r.diagnostics = get_as<std::map<std::string, double>>(j, "diagnostics");
    return r;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ArgumentError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write " + path);
    out << j.dump() << '\n';
}

}  // namespace nongauss
