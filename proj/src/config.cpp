#include "jetwave/config.hpp"

#include "jetwave/checks.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

namespace jetwave {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"n_theta", "n_z", "n_rho", "length_z"}},
        {"physics", {"R", "sigma"}},
        {"ic", {"linear_companion"}},
        {"evolution", {"dt", "t_final", "filter_eps", "record_every", "cfl", "tol_elliptic", "max_iter", "restart"}},
        {"output", {"table", "manifest"}},
        {"dispersion", {"modes"}},
        {"verify", {"samples", "t_final", "corrupt_lambda0_sign", "groups"}},
    };
    return keys;
}

const std::regex& mode_key() {
    static const std::regex re("mode[0-9]+");
    return re;
}

template <class T>
T convert(const std::string& key, const std::string& raw) {
    try {
        return boost::lexical_cast<T>(boost::algorithm::trim_copy(raw));
    } catch (const boost::bad_lexical_cast&) {
        throw ConfigError(key, "cannot parse '" + raw + "'");
    }
}

// Accepts plain numbers and multiples of π written as "4pi".
double parse_length(const std::string& key, const std::string& raw) {
    std::string s = boost::algorithm::trim_copy(raw);
    if (boost::algorithm::iends_with(s, "pi")) {
        std::string head = boost::algorithm::trim_copy(s.substr(0, s.size() - 2));
        if (boost::algorithm::ends_with(head, "*")) head.pop_back();
        return (head.empty() ? 1.0 : convert<double>(key, head)) * std::numbers::pi;
    }
    return convert<double>(key, s);
}

bool parse_bool(const std::string& key, const std::string& raw) {
    std::string s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(raw));
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key, "expected a boolean, got '" + raw + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, raw, boost::algorithm::is_any_of(","));
    for (auto& p : parts) boost::algorithm::trim(p);
    return parts;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        auto v = sec->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return *v;
    }
    std::string require(const std::string& section, const std::string& key) const {
        auto v = raw(section, key);
        if (!v) throw ConfigError(section + "." + key, "missing required key '" + key + "'");
        return *v;
    }
    template <class T>
    T get(const std::string& section, const std::string& key, T fallback) const {
        auto v = raw(section, key);
        return v ? convert<T>(section + "." + key, *v) : fallback;
    }
    template <class T>
    T get_required(const std::string& section, const std::string& key) const {
        return convert<T>(section + "." + key, require(section, key));
    }

private:
    const pt::ptree& tree_;
};

void reject_unknown(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
        auto it = allowed_keys().find(section);
        if (it == allowed_keys().end()) throw ConfigError(section, "unknown section '" + section + "'");
        for (const auto& [key, value] : body) {
            if (section == "ic" && std::regex_match(key, mode_key())) continue;
            if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key '" + key + "'");
        }
    }
}

int lattice_index(const std::string& key, double k, double length_z) {
    const double n = k * length_z / (2.0 * std::numbers::pi);
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, std::abs(n)))
        throw ConfigError(key, "wavenumber is not on the lattice 2πn/length_z");
    return static_cast<int>(r);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", std::string("malformed config: ") + e.message());
    }
    reject_unknown(tree);
    Reader r(tree);
    RunConfig c;

    c.n_theta = r.get_required<int>("grid", "n_theta");
    c.n_z = r.get_required<int>("grid", "n_z");
    c.n_rho = r.get<int>("grid", "n_rho", 48);
    auto lz = r.raw("grid", "length_z");
    c.length_z = lz ? parse_length("grid.length_z", *lz) : 2.0 * std::numbers::pi;
    if (c.n_theta < 8 || c.n_theta % 2) throw ConfigError("grid.n_theta", "must be an even integer ≥ 8");
    if (c.n_z < 8 || c.n_z % 2) throw ConfigError("grid.n_z", "must be an even integer ≥ 8");
    if (c.n_rho < 4) throw ConfigError("grid.n_rho", "must be at least 4");
    if (!(c.length_z > 0.0)) throw ConfigError("grid.length_z", "must be positive");

    c.R = r.get_required<double>("physics", "R");
    c.sigma = r.get_required<double>("physics", "sigma");
    if (!(c.R > 0.0)) throw ConfigError("physics.R", "must be positive");
    if (!(c.sigma > 0.0)) throw ConfigError("physics.sigma", "must be positive");

    if (auto sec = tree.get_child_optional("ic")) {
        std::vector<std::pair<int, ModeSpec>> modes;
        for (const auto& [key, value] : *sec) {
            if (key == "linear_companion") continue;
            const std::string name = "ic." + key;
            auto parts = split_list(value.data());
            if (parts.size() < 4 || parts.size() > 5)
                throw ConfigError(name, "expected 'field, amplitude, m, k[, phase]'");
            ModeSpec m;
            m.field = parts[0];
            if (m.field != "eta" && m.field != "psi") throw ConfigError(name, "field must be eta or psi");
            m.amplitude = convert<double>(name, parts[1]);
            m.m = convert<int>(name, parts[2]);
            m.k = parse_length(name, parts[3]);
            m.phase = parts.size() == 5 ? convert<double>(name, parts[4]) : 0.0;
            const int n = lattice_index(name, m.k, c.length_z);
            if (std::abs(m.m) >= c.n_theta / 2 || std::abs(n) >= c.n_z / 2)
                throw ConfigError(name, "mode is not resolved by the grid");
            modes.emplace_back(std::stoi(key.substr(4)), m);
        }
        std::sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [idx, m] : modes) c.modes.push_back(m);
        c.linear_companion = boost::algorithm::trim_copy(r.raw("ic", "linear_companion").value_or("none"));
        if (c.linear_companion != "none" && c.linear_companion != "eigen")
            throw ConfigError("ic.linear_companion", "must be none or eigen");
    }

    EvolutionConfig& e = c.evolution;
    const std::string dt = boost::algorithm::trim_copy(r.raw("evolution", "dt").value_or("auto"));
    e.dt = dt == "auto" ? 0.0 : convert<double>("evolution.dt", dt);
    if (dt != "auto" && !(e.dt > 0.0)) throw ConfigError("evolution.dt", "must be positive or 'auto'");
    e.t_final = r.get<double>("evolution", "t_final", 1.0);
    e.filter_eps = r.get<double>("evolution", "filter_eps", 0.0);
    e.record_every = r.get<int>("evolution", "record_every", 1);
    e.cfl = r.get<double>("evolution", "cfl", 0.5);
    e.elliptic.n_rho = c.n_rho;
    e.elliptic.tol = r.get<double>("evolution", "tol_elliptic", 1e-11);
    e.elliptic.max_iter = r.get<int>("evolution", "max_iter", 200);
    e.elliptic.restart = r.get<int>("evolution", "restart", 60);
    if (!(e.t_final > 0.0)) throw ConfigError("evolution.t_final", "must be positive");
    if (e.filter_eps < 0.0) throw ConfigError("evolution.filter_eps", "must be nonnegative");
    if (e.record_every < 1) throw ConfigError("evolution.record_every", "must be at least 1");
    if (!(e.cfl > 0.0)) throw ConfigError("evolution.cfl", "must be positive");
    if (!(e.elliptic.tol >= 1e-13 && e.elliptic.tol <= 1e-6))
        throw ConfigError("evolution.tol_elliptic", "must lie in [1e-13, 1e-6]");
    if (e.elliptic.max_iter < 1) throw ConfigError("evolution.max_iter", "must be positive");
    if (e.elliptic.restart < 1) throw ConfigError("evolution.restart", "must be positive");

    c.table_file = boost::algorithm::trim_copy(r.raw("output", "table").value_or(c.table_file));
    c.manifest_file = boost::algorithm::trim_copy(r.raw("output", "manifest").value_or(c.manifest_file));

    if (auto modes = r.raw("dispersion", "modes")) {
        for (const auto& item : split_list(*modes)) {
            std::vector<std::string> mk;
            boost::algorithm::split(mk, item, boost::algorithm::is_any_of(":"));
            if (mk.size() != 2) throw ConfigError("dispersion.modes", "expected entries 'm:k'");
            c.dispersion_modes.push_back({convert<int>("dispersion.modes", mk[0]), parse_length("dispersion.modes", mk[1])});
        }
    }

    c.verify_samples = r.get<int>("verify", "samples", 100);
    c.verify_t_final = r.get<double>("verify", "t_final", 1.0);
    if (auto v = r.raw("verify", "corrupt_lambda0_sign")) c.corrupt_lambda0_sign = parse_bool("verify.corrupt_lambda0_sign", *v);
    if (auto v = r.raw("verify", "groups")) {
        for (const auto& name : split_list(*v)) {
            const auto& known = verification_groups();
            if (std::find(known.begin(), known.end(), name) == known.end())
                throw ConfigError("verify.groups", "unknown group '" + name + "'");
            c.verify_groups.push_back(name);
        }
    }
    if (c.verify_samples < 1) throw ConfigError("verify.samples", "must be positive");
    if (!(c.verify_t_final > 0.0)) throw ConfigError("verify.t_final", "must be positive");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SurfaceState initial_state(const RunConfig& cfg) {
    const TorusGrid g = cfg.grid();
    TorusField eta = TorusField::constant(g, cfg.R), psi(g);
    for (const ModeSpec& m : cfg.modes) {
        TorusField wave = TorusField::sample(g, [&](double th, double z) { return std::cos(m.m * th + m.k * z + m.phase); });
        if (m.field == "eta") {
            eta = eta + m.amplitude * wave;
            if (cfg.linear_companion == "eigen" && !(m.m == 0 && m.k == 0.0)) {
                const double w2 = linearized_omega_squared(cfg.R, cfg.sigma, m.m, m.k);
                const double lam = bessel_dtn(std::abs(m.m), std::abs(m.k), cfg.R);
                if (w2 < 0.0 && lam > 0.0) psi = psi + (std::sqrt(-w2) / lam * m.amplitude) * wave;
            }
        } else {
            psi = psi + m.amplitude * wave;
        }
    }
    return {eta, psi, cfg.R, cfg.sigma, 0.0};
}

}  // namespace jetwave
