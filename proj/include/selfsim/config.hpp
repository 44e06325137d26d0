#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/fbm.hpp"
#include "selfsim/stable.hpp"

namespace selfsim {

enum class ExperimentKind {
    interior_prob,
    endpoint_interior,
    staircase,
    winding_growth,
    self_similarity_ks,
    reversibility_ks,
    stationarity_ks,
    stable_cf,
};

inline std::uint32_t experiment_id(ExperimentKind kind) {
    return static_cast<std::uint32_t>(kind) + 1;
}

inline std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::interior_prob: return "interior_prob";
        case ExperimentKind::endpoint_interior: return "endpoint_interior";
        case ExperimentKind::staircase: return "staircase";
        case ExperimentKind::winding_growth: return "winding_growth";
        case ExperimentKind::self_similarity_ks: return "self_similarity_ks";
        case ExperimentKind::reversibility_ks: return "reversibility_ks";
        case ExperimentKind::stationarity_ks: return "stationarity_ks";
        case ExperimentKind::stable_cf: return "stable_cf";
    }
    throw ConfigError("unknown experiment kind");
}

enum class GeneratorKind { fbm, stable, circle, spiral, ray };

// Flat key = value configuration, one experiment per file.  '#' starts a
// comment; keys outside the documented schema are rejected.
class ConfigMap {
public:
    ConfigMap() = default;

    static ConfigMap parse(std::istream& is) {
        ConfigMap cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trimmed = trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            if (cfg.values_.count(key))
                throw ConfigError("config: duplicate key '" + key + "'");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string require_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("config: missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_double(key, it->second);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::uint64_t v = 0;
        const auto& s = it->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError("config: key '" + key + "' must be a nonnegative integer");
        return v;
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string field;
        while (std::getline(ss, field, ','))
            out.push_back(parse_double(key, trim(field)));
        if (out.empty()) throw ConfigError("config: key '" + key + "' has no values");
        return out;
    }

    const std::map<std::string, std::string>& raw() const { return values_; }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

private:
    static double parse_double(const std::string& key, const std::string& s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError("config: key '" + key + "' must be numeric, got '" + s + "'");
        return v;
    }

    std::map<std::string, std::string> values_;
};

// Fully typed experiment description, built from a ConfigMap.
struct ExperimentPlan {
    ExperimentKind kind = ExperimentKind::interior_prob;
    GeneratorKind generator = GeneratorKind::fbm;

    FbmSpec fbm;        // when generator == fbm
    StableSpec stable;  // when generator == stable
    Eigen::Vector2d ray_direction{1.0, 0.0};
    double circle_radius = 1.0;

    std::size_t dim = 2;
    std::size_t resolution = 4096;
    double horizon = 1.0;
    std::size_t replicates = 2000;
    std::uint64_t master_seed = 20260819;
    std::size_t threads = 1;

    // interior / endpoint / staircase
    std::size_t refine_resolution = 64;
    double threshold_p = 0.99;
    double staircase_tail = 0.5;

    // winding
    std::size_t levels = 8;
    std::size_t points_per_efold = 512;
    double min_radius_guard = 1e-9;
    double growth_fraction = 0.9;
    double median_lo = 0.5;
    double median_hi = 1.5;

    // distribution checks
    double scale_factor = 2.0;
    double t0 = 0.5;
    double u1 = 0.0;
    double u2 = 0.0;
    double ks_level = 0.01;
    double autocov_lag = 1.0;
    std::vector<double> u_values{0.5, 1.0, 2.0};

    std::map<std::string, std::string> config_echo;

    double hurst() const {
        switch (generator) {
            case GeneratorKind::fbm: return fbm.hindex;
            case GeneratorKind::stable: return stable.hurst();
            default: return 1.0;  // deterministic stubs scale linearly
        }
    }
};

namespace detail {

inline const std::set<std::string>& allowed_config_keys() {
    static const std::set<std::string> keys = {
        "experiment", "generator", "dim", "hurst", "q", "alpha", "sigma", "scale",
        "truncation", "resolution", "horizon", "replicates", "master_seed", "threads",
        "refine_resolution", "threshold_p", "staircase_tail", "levels", "points_per_efold",
        "min_radius_guard", "growth_fraction", "median_lo", "median_hi", "scale_factor",
        "t0", "u1", "u2", "ks_level", "autocov_lag", "u_values", "direction", "radius",
    };
    return keys;
}

inline ExperimentKind parse_experiment_kind(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(ExperimentKind::stable_cf); ++i) {
        const auto kind = static_cast<ExperimentKind>(i);
        if (experiment_name(kind) == name) return kind;
    }
    throw ConfigError("config: unknown experiment '" + name + "'");
}

inline GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "fbm") return GeneratorKind::fbm;
    if (name == "stable") return GeneratorKind::stable;
    if (name == "circle") return GeneratorKind::circle;
    if (name == "spiral") return GeneratorKind::spiral;
    if (name == "ray") return GeneratorKind::ray;
    throw ConfigError("config: unknown generator '" + name + "'");
}

// "uniform" or semicolon-separated atoms "x1,...,xd @ w"; directions are
// normalized, so users may write "1,1 @ 0.25".
inline SpectralMeasure parse_sigma(const std::string& text, std::size_t dim) {
    if (text == "uniform") return SpectralMeasure::uniform(dim);
    std::vector<SpectralAtom> atoms;
    std::stringstream ss(text);
    std::string atom_text;
    while (std::getline(ss, atom_text, ';')) {
        const auto at = atom_text.find('@');
        if (at == std::string::npos)
            throw ConfigError("config: sigma atom needs 'components @ weight'");
        std::stringstream comp(atom_text.substr(0, at));
        std::string field;
        std::vector<double> v;
        while (std::getline(comp, field, ',')) {
            const auto f = ConfigMap::trim(field);
            if (f.empty()) continue;
            double x = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
            if (ec != std::errc() || ptr != f.data() + f.size())
                throw ConfigError("config: bad sigma component '" + f + "'");
            v.push_back(x);
        }
        if (v.size() != dim) throw ConfigError("config: sigma atom dimension mismatch");
        const auto w_text = ConfigMap::trim(atom_text.substr(at + 1));
        double w = 0.0;
        auto [ptr, ec] = std::from_chars(w_text.data(), w_text.data() + w_text.size(), w);
        if (ec != std::errc() || ptr != w_text.data() + w_text.size() || !(w > 0.0))
            throw ConfigError("config: bad sigma weight '" + w_text + "'");
        SpectralAtom a;
        a.direction = Eigen::Map<const Eigen::VectorXd>(v.data(),
                                                        static_cast<Eigen::Index>(v.size()));
        const double nrm = a.direction.norm();
        if (!(nrm > 0.0)) throw ConfigError("config: sigma atom has zero direction");
        a.direction /= nrm;
        a.weight = w;
        atoms.push_back(std::move(a));
    }
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    for (auto& a : atoms) a.weight /= total;
    try {
        return SpectralMeasure::discrete(dim, std::move(atoms));
    } catch (const Error& e) {
        throw ConfigError(std::string("config: invalid sigma: ") + e.what());
    }
}

inline Eigen::MatrixXd parse_q(const std::string& text, std::size_t dim) {
    if (text == "identity")
        return Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                         static_cast<Eigen::Index>(dim));
    std::vector<double> v;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto f = ConfigMap::trim(field);
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
        if (ec != std::errc() || ptr != f.data() + f.size())
            throw ConfigError("config: bad q entry '" + f + "'");
        v.push_back(x);
    }
    if (v.size() != dim * dim)
        throw ConfigError("config: q needs dim*dim row-major entries");
    Eigen::MatrixXd q(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i * dim + j];
    return q;
}

}  // namespace detail

inline ExperimentPlan build_plan(const ConfigMap& cfg) {
    for (const auto& [key, value] : cfg.raw()) {
        if (!detail::allowed_config_keys().count(key))
            throw ConfigError("config: unknown key '" + key + "'");
    }
    ExperimentPlan p;
    p.kind = detail::parse_experiment_kind(cfg.require_string("experiment"));
    p.generator = detail::parse_generator_kind(cfg.require_string("generator"));
    p.dim = cfg.get_u64("dim", 2);
    if (p.dim < 1) throw ConfigError("config: dim must be >= 1");

    try {
        if (p.generator == GeneratorKind::fbm) {
            p.fbm.hindex = cfg.get_double("hurst", 0.5);
            p.fbm.dim = p.dim;
            p.fbm.q = detail::parse_q(cfg.get_string("q", "identity"), p.dim);
            p.fbm.validate();
        } else if (p.generator == GeneratorKind::stable) {
            p.stable.alpha = cfg.get_double("alpha", 1.5);
            p.stable.sigma = detail::parse_sigma(cfg.get_string("sigma", "uniform"), p.dim);
            p.stable.scale = cfg.get_double("scale", 1.0);
            p.stable.truncation = cfg.get_u64("truncation", 10000);
            p.stable.validate();
        } else {
            if (p.dim != 2) throw ConfigError("config: stub generators are planar");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("config: invalid generator: ") + e.what());
    }

    if (p.generator == GeneratorKind::ray) {
        const auto v = cfg.get_double_list("direction", {1.0, 0.0});
        if (v.size() != 2) throw ConfigError("config: direction needs 2 components");
        p.ray_direction = Eigen::Vector2d(v[0], v[1]);
        if (!(p.ray_direction.norm() > 0.0)) throw ConfigError("config: zero direction");
    }
    p.circle_radius = cfg.get_double("radius", 1.0);
    if (!(p.circle_radius > 0.0)) throw ConfigError("config: radius must be positive");

    p.resolution = cfg.get_u64("resolution", 4096);
    if (p.resolution < 2) throw ConfigError("config: resolution must be >= 2");
    p.horizon = cfg.get_double("horizon", 1.0);
    if (!(p.horizon > 0.0)) throw ConfigError("config: horizon must be positive");
    p.replicates = cfg.get_u64("replicates", 2000);
    if (p.replicates < 1) throw ConfigError("config: replicates must be >= 1");
    p.master_seed = cfg.get_u64("master_seed", 20260819);
    p.threads = cfg.get_u64("threads", 1);
    if (p.threads < 1) throw ConfigError("config: threads must be >= 1");

    p.refine_resolution = cfg.get_u64("refine_resolution", 64);
    if (p.refine_resolution < 2) throw ConfigError("config: refine_resolution must be >= 2");
    p.threshold_p = cfg.get_double(
        "threshold_p", p.kind == ExperimentKind::endpoint_interior ? 0.95 : 0.99);
    p.staircase_tail = cfg.get_double("staircase_tail", 0.5);
    if (!(p.staircase_tail > 0.0 && p.staircase_tail < 1.0))
        throw ConfigError("config: staircase_tail must lie in (0,1)");

    p.levels = cfg.get_u64("levels", 8);
    if (p.levels < 2) throw ConfigError("config: levels must be >= 2");
    p.points_per_efold = cfg.get_u64("points_per_efold", 512);
    if (p.points_per_efold < 1) throw ConfigError("config: points_per_efold must be >= 1");
    p.min_radius_guard = cfg.get_double("min_radius_guard", 1e-9);
    if (!(p.min_radius_guard > 0.0)) throw ConfigError("config: min_radius_guard must be positive");
    p.growth_fraction = cfg.get_double("growth_fraction", 0.9);
    p.median_lo = cfg.get_double("median_lo", 0.5);
    p.median_hi = cfg.get_double("median_hi", 1.5);

    p.scale_factor = cfg.get_double("scale_factor", 2.0);
    if (!(p.scale_factor > 0.0)) throw ConfigError("config: scale_factor must be positive");
    p.t0 = cfg.get_double("t0", 0.5);
    if (!(p.t0 > 0.0)) throw ConfigError("config: t0 must be positive");
    const bool stable_gen = (p.generator == GeneratorKind::stable);
    p.u1 = cfg.get_double("u1", stable_gen ? std::log(0.25) : 0.0);
    p.u2 = cfg.get_double("u2", stable_gen ? std::log(0.5) : std::log(2.0));
    if (!(p.u1 < p.u2)) throw ConfigError("config: u1 must be less than u2");
    p.ks_level = cfg.get_double("ks_level", 0.01);
    if (!(p.ks_level > 0.0 && p.ks_level < 1.0))
        throw ConfigError("config: ks_level must lie in (0,1)");
    p.autocov_lag = cfg.get_double("autocov_lag", 1.0);
    p.u_values = cfg.get_double_list("u_values", {0.5, 1.0, 2.0});

    if (p.kind == ExperimentKind::stable_cf && !stable_gen)
        throw ConfigError("config: stable_cf requires the stable generator");
    if (p.kind == ExperimentKind::winding_growth && p.dim != 2)
        throw ConfigError("config: winding_growth is planar");
    if (p.kind == ExperimentKind::staircase && p.dim != 2)
        throw ConfigError("config: staircase is planar");
    if (p.kind == ExperimentKind::winding_growth && stable_gen &&
        !(p.stable.alpha > 1.0))
        throw ConfigError("config: winding_growth needs hurst in [1/2, 1)");
    if (stable_gen && p.horizon > 1.0 &&
        (p.kind == ExperimentKind::interior_prob ||
         p.kind == ExperimentKind::endpoint_interior || p.kind == ExperimentKind::staircase))
        throw ConfigError("config: stable paths are sampled on [0,1]");

    p.config_echo = cfg.raw();
    p.config_echo["experiment"] = experiment_name(p.kind);
    return p;
}

}  // namespace selfsim
