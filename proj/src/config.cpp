#include "slseng/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace slseng {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_number(const std::string& raw, int line) {
    const std::string v = strip_quotes(trim(raw));
    if (v == "inf" || v == "Inf" || v == "INF" || v == "infinity") return kInf;
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw ConfigError("trailing characters in number '" + v + "'", line);
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("not a number: '" + v + "'", line);
    }
}

bool parse_bool(const std::string& raw, int line) {
    const std::string v = strip_quotes(trim(raw));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("not a boolean: '" + v + "'", line);
}

SecondaryType parse_secondary_type(const std::string& raw, int line) {
    const std::string v = strip_quotes(trim(raw));
    if (v == "T1" || v == "t1" || v == "1") return SecondaryType::T1;
    if (v == "T2" || v == "t2" || v == "2") return SecondaryType::T2;
    if (v == "T3" || v == "t3" || v == "3") return SecondaryType::T3;
    if (v == "T4" || v == "t4" || v == "4") return SecondaryType::T4;
    throw ConfigError("unknown secondary_type '" + v + "'", line);
}

std::vector<double> parse_axis_values(const std::string& raw, int line) {
    const std::string v = strip_quotes(trim(raw));
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        // start:step:stop
        std::stringstream ss(v);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw ConfigError("sweep range must be start:step:stop", line);
        const double start = parse_number(a, line);
        const double step = parse_number(b, line);
        const double stop = parse_number(c, line);
        if (!(step > 0.0)) throw ConfigError("sweep step must be > 0", line);
        for (double x = start; x <= stop + 1e-12 * std::fabs(step); x += step) out.push_back(x);
    } else {
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(parse_number(item, line));
        }
    }
    if (out.empty()) throw ConfigError("empty sweep axis", line);
    return out;
}

// Intermediate store: antenna/blockage settings interact, so raw values are
// collected first and materialized after the last key.
struct Loader {
    LoadedConfig cfg;
    std::size_t m_p = 4, m_s = 4;
    double kappa_deg = 121.0;
    std::string beam = "sectorized";
    double l_mu_m = kInf;
    double blockage_p = 0.0;
    std::optional<double> x_p0, delta_p0, omega_p0;

    void set(const std::string& key, const std::string& value, int line) {
        SystemParams& p = cfg.params;
        McConfig& mc = cfg.mc;
        ExperimentSpec& spec = cfg.spec;
        if (key.rfind("sweep_", 0) == 0) {
            const std::string axis = key.substr(6);
            validate_axis_name(axis, line);
            spec.axes.push_back({axis, parse_axis_values(value, line)});
            return;
        }
        if (key == "kind") spec.kind = parse_kind(strip_quotes(trim(value)));
        else if (key == "p_p_dbm") p.p_p = dbm_to_watt(parse_number(value, line));
        else if (key == "p_p_w") p.p_p = parse_number(value, line);
        else if (key == "p_s_dbm") p.p_s = dbm_to_watt(parse_number(value, line));
        else if (key == "p_s_w") p.p_s = parse_number(value, line);
        else if (key == "rho_w") p.rho = parse_number(value, line);
        else if (key == "rho_dbm") p.rho = dbm_to_watt(parse_number(value, line));
        else if (key == "r_p_m") p.r_p = parse_number(value, line);
        else if (key == "r_s_m") p.r_s = parse_number(value, line);
        else if (key == "lambda_s") p.lambda_s = parse_number(value, line);
        else if (key == "sigma2_w") p.sigma2 = parse_number(value, line);
        else if (key == "sigma2_dbm") p.sigma2 = dbm_to_watt(parse_number(value, line));
        else if (key == "alpha_l") p.plp.alpha_l = parse_number(value, line);
        else if (key == "alpha_n") p.plp.alpha_n = parse_number(value, line);
        else if (key == "c_l_db") p.plp.c_l = db_to_linear(parse_number(value, line));
        else if (key == "c_l") p.plp.c_l = parse_number(value, line);
        else if (key == "c_n_db") p.plp.c_n = db_to_linear(parse_number(value, line));
        else if (key == "c_n") p.plp.c_n = parse_number(value, line);
        else if (key == "nlos_outage") p.plp.nlos_outage = parse_bool(value, line);
        else if (key == "l_mu_m") l_mu_m = parse_number(value, line);
        else if (key == "mu_per_m") {
            const double mu = parse_number(value, line);
            l_mu_m = mu > 0.0 ? 1.0 / mu : kInf;
        }
        else if (key == "blockage_p") blockage_p = parse_number(value, line);
        else if (key == "kappa_deg") kappa_deg = parse_number(value, line);
        else if (key == "m_p") m_p = static_cast<std::size_t>(parse_number(value, line));
        else if (key == "m_s") m_s = static_cast<std::size_t>(parse_number(value, line));
        else if (key == "m") m_p = m_s = static_cast<std::size_t>(parse_number(value, line));
        else if (key == "beam") beam = strip_quotes(trim(value));
        else if (key == "region_r_m") {
            p.region_radius = parse_number(value, line);
            mc.region_radius = p.region_radius;
        }
        else if (key == "r_sim_m") mc.r_sim = parse_number(value, line);
        else if (key == "n_realizations")
            mc.n_realizations = static_cast<std::uint64_t>(parse_number(value, line));
        else if (key == "seed") mc.seed = static_cast<std::uint64_t>(parse_number(value, line));
        else if (key == "antithetic_fading") mc.antithetic_fading = parse_bool(value, line);
        else if (key == "threads") {
            spec.threads = static_cast<unsigned>(parse_number(value, line));
            mc.threads = spec.threads;
        }
        else if (key == "secondary_type") spec.secondary_type = parse_secondary_type(value, line);
        else if (key == "x_p0_m") x_p0 = parse_number(value, line);
        else if (key == "delta_p0_rad") delta_p0 = parse_number(value, line);
        else if (key == "omega_p0_rad") omega_p0 = parse_number(value, line);
        else if (key == "tau_db") spec.tau_db = parse_number(value, line);
        else if (key == "p_star") spec.p_star = parse_number(value, line);
        else if (key == "s_star") spec.s_star = parse_number(value, line);
        else if (key == "tau_star_db") spec.tau_star_db = parse_number(value, line);
        else if (key == "rho_min_w") spec.rho_grid.min_w = parse_number(value, line);
        else if (key == "rho_max_w") spec.rho_grid.max_w = parse_number(value, line);
        else if (key == "rho_step_db") spec.rho_grid.step_db = parse_number(value, line);
        else if (key == "n_placements")
            spec.n_placements = static_cast<std::size_t>(parse_number(value, line));
        else if (key == "rel_tol") p.quad.rel_tol = parse_number(value, line);
        else if (key == "abs_tol") p.quad.abs_tol = parse_number(value, line);
        else if (key == "radial_upper_bound_m")
            p.quad.radial_upper_bound = parse_number(value, line);
        else if (key == "series_max_terms")
            p.quad.series_max_terms = static_cast<std::size_t>(parse_number(value, line));
        else if (key == "series_term_tol") p.quad.series_term_tol = parse_number(value, line);
        else if (key == "out") spec.out_path = strip_quotes(trim(value));
        else if (key == "no_mc") spec.with_mc = !parse_bool(value, line);
        else throw ConfigError("unknown key '" + key + "'", line);
    }

    static void validate_axis_name(const std::string& axis, int line) {
        static const char* known[] = {"tau_db",   "rho_dbm",  "rho_w",    "rho_over_ps_db",
                                      "l_mu_m",   "lambda_s", "m",        "m_p",
                                      "m_s",      "region_r_m", "r_p_m",  "r_s_m",
                                      "x_p0_m",   "secondary_type", "p_star", "s_star",
                                      "x_s_m",    "theta_s_rad", "omega_s_rad"};
        for (const char* k : known)
            if (axis == k) return;
        throw ConfigError("unknown sweep axis '" + axis + "'", line);
    }

    LoadedConfig finalize() {
        SystemParams& p = cfg.params;
        if (l_mu_m == 0.0)
            p.blockage = BlockageParams::hbl();
        else if (std::isinf(l_mu_m) && blockage_p == 0.0)
            p.blockage = BlockageParams::zbl();
        else
            p.blockage = BlockageParams::general(std::isinf(l_mu_m) ? 0.0 : 1.0 / l_mu_m,
                                                 blockage_p);
        BeamKind kind = BeamKind::Sectorized;
        if (beam == "sectorized") kind = BeamKind::Sectorized;
        else if (beam == "ideal") kind = BeamKind::Ideal;
        else if (beam == "omni") kind = BeamKind::Omni;
        else throw ConfigError("unknown beam kind '" + beam + "'");
        if (kind == BeamKind::Omni)
            p.antennas = AntennaConfig::omni();
        else
            p.antennas = AntennaConfig::ula(m_p, m_s, deg_to_rad(kappa_deg), kind);
        if (x_p0 || delta_p0 || omega_p0) {
            if (!(x_p0 && delta_p0 && omega_p0))
                throw ConfigError("explicit placement needs x_p0_m, delta_p0_rad and omega_p0_rad");
            cfg.spec.explicit_placement =
                PrimaryPlacement(*x_p0, *delta_p0, *omega_p0, p.r_p, p.r_s);
        }
        std::sort(cfg.spec.axes.begin(), cfg.spec.axes.end(),
                  [](const SweepAxis& a, const SweepAxis& b) { return a.name < b.name; });
        p.validate();
        cfg.mc.validate();
        return cfg;
    }
};

std::string json_scalar_to_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
}

LoadedConfig parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    Loader loader;
    for (const auto& [key, value] : j.items()) {
        if (value.is_array()) {
            std::string list;
            for (const auto& item : value) {
                if (!list.empty()) list += ",";
                list += json_scalar_to_string(item);
            }
            loader.set(key, list, 0);
        } else {
            loader.set(key, json_scalar_to_string(value), 0);
        }
    }
    return loader.finalize();
}

}  // namespace

ExperimentKind parse_kind(const std::string& name) {
    if (name == "map-grid") return ExperimentKind::MapGrid;
    if (name == "af-sweep") return ExperimentKind::AfSweep;
    if (name == "primary-coverage") return ExperimentKind::PrimaryCoverage;
    if (name == "secondary-coverage") return ExperimentKind::SecondaryCoverage;
    if (name == "typical-coverage") return ExperimentKind::TypicalCoverage;
    if (name == "rho-select") return ExperimentKind::RhoSelect;
    if (name == "validate") return ExperimentKind::Validate;
    if (name == "mean-interference") return ExperimentKind::MeanInterference;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::MapGrid: return "map-grid";
        case ExperimentKind::AfSweep: return "af-sweep";
        case ExperimentKind::PrimaryCoverage: return "primary-coverage";
        case ExperimentKind::SecondaryCoverage: return "secondary-coverage";
        case ExperimentKind::TypicalCoverage: return "typical-coverage";
        case ExperimentKind::RhoSelect: return "rho-select";
        case ExperimentKind::Validate: return "validate";
        case ExperimentKind::MeanInterference: return "mean-interference";
    }
    return "unknown";
}

LoadedConfig parse_config(const std::string& text) {
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') return parse_json(text);

    Loader loader;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", lineno);
        loader.set(key, value, lineno);
    }
    return loader.finalize();
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string emit_config(const SystemParams& params) {
    std::ostringstream os;
    os << "p_p_w = " << fmt(params.p_p) << "\n";
    os << "p_s_w = " << fmt(params.p_s) << "\n";
    os << "rho_w = " << fmt(params.rho) << "\n";
    os << "r_p_m = " << fmt(params.r_p) << "\n";
    os << "r_s_m = " << fmt(params.r_s) << "\n";
    os << "lambda_s = " << fmt(params.lambda_s) << "\n";
    os << "sigma2_w = " << fmt(params.sigma2) << "\n";
    os << "alpha_l = " << fmt(params.plp.alpha_l) << "\n";
    os << "alpha_n = " << fmt(params.plp.alpha_n) << "\n";
    os << "c_l = " << fmt(params.plp.c_l) << "\n";
    os << "c_n = " << fmt(params.plp.c_n) << "\n";
    os << "nlos_outage = " << (params.plp.nlos_outage ? "true" : "false") << "\n";
    os << "l_mu_m = " << fmt(params.blockage.l_mu()) << "\n";
    os << "blockage_p = " << fmt(params.blockage.p) << "\n";
    // antennas: two-level patterns round-trip through the ULA parameters
    const BeamPattern& pt = params.antennas.pt;
    const BeamPattern& st = params.antennas.st;
    if (pt.kind == BeamKind::Omni && st.kind == BeamKind::Omni) {
        os << "beam = omni\n";
    } else {
        os << "beam = " << (pt.kind == BeamKind::Ideal || st.kind == BeamKind::Ideal
                                ? "ideal"
                                : "sectorized")
           << "\n";
        const double kappa = (pt.kind == BeamKind::Omni ? st.phi * st.a : pt.phi * pt.a);
        os << "kappa_deg = " << fmt(kappa * 180.0 / kPi) << "\n";
        os << "m_p = " << (pt.kind == BeamKind::Omni ? 1 : static_cast<int>(pt.a)) << "\n";
        os << "m_s = " << (st.kind == BeamKind::Omni ? 1 : static_cast<int>(st.a)) << "\n";
    }
    os << "region_r_m = " << fmt(params.region_radius) << "\n";
    os << "rel_tol = " << fmt(params.quad.rel_tol) << "\n";
    os << "abs_tol = " << fmt(params.quad.abs_tol) << "\n";
    os << "radial_upper_bound_m = " << fmt(params.quad.radial_upper_bound) << "\n";
    os << "series_max_terms = " << params.quad.series_max_terms << "\n";
    os << "series_term_tol = " << fmt(params.quad.series_term_tol) << "\n";
    return os.str();
}

std::string emit_config(const LoadedConfig& config) {
    std::ostringstream os;
    os << "kind = " << kind_name(config.spec.kind) << "\n";
    os << emit_config(config.params);
    os << "r_sim_m = " << fmt(config.mc.r_sim) << "\n";
    os << "n_realizations = " << config.mc.n_realizations << "\n";
    os << "seed = " << config.mc.seed << "\n";
    os << "antithetic_fading = " << (config.mc.antithetic_fading ? "true" : "false") << "\n";
    return os.str();
}

std::uint64_t params_hash(const SystemParams& params) {
    const std::string text = emit_config(params);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void apply_axis(LoadedConfig& config, const std::string& name, double value) {
    SystemParams& p = config.params;
    if (name == "tau_db") config.spec.tau_db = value;
    else if (name == "rho_dbm") p.rho = dbm_to_watt(value);
    else if (name == "rho_w") p.rho = value;
    else if (name == "rho_over_ps_db") p.rho = p.p_s * db_to_linear(value);
    else if (name == "l_mu_m") {
        if (value == 0.0) p.blockage = BlockageParams::hbl();
        else if (std::isinf(value)) p.blockage = BlockageParams::zbl();
        else p.blockage = BlockageParams::general(1.0 / value, p.blockage.p);
    }
    else if (name == "lambda_s") p.lambda_s = value;
    else if (name == "m" || name == "m_p" || name == "m_s") {
        const std::size_t m = static_cast<std::size_t>(value);
        const BeamKind kind = p.antennas.pt.kind == BeamKind::Ideal ||
                                      p.antennas.st.kind == BeamKind::Ideal
                                  ? BeamKind::Ideal
                                  : BeamKind::Sectorized;
        const double kappa_pt = p.antennas.pt.kind == BeamKind::Omni
                                    ? deg_to_rad(121.0)
                                    : p.antennas.pt.phi * p.antennas.pt.a;
        const double kappa_st = p.antennas.st.kind == BeamKind::Omni
                                    ? kappa_pt
                                    : p.antennas.st.phi * p.antennas.st.a;
        std::size_t m_p = name != "m_s" ? m
                                        : (p.antennas.pt.kind == BeamKind::Omni
                                               ? 1
                                               : static_cast<std::size_t>(p.antennas.pt.a));
        std::size_t m_s = name != "m_p" ? m
                                        : (p.antennas.st.kind == BeamKind::Omni
                                               ? 1
                                               : static_cast<std::size_t>(p.antennas.st.a));
        const BeamPattern bp = BeamPattern::ula(m_p, kappa_pt, kind);
        const BeamPattern bs = BeamPattern::ula(m_s, kappa_st, kind);
        p.antennas = {bp, bp, bs, bs};
    }
    else if (name == "region_r_m") {
        p.region_radius = value;
        config.mc.region_radius = value;
    }
    else if (name == "r_p_m") p.r_p = value;
    else if (name == "r_s_m") p.r_s = value;
    else if (name == "x_p0_m") {
        const PrimaryPlacement base = config.placement();
        config.spec.explicit_placement =
            PrimaryPlacement(value, base.delta_p0, base.omega_p0, p.r_p, p.r_s);
    }
    else if (name == "secondary_type") {
        const int t = static_cast<int>(value);
        if (t < 1 || t > 4) throw ConfigError("secondary_type axis values must be 1..4");
        config.spec.secondary_type = static_cast<SecondaryType>(t - 1);
        config.spec.explicit_placement.reset();
    }
    else if (name == "p_star") config.spec.p_star = value;
    else if (name == "s_star") config.spec.s_star = value;
    else throw ConfigError("unknown sweep axis '" + name + "'");
}

std::string format_axis_value(const std::string& name, double value) {
    if (name == "secondary_type") {
        const int t = static_cast<int>(value);
        return "T" + std::to_string(t);
    }
    if (name == "m" || name == "m_p" || name == "m_s")
        return std::to_string(static_cast<long long>(value));
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", value);
    return buf;
}

}  // namespace slseng
