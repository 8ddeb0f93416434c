#include "slseng/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "slseng/parallel.hpp"

namespace slseng {

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(const std::string& path) const {
        namespace fs = std::filesystem;
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
            for (std::size_t i = 0; i < header.size(); ++i)
                out << header[i] << (i + 1 < header.size() ? "," : "");
            out << "\r\n";
            for (const auto& row : rows) {
                for (std::size_t i = 0; i < row.size(); ++i)
                    out << row[i] << (i + 1 < row.size() ? "," : "");
                out << "\r\n";
            }
        }
        fs::rename(tmp, path);
    }
};

// odometer over the sorted axes; first axis slowest so rows come out in
// lexicographic grid order
std::vector<std::vector<double>> grid_combos(const std::vector<SweepAxis>& axes) {
    std::vector<std::vector<double>> combos;
    if (axes.empty()) return combos;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
        std::vector<double> combo(axes.size());
        for (std::size_t a = 0; a < axes.size(); ++a) combo[a] = axes[a].values[idx[a]];
        combos.push_back(std::move(combo));
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].values.size()) break;
            idx[a] = 0;
            if (a == 0) return combos;
        }
        if (axes.size() == 1 && idx[0] == 0) return combos;
    }
}

struct RowContext {
    LoadedConfig cfg;
    std::map<std::string, double> local;  // kind-local axes (map placement)
};

RowContext materialize(const LoadedConfig& base, const std::vector<SweepAxis>& axes,
                       const std::vector<double>& combo,
                       const std::vector<std::string>& local_names) {
    RowContext ctx{base, {}};
    for (std::size_t a = 0; a < axes.size(); ++a) {
        bool is_local = false;
        for (const auto& name : local_names)
            if (axes[a].name == name) {
                ctx.local[name] = combo[a];
                is_local = true;
                break;
            }
        if (!is_local) apply_axis(ctx.cfg, axes[a].name, combo[a]);
    }
    return ctx;
}

void add_axis_cells(std::vector<std::string>& row, const std::vector<SweepAxis>& axes,
                    const std::vector<double>& combo) {
    for (std::size_t a = 0; a < axes.size(); ++a)
        row.push_back(format_axis_value(axes[a].name, combo[a]));
}

struct FlagTracker {
    Flags flags;
    void note(const Flags& f) { flags.merge(f); }
    int exit_code(int base = 0) const {
        if (base != 0) return base;
        return (flags.series_failure || flags.series_fallback || flags.quad_nonconverged ||
                flags.range_violation)
                   ? 2
                   : base;
    }
};

std::vector<double> tau_values(const LoadedConfig& cfg) {
    for (const SweepAxis& axis : cfg.spec.axes)
        if (axis.name == "tau_db") return axis.values;
    return {cfg.spec.tau_db};
}

std::vector<SweepAxis> axes_without(const std::vector<SweepAxis>& axes,
                                    const std::string& name) {
    std::vector<SweepAxis> out;
    for (const auto& a : axes)
        if (a.name != name) out.push_back(a);
    return out;
}

Table run_map_grid(const LoadedConfig& cfg, FlagTracker& tracker) {
    std::vector<SweepAxis> axes = cfg.spec.axes;
    const bool has_x = std::any_of(axes.begin(), axes.end(),
                                   [](const SweepAxis& a) { return a.name == "x_s_m"; });
    if (!has_x) axes.push_back({"x_s_m", {25.0, 60.0, 150.0}});
    std::sort(axes.begin(), axes.end(),
              [](const SweepAxis& a, const SweepAxis& b) { return a.name < b.name; });

    Table t;
    t.header = {};
    for (const auto& a : axes) t.header.push_back(a.name);
    t.header.insert(t.header.end(), {"analytic"});
    if (cfg.spec.with_mc)
        t.header.insert(t.header.end(), {"mc_mean", "mc_stderr", "n_trials"});
    t.header.push_back("params_hash");

    const auto combos = grid_combos(axes);
    t.rows.resize(combos.size());
    parallel_for(combos.size(), cfg.spec.threads, [&](std::size_t i) {
        RowContext ctx = materialize(cfg, axes, combos[i],
                                     {"x_s_m", "theta_s_rad", "omega_s_rad"});
        const double x = ctx.local.count("x_s_m") ? ctx.local["x_s_m"] : 25.0;
        const double th = ctx.local.count("theta_s_rad") ? ctx.local["theta_s_rad"] : 0.0;
        const double om = ctx.local.count("omega_s_rad") ? ctx.local["omega_s_rad"] : kPi;
        const SecondaryPlacement sp(x, th, om);
        Flags flags;
        const double analytic = map_secondary(sp, ctx.cfg.params, &flags);
        std::vector<std::string> row;
        add_axis_cells(row, axes, combos[i]);
        row.push_back(num(analytic));
        if (cfg.spec.with_mc) {
            const McEstimate est =
                estimate_map(sp, ctx.cfg.params, ctx.cfg.mc.n_realizations, ctx.cfg.mc);
            row.push_back(num(est.mean));
            row.push_back(num(est.std_error));
            row.push_back(std::to_string(est.trials));
        }
        row.push_back(hash_hex(params_hash(ctx.cfg.params)));
        t.rows[i] = std::move(row);
        tracker.note(flags);
    });
    return t;
}

Table run_af_sweep(const LoadedConfig& cfg, FlagTracker& tracker) {
    const auto& axes = cfg.spec.axes;
    Table t;
    for (const auto& a : axes) t.header.push_back(a.name);
    t.header.push_back("analytic");
    if (cfg.spec.with_mc)
        t.header.insert(t.header.end(), {"mc_mean", "mc_stderr", "n_trials"});
    t.header.push_back("params_hash");

    const auto combos = grid_combos(axes.empty() ? std::vector<SweepAxis>{{"rho_dbm", {-90.0}}}
                                                 : axes);
    const auto used_axes =
        axes.empty() ? std::vector<SweepAxis>{{"rho_dbm", {-90.0}}} : axes;
    if (axes.empty()) t.header.insert(t.header.begin(), "rho_dbm");

    t.rows.resize(combos.size());
    parallel_for(combos.size(), cfg.spec.threads, [&](std::size_t i) {
        RowContext ctx = materialize(cfg, used_axes, combos[i], {});
        Flags flags;
        const double analytic =
            activity_factor(ctx.cfg.params, ctx.cfg.params.region_radius, &flags);
        std::vector<std::string> row;
        add_axis_cells(row, used_axes, combos[i]);
        row.push_back(num(analytic));
        if (cfg.spec.with_mc) {
            const McEstimate est = estimate_af(ctx.cfg.params, ctx.cfg.mc);
            row.push_back(num(est.mean));
            row.push_back(num(est.std_error));
            row.push_back(std::to_string(est.trials));
        }
        row.push_back(hash_hex(params_hash(ctx.cfg.params)));
        t.rows[i] = std::move(row);
        tracker.note(flags);
    });
    return t;
}

enum class CoverageKindSel { Primary, Secondary, Typical };

Table run_coverage(const LoadedConfig& cfg, CoverageKindSel sel, FlagTracker& tracker) {
    const std::vector<double> taus = tau_values(cfg);
    const std::vector<SweepAxis> outer = axes_without(cfg.spec.axes, "tau_db");

    Table t;
    for (const auto& a : outer) t.header.push_back(a.name);
    t.header.push_back("tau_db");
    t.header.push_back("analytic");
    if (cfg.spec.with_mc)
        t.header.insert(t.header.end(), {"mc_mean", "mc_stderr", "n_trials"});
    t.header.push_back("params_hash");

    auto combos = grid_combos(outer);
    if (combos.empty()) combos.push_back({});

    for (const auto& combo : combos) {
        RowContext ctx = materialize(cfg, outer, combo, {});
        const std::string hash = hash_hex(params_hash(ctx.cfg.params));

        std::vector<double> analytic(taus.size(), 0.0);
        std::vector<Flags> fl(taus.size());
        parallel_for(taus.size(), cfg.spec.threads, [&](std::size_t k) {
            const double tau = db_to_linear(taus[k]);
            switch (sel) {
                case CoverageKindSel::Primary:
                    analytic[k] = primary_coverage(tau, ctx.cfg.params, &fl[k]);
                    break;
                case CoverageKindSel::Secondary:
                    analytic[k] = secondary_coverage(tau, ctx.cfg.params, ctx.cfg.placement(),
                                                     &fl[k]);
                    break;
                case CoverageKindSel::Typical:
                    analytic[k] = typical_secondary_coverage(
                        tau, ctx.cfg.params, ctx.cfg.params.region_radius,
                        ctx.cfg.spec.n_placements, &fl[k], 1);
                    break;
            }
        });
        for (const Flags& f : fl) tracker.note(f);

        CoverageCurve mc_curve;
        if (cfg.spec.with_mc) {
            switch (sel) {
                case CoverageKindSel::Primary:
                    mc_curve = estimate_primary_coverage(taus, ctx.cfg.params, ctx.cfg.mc);
                    break;
                case CoverageKindSel::Secondary:
                    mc_curve = estimate_secondary_coverage(taus, ctx.cfg.params,
                                                           ctx.cfg.placement(), ctx.cfg.mc);
                    break;
                case CoverageKindSel::Typical:
                    mc_curve =
                        estimate_secondary_coverage(taus, ctx.cfg.params, std::nullopt,
                                                    ctx.cfg.mc);
                    break;
            }
        }

        for (std::size_t k = 0; k < taus.size(); ++k) {
            std::vector<std::string> row;
            add_axis_cells(row, outer, combo);
            row.push_back(num(taus[k]));
            row.push_back(num(analytic[k]));
            if (cfg.spec.with_mc) {
                row.push_back(num(mc_curve.values[k]));
                row.push_back(num(mc_curve.std_errors[k]));
                row.push_back(std::to_string(mc_curve.trials));
            }
            row.push_back(hash);
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table run_rho_select(const LoadedConfig& cfg, FlagTracker& tracker) {
    const auto& axes = cfg.spec.axes;
    Table t;
    for (const auto& a : axes) t.header.push_back(a.name);
    t.header.insert(t.header.end(),
                    {"tau_star_db", "p_star", "s_star", "rho_dagger_w", "params_hash"});
    auto combos = grid_combos(axes);
    if (combos.empty()) combos.push_back({});
    t.rows.resize(combos.size());
    for (std::size_t i = 0; i < combos.size(); ++i) {
        RowContext ctx = materialize(cfg, axes, combos[i], {});
        Flags flags;
        const RhoSelection sel = rho_dagger(
            ctx.cfg.params, db_to_linear(ctx.cfg.spec.tau_star_db), ctx.cfg.spec.p_star,
            ctx.cfg.spec.s_star, ctx.cfg.spec.secondary_type, ctx.cfg.spec.rho_grid, &flags,
            ctx.cfg.spec.threads, ctx.cfg.spec.n_placements);
        std::vector<std::string> row;
        add_axis_cells(row, axes, combos[i]);
        row.push_back(num(ctx.cfg.spec.tau_star_db));
        row.push_back(num(ctx.cfg.spec.p_star));
        row.push_back(num(ctx.cfg.spec.s_star));
        row.push_back(sel.feasible ? num(sel.rho) : "infeasible");
        row.push_back(hash_hex(params_hash(ctx.cfg.params)));
        t.rows[i] = std::move(row);
        tracker.note(flags);
    }
    return t;
}

Table run_mean_interference(const LoadedConfig& cfg, FlagTracker& tracker) {
    Table t;
    t.header = {"case",    "exclusion_radius_m", "analytic_w", "analytic_window_w",
                "mc_mean", "mc_stderr",          "n_trials",   "params_hash"};
    for (MediumCase medium : {MediumCase::LosOnly, MediumCase::NlosOnly}) {
        Flags flags;
        const MeanInterference mi = mean_interference_noblockage(cfg.params, medium);
        const LinkState st =
            medium == MediumCase::LosOnly ? LinkState::LOS : LinkState::NLOS;
        const double alpha = cfg.params.plp.alpha(st);
        const double c = cfg.params.plp.near_field(st);
        const double windowed =
            kTwoPi * cfg.params.lambda_s * cfg.params.p_s * c / (alpha - 2.0) *
            (std::pow(mi.exclusion_radius, 2.0 - alpha) - std::pow(cfg.mc.r_sim, 2.0 - alpha));
        std::vector<std::string> row{medium == MediumCase::LosOnly ? "los" : "nlos",
                                     num(mi.exclusion_radius), num(mi.value), num(windowed)};
        if (cfg.spec.with_mc) {
            const McEstimate est = estimate_mean_interference(cfg.params, cfg.mc, medium);
            row.push_back(num(est.mean));
            row.push_back(num(est.std_error));
            row.push_back(std::to_string(est.trials));
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        row.push_back(hash_hex(params_hash(cfg.params)));
        t.rows.push_back(std::move(row));
        tracker.note(flags);
    }
    return t;
}

Table run_validate(const LoadedConfig& cfg, FlagTracker& tracker, bool& all_ok) {
    Table t;
    t.header = {"check", "analytic", "mc_mean", "mc_stderr", "z_ratio", "pass"};
    all_ok = true;

    const auto push = [&](const std::string& name, double analytic, const McEstimate& est) {
        const double z = est.std_error > 0.0
                             ? std::fabs(analytic - est.mean) / est.std_error
                             : (analytic == est.mean ? 0.0 : kInf);
        const bool ok = z <= 3.0;
        all_ok = all_ok && ok;
        t.rows.push_back({name, num(analytic), num(est.mean), num(est.std_error), num(z),
                          ok ? "yes" : "no"});
    };

    McConfig mc = cfg.mc;
    Flags flags;

    {  // MAP at a representative pose
        const SecondaryPlacement sp(40.0, 0.6, kPi / 3);
        const double analytic = map_secondary(sp, cfg.params, &flags);
        push("map", analytic, estimate_map(sp, cfg.params, 40000, mc));
    }
    {  // AF in the configured region
        McConfig mc_af = mc;
        mc_af.n_realizations = std::max<std::uint64_t>(mc.n_realizations / 2, 200);
        const double analytic = activity_factor(cfg.params, cfg.params.region_radius, &flags);
        push("activity_factor", analytic, estimate_af(cfg.params, mc_af));
    }
    {  // primary coverage at tau_db
        const double tau = db_to_linear(cfg.spec.tau_db);
        const double analytic = primary_coverage(tau, cfg.params, &flags);
        const CoverageCurve c = estimate_primary_coverage({cfg.spec.tau_db}, cfg.params, mc);
        push("primary_coverage", analytic, {c.values[0], c.std_errors[0], c.trials});
    }
    {  // secondary coverage at the configured placement
        const double tau = db_to_linear(cfg.spec.tau_db);
        SystemParams relaxed = cfg.params;
        relaxed.quad = cfg.params.quad.relaxed(1e-6);
        const double analytic = secondary_coverage(tau, relaxed, cfg.placement(), &flags);
        const CoverageCurve c =
            estimate_secondary_coverage({cfg.spec.tau_db}, cfg.params, cfg.placement(), mc);
        push("secondary_coverage", analytic, {c.values[0], c.std_errors[0], c.trials});
    }
    tracker.note(flags);
    return t;
}

}  // namespace

RunResult run_experiment(const LoadedConfig& cfg) {
    RunResult result;
    FlagTracker tracker;
    Table table;
    bool validate_ok = true;

    switch (cfg.spec.kind) {
        case ExperimentKind::MapGrid: table = run_map_grid(cfg, tracker); break;
        case ExperimentKind::AfSweep: table = run_af_sweep(cfg, tracker); break;
        case ExperimentKind::PrimaryCoverage:
            table = run_coverage(cfg, CoverageKindSel::Primary, tracker);
            break;
        case ExperimentKind::SecondaryCoverage:
            table = run_coverage(cfg, CoverageKindSel::Secondary, tracker);
            break;
        case ExperimentKind::TypicalCoverage:
            table = run_coverage(cfg, CoverageKindSel::Typical, tracker);
            break;
        case ExperimentKind::RhoSelect: table = run_rho_select(cfg, tracker); break;
        case ExperimentKind::Validate: table = run_validate(cfg, tracker, validate_ok); break;
        case ExperimentKind::MeanInterference:
            table = run_mean_interference(cfg, tracker);
            break;
    }

    const std::string path =
        cfg.spec.out_path.empty() ? kind_name(cfg.spec.kind) + ".csv" : cfg.spec.out_path;
    table.write(path);
    result.csv_path = path;

    std::ostringstream summary;
    summary << kind_name(cfg.spec.kind) << ": " << table.rows.size() << " rows -> " << path;
    if (tracker.flags.series_fallback) summary << " [series fallback]";
    if (tracker.flags.series_failure) summary << " [series failure]";
    if (tracker.flags.quad_nonconverged) summary << " [quadrature warning]";
    if (cfg.spec.kind == ExperimentKind::Validate)
        summary << (validate_ok ? " [all checks ok]" : " [CHECK FAILURES]");
    result.summary = summary.str();
    result.exit_code = tracker.exit_code(validate_ok ? 0 : 1);
    return result;
}

}  // namespace slseng
