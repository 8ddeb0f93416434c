#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slseng/analytic.hpp"
#include "slseng/montecarlo.hpp"
#include "slseng/params.hpp"

namespace slseng {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg) {}
};

enum class ExperimentKind {
    MapGrid,
    AfSweep,
    PrimaryCoverage,
    SecondaryCoverage,
    TypicalCoverage,
    RhoSelect,
    Validate,
    MeanInterference,
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind kind);

struct SweepAxis {
    std::string name;          // config key of the swept parameter, unit-suffixed
    std::vector<double> values;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Validate;
    std::vector<SweepAxis> axes;  // sorted by name; rows iterate in odometer order
    std::string out_path;
    bool with_mc = true;
    double tau_db = 0.0;
    double p_star = 0.7;
    double s_star = 0.5;
    double tau_star_db = -7.0;
    RhoGrid rho_grid{};
    std::size_t n_placements = 256;
    SecondaryType secondary_type = SecondaryType::T2;
    std::optional<PrimaryPlacement> explicit_placement;
    unsigned threads = 0;
};

struct LoadedConfig {
    SystemParams params;
    McConfig mc;
    ExperimentSpec spec;

    PrimaryPlacement placement() const {
        if (spec.explicit_placement) return *spec.explicit_placement;
        return params.placement(spec.secondary_type);
    }
};

// Flat key=value text (or a JSON object with the same keys). Unknown keys
// are errors; missing keys fall back to the defaults; all dB/dBm values are
// converted to linear on load.
LoadedConfig parse_config(const std::string& text);
LoadedConfig load_config(const std::string& path);

// Canonical key=value rendering; load_config(emit_config(p)) == p exactly.
std::string emit_config(const SystemParams& params);
std::string emit_config(const LoadedConfig& config);

std::uint64_t params_hash(const SystemParams& params);

// Apply one swept-axis value to a loaded configuration.
void apply_axis(LoadedConfig& config, const std::string& name, double value);

// Rendering for CSV cells: axis values in config units.
std::string format_axis_value(const std::string& name, double value);

}  // namespace slseng
