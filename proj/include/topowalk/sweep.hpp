#pragma once

// Parameter-grid sweeps (one panel per step index T) with CSV and SVG
// heatmap export.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "topowalk/core.hpp"

namespace topowalk::sweep {

enum class Quantity {
    EnergyPlus,
    VelocityPlus,
    ZakAbsolute,
    ZakSigned,
    Winding,
    Chern,
    GapIndicator,
    PositionInvariant,
};

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view name);

enum class AxisName { Theta, Alpha, Beta, Alpha1, K, Kx, Ky, X };

std::string_view to_string(AxisName a);
AxisName parse_axis_name(std::string_view name);

struct Axis {
    AxisName name = AxisName::Theta;
    double min = 0.0;
    double max = 1.0;
    int samples = 8;

    /// Endpoint-inclusive; nests under samples -> 2 samples - 1.
    std::vector<double> values() const { return linspace(min, max, samples); }
};

/// Axis values override the corresponding fields of spec, base_momentum and
/// profile; everything else stays fixed.
struct SweepRequest {
    ProtocolSpec spec;
    std::vector<StepIndex> T_list;
    Axis axis1;
    Axis axis2;
    Quantity quantity = Quantity::EnergyPlus;
    Tolerances tolerances;
    Momentum base_momentum;            // ky is set for 2D families
    InhomogeneousProfile profile;      // PositionInvariant only
    int invariant_resolution = 256;    // winding; Chern uses max(64, resolution / 4)

    /// Throws std::invalid_argument for axes that do not fit the family or
    /// quantity, fewer than 8 samples, or degenerate ranges.
    void validate() const;
};

struct Panel {
    StepIndex T{1};
    std::vector<double> axis1_values;
    std::vector<double> axis2_values;
    std::vector<double> values;          // row-major: axis1 outer, axis2 inner; NaN when ill-defined
    std::vector<std::uint8_t> gapless;   // 1 when ill-defined or the spectrum closes at the cell

    std::size_t rows() const { return axis1_values.size(); }
    std::size_t cols() const { return axis2_values.size(); }
    double value(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
};

struct Metadata {
    std::string generated_at;  // informational; not written to exports
    std::string tool_version;
    std::uint64_t axis1_hash = 0;
    std::uint64_t axis2_hash = 0;
};

struct SweepResult {
    SweepRequest request;
    std::vector<Panel> panels;
    Metadata metadata;
};

inline constexpr std::string_view tool_version = "topowalk 1.0.0";

/// FNV-1a over the IEEE bytes of the values.
std::uint64_t fnv1a(const std::vector<double>& values);

/// Evaluates every cell on up to `threads` workers (0 = all cores). The result
/// does not depend on the worker count.
SweepResult run_sweep(const SweepRequest& req, unsigned threads = 0);

/// Writes every panel: a header line, a metadata comment, the column line and
/// one row per cell.
void write_csv(std::ostream& out, const SweepResult& result);
void export_csv(const SweepResult& result, const std::string& path);

struct ParsedPanel {
    std::string family;
    int T = 0;
    std::string quantity;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> value;
    std::vector<std::uint8_t> gapless;
};

/// Reads what write_csv produces. Throws std::runtime_error on malformed input.
std::vector<ParsedPanel> parse_csv(std::istream& in);

enum class Palette { Diverging, Sequential };

void write_svg_heatmap(std::ostream& out, const SweepResult& result, Palette palette);
void export_svg_heatmap(const SweepResult& result, const std::string& path, Palette palette);

/// Minimal well-formedness check: balanced, properly nested tags, quoted
/// attributes, a single root element.
bool xml_well_formed(std::string_view doc);

} // namespace topowalk::sweep
