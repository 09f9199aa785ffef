#include <cmath>
#include <stdexcept>

#include "topowalk/topology.hpp"

namespace topowalk::topology {

namespace {
constexpr double kSameAngle = 1e-8;
}

bool has_cell_pattern(const std::vector<CellBoundary>& b)
{
    using K = BoundaryKind;
    static constexpr K pattern[] = {K::FlatBand, K::FermiArc, K::DiracCone, K::FermiArc, K::FlatBand};
    if (b.size() < 5) return false;
    for (std::size_t i = 0; i + 5 <= b.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < 5 && ok; ++j) ok = b[i + j].kind == pattern[j];
        if (ok) return true;
    }
    return false;
}

CellReport enumerate_cells(StepIndex T, AngleRelation relation, AngleRange alpha_range, int samples,
                           const Tolerances& tol)
{
    const ProtocolSpec spec = ProtocolSpec::split_related(Family::Split1D, alpha_range.first, relation);
    CellReport report;
    report.alpha_range = alpha_range;
    for (const GapClosing& g : locate_gap_closings(spec, T, alpha_range, samples, tol)) {
        if (!report.ordered_boundaries.empty() &&
            std::abs(report.ordered_boundaries.back().angle - g.angle) < kSameAngle) {
            CellBoundary& last = report.ordered_boundaries.back();
            if (last.sector != g.sector) last.both_sectors = true;
            continue;
        }
        CellBoundary cb;
        cb.angle = g.angle;
        cb.kind = classify_boundary(spec, T, g, tol);
        cb.sector = g.sector;
        report.ordered_boundaries.push_back(cb);
    }
    report.pattern_present = has_cell_pattern(report.ordered_boundaries);
    return report;
}

std::optional<InvariantValue> position_resolved_invariant(const InhomogeneousProfile& profile, StepIndex T,
                                                          double x, int resolution, const Tolerances& tol)
{
    profile.validate();
    const auto [alpha, beta] = profile.angles_at(x);
    try {
        return winding_number(ProtocolSpec::split(Family::Split1D, alpha, beta), T, resolution, tol);
    } catch (const GaplessError&) {
        return std::nullopt;
    }
}

} // namespace topowalk::topology
