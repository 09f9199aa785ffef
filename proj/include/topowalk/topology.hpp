#pragma once

// Topological invariants and gap-closing analysis: winding, Zak and Chern
// numbers, located gap closings, boundary-state classification and cell
// structures along linearly related coin angles.

#include <optional>
#include <utility>
#include <vector>

#include "topowalk/core.hpp"

namespace topowalk::topology {

enum class EnergySector { Zero, PlusMinusPi };
enum class BoundaryKind { DiracCone, FermiArc, FlatBand };

std::string_view to_string(EnergySector s);
std::string_view to_string(BoundaryKind k);

/// A gap closing (or, with flat = true, a flat band at E = +-pi/2) at a
/// scanned angle. solution_index is the integer c of the analytic solutions
/// and is empty for numerically located closings.
struct GapClosing {
    double angle = 0.0;
    Momentum momentum;
    EnergySector sector = EnergySector::Zero;
    std::optional<int> solution_index;
    bool flat = false;
};

using AngleRange = std::pair<double, double>;

/// Closed-form closing angles in [0, 2 pi] for the simple protocols at the
/// given momentum. Momenta without real solutions give an empty list. With
/// flat = true the flat-band angles (4 pi c +- pi) / T are returned instead.
/// Throws std::invalid_argument for split families.
std::vector<GapClosing> analytic_gap_angles(Family family, StepIndex T, EnergySector sector,
                                            const Momentum& k, bool flat = false,
                                            const Tolerances& tol = {});

/// Momenta where |cos E| reaches its maximum over the zone for every angle;
/// all gap closings of the family happen at one of them.
std::vector<Momentum> high_symmetry_momenta(Family family);

/// Scans the spec's angle (theta or alpha; beta follows the relation) over
/// `range` with `samples` points and bisects every closing to machine
/// precision. Sectors that stay closed over the whole range are skipped; see
/// gapless_throughout. Sorted by angle, then sector.
std::vector<GapClosing> locate_gap_closings(const ProtocolSpec& spec, StepIndex T, AngleRange range,
                                            int samples, const Tolerances& tol = {},
                                            unsigned threads = 1);

struct GaplessSector {
    Momentum momentum;
    EnergySector sector;
};

/// Sectors whose gap is closed at every sampled angle of the range.
std::vector<GaplessSector> gapless_throughout(const ProtocolSpec& spec, StepIndex T, AngleRange range,
                                              int samples, const Tolerances& tol = {});

/// Kind from the trigonometric conditions alone.
BoundaryKind classify_analytic(const ProtocolSpec& spec, StepIndex T, double angle,
                               const Tolerances& tol = {});
/// Kind from the band shape next to the gapless momentum.
BoundaryKind classify_numeric(const ProtocolSpec& spec, StepIndex T, const GapClosing& closing);

/// Analytic verdict cross-checked by the numeric probe. Throws
/// std::invalid_argument when the point is not gapless (or not flat for flat
/// entries) and std::logic_error when the two verdicts disagree.
BoundaryKind classify_boundary(const ProtocolSpec& spec, StepIndex T, const GapClosing& closing,
                               const Tolerances& tol = {});

struct InvariantValue {
    double value = 0.0;
    std::optional<int> quantized;
    int resolution = 0;
};

/// (1/2pi) integral of (n x dn/dk).A over the zone. One-dimensional families;
/// resolution >= 256. Throws GaplessError when n is ill-defined on the grid.
InvariantValue winding_number(const ProtocolSpec& spec, StepIndex T, int resolution,
                              const Tolerances& tol = {});

/// -sin(T theta / 2) sqrt(csc(T theta / 2)); reference value only.
/// Throws DomainError unless sin(T theta / 2) > 0.
double winding_closed_form(StepIndex T, double theta);

enum class ZakMode { Signed, Absolute };

struct ZakValue {
    double value = 0.0;
    bool divergent = false;
};

/// tan(T alpha / 2) / tan(T beta / 2), or its modulus.
ZakValue zak_phase(StepIndex T, double alpha, double beta, ZakMode mode);

/// (1/4pi) integral of (dn/dkx x dn/dky).n over the zone. Two-dimensional
/// families; resolution >= 64 per axis. Throws GaplessError on gapless grids.
InvariantValue chern_number(const ProtocolSpec& spec, StepIndex T, int resolution,
                            const Tolerances& tol = {}, unsigned threads = 1);

struct PathInvariants {
    int q0 = 0;
    int qpi = 0;
};

/// Number of closings at E = 0 and E = +-pi met when the scanned angle moves
/// from start to end. Throws GaplessError for gapless endpoints.
PathInvariants path_invariants(const ProtocolSpec& spec, StepIndex T, double start, double end,
                               int samples, const Tolerances& tol = {});

struct CellBoundary {
    double angle = 0.0;
    BoundaryKind kind = BoundaryKind::DiracCone;
    EnergySector sector = EnergySector::Zero;
    bool both_sectors = false;  // the gap closes at E = 0 and E = pi together
};

struct CellReport {
    AngleRange alpha_range{0.0, 0.0};
    std::vector<CellBoundary> ordered_boundaries;
    bool pattern_present = false;
};

/// Split1D closings along beta = s1 alpha + s2, merged per angle and
/// classified; reports whether FlatBand, FermiArc, DiracCone, FermiArc,
/// FlatBand appears as consecutive boundaries.
CellReport enumerate_cells(StepIndex T, AngleRelation relation, AngleRange alpha_range, int samples,
                           const Tolerances& tol = {});

/// True when the kinds contain the flat/Fermi/Dirac/Fermi/flat window.
bool has_cell_pattern(const std::vector<CellBoundary>& boundaries);

/// Winding number of the homogeneous Split1D walk with the angles frozen at
/// position x. Empty when that walk is gapless.
std::optional<InvariantValue> position_resolved_invariant(const InhomogeneousProfile& profile,
                                                          StepIndex T, double x, int resolution,
                                                          const Tolerances& tol = {});

} // namespace topowalk::topology
