#pragma once

// Position-space evolution on a periodic ring (1D) or torus (2D). At step m
// the coin angles are m * angle / 2; a frozen step index keeps them at T.

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "topowalk/core.hpp"

namespace topowalk::realspace {

enum class Dim { One, Two };

/// Sites are labelled x = i - extent / 2 for i = 0 .. extent - 1 (same for y).
struct LatticeGeometry {
    Dim dim = Dim::One;
    int extent_x = 64;
    int extent_y = 1;

    static LatticeGeometry ring(int extent);
    static LatticeGeometry torus(int ex, int ey);

    std::size_t sites() const { return static_cast<std::size_t>(extent_x) * static_cast<std::size_t>(extent_y); }
    int x_of(int ix) const { return ix - extent_x / 2; }
    int y_of(int iy) const { return iy - extent_y / 2; }
    void validate() const;
};

/// Amplitudes stored as [site][spin] with site = ix * extent_y + iy.
struct WalkState {
    LatticeGeometry geometry;
    std::vector<Complex> amplitudes;
    int step = 0;

    double norm() const;
    Complex up(int ix, int iy = 0) const { return amplitudes[index(ix, iy)]; }
    Complex down(int ix, int iy = 0) const { return amplitudes[index(ix, iy) + 1]; }
    std::size_t index(int ix, int iy = 0) const
    {
        return 2 * (static_cast<std::size_t>(ix) * static_cast<std::size_t>(geometry.extent_y) +
                    static_cast<std::size_t>(iy));
    }
};

/// Delta-localised state at position x (and y). Throws std::invalid_argument
/// for out-of-range positions or a spinor whose norm differs from 1 by > 1e-12.
WalkState new_state(const LatticeGeometry& geometry, int x, const Spinor& spinor);
WalkState new_state(const LatticeGeometry& geometry, int x, int y, const Spinor& spinor);

/// One step of the protocol with coin index state.step + 1, or `frozen`.
WalkState apply_step(const WalkState& state, const ProtocolSpec& spec,
                     std::optional<StepIndex> frozen = std::nullopt);

/// One Split1D step with position-dependent angles alpha(x), beta(x).
WalkState apply_inhomogeneous_step(const WalkState& state, const InhomogeneousProfile& profile,
                                   Family family = Family::Split1D,
                                   std::optional<StepIndex> frozen = std::nullopt);

/// Either a homogeneous protocol or an inhomogeneous Split1D profile.
struct Stepper {
    std::variant<ProtocolSpec, InhomogeneousProfile> rule;
    std::optional<StepIndex> frozen;

    WalkState operator()(const WalkState& s) const;
};

struct ObservableRecord {
    int step = 0;
    double norm = 0.0;
    double mean_x = 0.0;
    double variance_x = 0.0;
    std::optional<double> mean_y;
    std::optional<double> variance_y;
    std::optional<double> window_probability;  // P(|x| <= window), 1D only
};

struct Trajectory {
    std::vector<ObservableRecord> records;  // initial state plus one per step
    WalkState final_state;
    bool wrap_warning = false;  // extent <= 2 * steps + 2
};

ObservableRecord observe(const WalkState& state, std::optional<int> window = std::nullopt);

/// Applies `steps` (>= 1) steps and records observables after each.
Trajectory evolve(const WalkState& initial, const Stepper& stepper, int steps,
                  std::optional<int> window = std::nullopt);

/// Per-site probability, ordered like the sites.
std::vector<double> position_distribution(const WalkState& state);

/// Time-averaged probability within |x| <= window for a walker started at
/// x = 0 with spinor (1, i)/sqrt(2), evolved (extent - 3) / 2 steps with the
/// coin index frozen at T.
double interface_localization(const InhomogeneousProfile& profile, StepIndex T, int window, int extent);

/// Applies one frozen-T step to the plane waves exp(-i k.x) v for both
/// eigenvectors v of U(k) and returns the largest deviation from the phase
/// exp(-i E(k)) predicted in momentum space. k must be 2 pi n / extent.
double plane_wave_eigencheck(const ProtocolSpec& spec, StepIndex T, const Momentum& k, int extent);

/// Trajectory as CSV with the sweep header line.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, Family family);

} // namespace topowalk::realspace
