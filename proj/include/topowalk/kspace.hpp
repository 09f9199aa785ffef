#pragma once

// Momentum-space analysis of one walk step: the Bloch unitary U(k), its
// effective Hamiltonian H(k) = i ln U(k) = E(k) n(k).sigma, group velocities,
// chiral operators and symmetry residuals.

#include <optional>

#include "topowalk/core.hpp"

namespace topowalk::kspace {

/// Step-dependent coin exp(-i T angle / 2 sigma_y).
Mat2 coin(StepIndex T, double angle);
/// exp(i k sigma_z): up moves +1, down moves -1.
Mat2 shift_both(double k);
/// exp(i k (sigma_z - 1) / 2): moves only the up component.
Mat2 shift_up(double k);
/// exp(i k (sigma_z + 1) / 2): moves only the down component.
Mat2 shift_down(double k);

/// U(k) as the ordered product of the protocol (rightmost factor acts first).
/// Throws std::invalid_argument when the momentum dimension does not match the
/// family.
Mat2 build_step_unitary(const ProtocolSpec& spec, StepIndex T, const Momentum& k);

/// cos E(k) from the closed-form dispersion relations.
double cos_energy(const ProtocolSpec& spec, StepIndex T, const Momentum& k);

struct BandPair {
    double e_plus = 0.0;   // in [0, pi]
    double e_minus = 0.0;  // = -e_plus
};

/// Closed-form bands E = +-arccos(gamma).
BandPair dispersion(const ProtocolSpec& spec, StepIndex T, const Momentum& k);

/// Bands from the eigenphases of build_step_unitary (the oracle route).
BandPair eigen_dispersion(const ProtocolSpec& spec, StepIndex T, const Momentum& k);

/// |sin E(k)| from the eigenphases of U(k); accurate near gap closings where
/// the arccos route loses half the digits.
double gap_sine(const ProtocolSpec& spec, StepIndex T, const Momentum& k);

enum class Status { Defined, IllDefined };

struct BlochVector {
    Status status = Status::IllDefined;
    Vec3 n{0.0, 0.0, 0.0};

    bool defined() const { return status == Status::Defined; }
};

/// n(k) solved from U = cos E - i sin E n.sigma; IllDefined when |sin E| < gap_eps.
BlochVector bloch_vector(const ProtocolSpec& spec, StepIndex T, const Momentum& k,
                         const Tolerances& tol = {});

/// n(k) from the reference closed forms, kept for comparison with bloch_vector.
/// Their known slips are kept: Simple1D n_x uses cos(T theta / 2), Simple2D
/// has cos in n_x and the opposite sign in n_z, and Split2D n_z has the
/// opposite sign on its (kx - ky) term.
BlochVector reference_bloch_vector(const ProtocolSpec& spec, StepIndex T, const Momentum& k,
                                   const Tolerances& tol = {});

struct VelocityValue {
    Status status = Status::IllDefined;
    double vx = 0.0;
    std::optional<double> vy;

    bool defined() const { return status == Status::Defined; }
};

/// dE+/dk from the closed forms. Flat bands give zero; other gap closings are
/// IllDefined.
VelocityValue group_velocity(const ProtocolSpec& spec, StepIndex T, const Momentum& k,
                             const Tolerances& tol = {});

struct ChiralData {
    Vec3 axis{1.0, 0.0, 0.0};
    Mat2 gamma_op = pauli::x;
};

/// Gamma = A.sigma with A = (cos(T phi / 2), 0, sin(T phi / 2)), phi = theta
/// (Simple1D) or beta (Split1D). One-dimensional families only.
ChiralData chiral_data(const ProtocolSpec& spec, StepIndex T);

/// Least-squares chiral axis: the unit A minimising sum_k (A.b(k))^2 over an
/// n x n (2D) or n-point (1D) grid. Exact whenever a chiral operator exists.
struct FittedChiralAxis {
    Vec3 axis{1.0, 0.0, 0.0};
    double max_residual = 0.0;  // max_k |A.n(k)| over gapped samples
};
FittedChiralAxis fit_chiral_axis(const ProtocolSpec& spec, StepIndex T, int grid_size,
                                 const Tolerances& tol = {});

/// H(k) = i ln U(k) rebuilt from the eigendecomposition. nullopt at gap closings.
std::optional<Mat2> effective_hamiltonian(const ProtocolSpec& spec, StepIndex T, const Momentum& k,
                                          const Tolerances& tol = {});

struct SymmetryReport {
    double max_chiral_residual = 0.0;   // |Gamma H(k) Gamma + H(k)|
    double max_ph_residual = 0.0;       // |H(k)* + H(-k)|
    double max_tr_residual = 0.0;       // |Gamma H(k)* Gamma - H(-k)|
    double max_even_E_residual = 0.0;   // |E(k) - E(-k)|
    double max_det_deviation = 0.0;     // |det U - 1|
    double max_trace_residual = 0.0;    // |tr H(k)|
    double max_hamiltonian_mismatch = 0.0;  // |H_eig - E n.sigma|
    Vec3 chiral_axis{1.0, 0.0, 0.0};
    bool chiral_axis_analytic = false;  // from chiral_data rather than fitted
    int sampled = 0;
    int skipped_gapless = 0;
};

/// Residuals of the chiral, particle-hole and time-reversal identities on a
/// uniform endpoint-inclusive grid of grid_size points per momentum axis.
/// Work is split over `threads` workers; the result does not depend on it.
SymmetryReport symmetry_report(const ProtocolSpec& spec, StepIndex T, int grid_size,
                               const Tolerances& tol = {}, unsigned threads = 1);

} // namespace topowalk::kspace
