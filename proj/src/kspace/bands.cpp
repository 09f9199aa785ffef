#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "topowalk/kspace.hpp"

namespace topowalk::kspace {

namespace {

constexpr double kClampSlack = 1e-12;

double clamped_arccos(double g)
{
    if (std::abs(g) > 1.0 + kClampSlack) {
        throw std::logic_error("dispersion argument " + std::to_string(g) +
                               " outside [-1, 1]: unitary step violated");
    }
    return std::acos(std::clamp(g, -1.0, 1.0));
}

struct HalfAngles {
    double x;  // T alpha / 2 (or T theta / 2)
    double y;  // T beta / 2
};

HalfAngles half_angles(const ProtocolSpec& spec, StepIndex T)
{
    const double t = T.as_double();
    if (is_split(spec.family)) return {0.5 * t * spec.alpha, 0.5 * t * spec.beta};
    return {0.5 * t * spec.theta, 0.0};
}

} // namespace

BandPair dispersion(const ProtocolSpec& spec, StepIndex T, const Momentum& k)
{
    const double e = clamped_arccos(cos_energy(spec, T, k));
    return {e, -e};
}

BandPair eigen_dispersion(const ProtocolSpec& spec, StepIndex T, const Momentum& k)
{
    const Eigen2 eig = mat2_eig(build_step_unitary(spec, T, k));
    const double e = std::abs(std::arg(eig.values[0]));
    return {e, -e};
}

double gap_sine(const ProtocolSpec& spec, StepIndex T, const Momentum& k)
{
    return std::abs(std::sin(eigen_dispersion(spec, T, k).e_plus));
}

BlochVector bloch_vector(const ProtocolSpec& spec, StepIndex T, const Momentum& k,
                         const Tolerances& tol)
{
    const Mat2 u = build_step_unitary(spec, T, k);
    const double e = std::abs(std::arg(mat2_eig(u).values[0]));
    const double s = std::sin(e);
    if (std::abs(s) < tol.gap_eps) return {};
    const SU2Coefficients c = su2_coefficients(u);
    return {Status::Defined, {c.b[0] / s, c.b[1] / s, c.b[2] / s}};
}

BlochVector reference_bloch_vector(const ProtocolSpec& raw, StepIndex T, const Momentum& k,
                                   const Tolerances& tol)
{
    const ProtocolSpec spec = raw.resolved();
    if (gap_sine(spec, T, k) < tol.gap_eps) return {};
    const double s = std::sin(dispersion(spec, T, k).e_plus);
    const auto [x, y] = half_angles(spec, T);
    Vec3 n{};
    switch (spec.family) {
    case Family::Simple1D:
        n = {std::cos(x) * std::sin(k.kx), std::sin(x) * std::cos(k.kx), -std::cos(x) * std::sin(k.kx)};
        break;
    case Family::Split1D:
        n = {std::cos(x) * std::sin(y) * std::sin(k.kx),
             std::sin(x) * std::cos(y) + std::cos(k.kx) * std::cos(x) * std::sin(y),
             -std::cos(x) * std::cos(y) * std::sin(k.kx)};
        break;
    case Family::Simple2D: {
        const double p = k.kx + *k.ky;
        n = {std::cos(x) * std::sin(p), std::sin(x) * std::cos(p), -(-std::cos(x) * std::sin(p))};
        break;
    }
    case Family::Split2D: {
        const double p = k.kx + *k.ky;
        const double m = k.kx - *k.ky;
        n = {std::sin(p) * std::cos(x) * std::sin(y) - std::sin(m) * std::sin(x) * std::cos(y),
             std::cos(p) * std::cos(x) * std::sin(y) + std::cos(m) * std::sin(x) * std::cos(y),
             -(std::sin(p) * std::cos(x) * std::cos(y) - std::sin(m) * std::sin(x) * std::sin(y))};
        break;
    }
    }
    return {Status::Defined, {n[0] / s, n[1] / s, n[2] / s}};
}

VelocityValue group_velocity(const ProtocolSpec& raw, StepIndex T, const Momentum& k,
                             const Tolerances& tol)
{
    const ProtocolSpec spec = raw.resolved();
    const double s = std::sin(dispersion(spec, T, k).e_plus);
    const auto [x, y] = half_angles(spec, T);

    // Numerators of dE+/dk; a and b multiply the two momentum harmonics.
    double a = 0.0;
    double b = 0.0;
    double num_x = 0.0;
    double num_y = 0.0;
    switch (spec.family) {
    case Family::Simple1D:
        a = std::cos(x);
        num_x = a * std::sin(k.kx);
        break;
    case Family::Split1D:
        a = std::cos(x) * std::cos(y);
        num_x = a * std::sin(k.kx);
        break;
    case Family::Simple2D:
        a = std::cos(x);
        num_x = num_y = a * std::sin(k.kx + *k.ky);
        break;
    case Family::Split2D: {
        a = std::cos(x) * std::cos(y);
        b = std::sin(x) * std::sin(y);
        const double p = k.kx + *k.ky;
        const double m = k.kx - *k.ky;
        num_x = a * std::sin(p) - b * std::sin(m);
        num_y = a * std::sin(p) + b * std::sin(m);
        break;
    }
    }

    VelocityValue v;
    const bool two_d = is_2d(spec.family);
    if (gap_sine(spec, T, k) < tol.gap_eps) {
        const bool flat = std::abs(a) < tol.flat_eps && (!two_d || std::abs(b) < tol.flat_eps);
        if (!flat) return v;
        v.status = Status::Defined;
        v.vx = 0.0;
        if (two_d) v.vy = 0.0;
        return v;
    }
    v.status = Status::Defined;
    v.vx = num_x / s;
    if (two_d) v.vy = num_y / s;
    return v;
}

ChiralData chiral_data(const ProtocolSpec& raw, StepIndex T)
{
    if (is_2d(raw.family)) {
        throw std::invalid_argument("chiral_data supports one-dimensional families only");
    }
    const ProtocolSpec spec = raw.resolved();
    const double phi = spec.family == Family::Simple1D ? spec.theta : spec.beta;
    const double h = 0.5 * T.as_double() * phi;
    ChiralData out;
    out.axis = {std::cos(h), 0.0, std::sin(h)};
    out.gamma_op = pauli_combination(out.axis);
    return out;
}

std::optional<Mat2> effective_hamiltonian(const ProtocolSpec& spec, StepIndex T, const Momentum& k,
                                          const Tolerances& tol)
{
    const Eigen2 eig = mat2_eig(build_step_unitary(spec, T, k));
    if (eig.degenerate || std::abs(std::sin(std::arg(eig.values[0]))) < tol.gap_eps) {
        return std::nullopt;
    }
    Mat2 h{};
    for (int j = 0; j < 2; ++j) {
        const double e = -std::arg(eig.values[static_cast<std::size_t>(j)]);  // lambda = exp(-i E)
        const Spinor& v = eig.vectors[static_cast<std::size_t>(j)];
        const Mat2 proj{v.up * std::conj(v.up), v.up * std::conj(v.down), v.down * std::conj(v.up),
                        v.down * std::conj(v.down)};
        h = h + Complex{e, 0.0} * proj;
    }
    return h;
}

} // namespace topowalk::kspace
