#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "topowalk/kspace.hpp"
#include "topowalk/topology.hpp"

namespace topowalk::topology {

namespace {

constexpr double kFlatSpread = 1e-7;
constexpr double kLinearTol = 1e-7;
constexpr double kProbeOffset = 0.05;
constexpr double kProbeStep = 0.05;

Momentum shifted(const Momentum& k, double dk)
{
    const double kx = wrap_to_bz(k.kx + dk);
    return k.is_2d() ? Momentum(kx, *k.ky) : Momentum(kx);
}

double energy(const ProtocolSpec& spec, StepIndex T, const Momentum& k)
{
    return kspace::eigen_dispersion(spec, T, k).e_plus;
}

} // namespace

BoundaryKind classify_analytic(const ProtocolSpec& raw, StepIndex T, double angle, const Tolerances& tol)
{
    const ProtocolSpec spec = raw.with_scan_angle(angle).resolved();
    const double t = T.as_double();
    if (!is_split(spec.family)) {
        return std::abs(std::cos(0.5 * t * spec.theta)) < tol.flat_eps ? BoundaryKind::FlatBand
                                                                       : BoundaryKind::DiracCone;
    }
    const double x = 0.5 * t * spec.alpha;
    const double y = 0.5 * t * spec.beta;
    const bool a_zero = std::abs(std::cos(x) * std::cos(y)) < tol.flat_eps;
    const bool b_zero = std::abs(std::sin(x) * std::sin(y)) < tol.flat_eps;
    if (spec.family == Family::Split1D) {
        if (a_zero) return BoundaryKind::FlatBand;
        if (b_zero) return BoundaryKind::DiracCone;
        return BoundaryKind::FermiArc;
    }
    if (a_zero && b_zero) return BoundaryKind::FlatBand;
    if (a_zero || b_zero) return BoundaryKind::DiracCone;
    return BoundaryKind::FermiArc;
}

BoundaryKind classify_numeric(const ProtocolSpec& raw, StepIndex T, const GapClosing& closing)
{
    const ProtocolSpec spec = raw.with_scan_angle(closing.angle);

    double lo = pi;
    double hi = 0.0;
    if (is_2d(spec.family)) {
        const auto ks = linspace(-pi, pi, 65);
        for (double kx : ks) {
            for (double ky : ks) {
                const double e = energy(spec, T, Momentum(kx, ky));
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
        }
    } else {
        for (double k : linspace(-pi, pi, 257)) {
            const double e = energy(spec, T, Momentum(k));
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    }
    if (hi - lo < kFlatSpread) return BoundaryKind::FlatBand;

    const double e0 = energy(spec, T, shifted(closing.momentum, kProbeOffset));
    const double e1 = energy(spec, T, shifted(closing.momentum, kProbeOffset + kProbeStep));
    const double e2 = energy(spec, T, shifted(closing.momentum, kProbeOffset + 2 * kProbeStep));
    return std::abs(e0 - 2 * e1 + e2) < kLinearTol ? BoundaryKind::DiracCone : BoundaryKind::FermiArc;
}

BoundaryKind classify_boundary(const ProtocolSpec& spec, StepIndex T, const GapClosing& closing,
                               const Tolerances& tol)
{
    const ProtocolSpec at = spec.with_scan_angle(closing.angle);
    if (closing.flat) {
        for (const Momentum& k : high_symmetry_momenta(spec.family)) {
            if (std::abs(kspace::cos_energy(at, T, k)) >= tol.flat_eps) {
                throw std::invalid_argument("classify_boundary: flat entry is not a flat band");
            }
        }
        return BoundaryKind::FlatBand;
    }
    if (kspace::gap_sine(at, T, closing.momentum) >= tol.gap_eps) {
        throw std::invalid_argument("classify_boundary: parameter point is gapped");
    }
    const BoundaryKind analytic = classify_analytic(spec, T, closing.angle, tol);
    const BoundaryKind numeric = classify_numeric(spec, T, closing);
    if (analytic != numeric) {
        throw std::logic_error("classify_boundary: analytic verdict " + std::string(to_string(analytic)) +
                               " disagrees with numeric probe " + std::string(to_string(numeric)));
    }
    return analytic;
}

} // namespace topowalk::topology
