#include <cmath>
#include <stdexcept>

#include "topowalk/kspace.hpp"

namespace topowalk::kspace {

Mat2 coin(StepIndex T, double angle)
{
    const double half = 0.5 * T.as_double() * angle;
    const double c = std::cos(half);
    const double s = std::sin(half);
    return {c, -s, s, c};
}

Mat2 shift_both(double k) { return {std::polar(1.0, k), 0.0, 0.0, std::polar(1.0, -k)}; }

Mat2 shift_up(double k) { return {1.0, 0.0, 0.0, std::polar(1.0, -k)}; }

Mat2 shift_down(double k) { return {std::polar(1.0, k), 0.0, 0.0, 1.0}; }

namespace {

void check_dimension(const ProtocolSpec& spec, const Momentum& k)
{
    if (is_2d(spec.family) != k.is_2d()) {
        throw std::invalid_argument(std::string("momentum dimension does not match family ") +
                                    std::string(to_string(spec.family)));
    }
}

} // namespace

Mat2 build_step_unitary(const ProtocolSpec& raw, StepIndex T, const Momentum& k)
{
    check_dimension(raw, k);
    const ProtocolSpec spec = raw.resolved();
    switch (spec.family) {
    case Family::Simple1D:
        return shift_both(k.kx) * coin(T, spec.theta);
    case Family::Split1D:
        return shift_up(k.kx) * coin(T, spec.alpha) * shift_down(k.kx) * coin(T, spec.beta);
    case Family::Simple2D:
        return shift_both(*k.ky) * shift_both(k.kx) * coin(T, spec.theta);
    case Family::Split2D:
        return shift_both(*k.ky) * coin(T, spec.alpha) * shift_both(k.kx) * coin(T, spec.beta);
    }
    throw std::logic_error("unhandled family");
}

double cos_energy(const ProtocolSpec& raw, StepIndex T, const Momentum& k)
{
    check_dimension(raw, k);
    const ProtocolSpec spec = raw.resolved();
    const double t = T.as_double();
    switch (spec.family) {
    case Family::Simple1D:
        return std::cos(0.5 * t * spec.theta) * std::cos(k.kx);
    case Family::Simple2D:
        return std::cos(0.5 * t * spec.theta) * std::cos(k.kx + *k.ky);
    case Family::Split1D: {
        const double x = 0.5 * t * spec.alpha;
        const double y = 0.5 * t * spec.beta;
        return std::cos(k.kx) * std::cos(x) * std::cos(y) - std::sin(x) * std::sin(y);
    }
    case Family::Split2D: {
        const double x = 0.5 * t * spec.alpha;
        const double y = 0.5 * t * spec.beta;
        return std::cos(k.kx + *k.ky) * std::cos(x) * std::cos(y) -
               std::cos(k.kx - *k.ky) * std::sin(x) * std::sin(y);
    }
    }
    throw std::logic_error("unhandled family");
}

} // namespace topowalk::kspace
