#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "topowalk/kspace.hpp"
#include "topowalk/parallel.hpp"
#include "topowalk/topology.hpp"

namespace topowalk::topology {

namespace {

InvariantValue make_invariant(double value, int resolution, const Tolerances& tol)
{
    InvariantValue v;
    v.value = value;
    v.resolution = resolution;
    const double r = std::round(value);
    if (std::abs(value - r) < tol.invariant_eps) v.quantized = static_cast<int>(r);
    return v;
}

Vec3 sub_scaled(const Vec3& a, const Vec3& b, double s)
{
    return {(a[0] - b[0]) * s, (a[1] - b[1]) * s, (a[2] - b[2]) * s};
}

[[noreturn]] void throw_gapless(const Momentum& k)
{
    std::string where = "k=" + std::to_string(k.kx);
    if (k.is_2d()) where = "(kx, ky)=(" + std::to_string(k.kx) + ", " + std::to_string(*k.ky) + ")";
    throw GaplessError("Bloch vector ill-defined at " + where +
                       ": the spectrum is gapless on the integration grid; move the angles away from the closing");
}

} // namespace

InvariantValue winding_number(const ProtocolSpec& spec, StepIndex T, int resolution, const Tolerances& tol)
{
    if (is_2d(spec.family)) throw std::invalid_argument("winding_number: one-dimensional families only");
    if (resolution < 256) throw std::invalid_argument("winding_number: resolution must be >= 256");
    spec.validate();
    tol.validate();

    const std::vector<double> ks = periodic_bz_grid(resolution);
    const std::size_t n = ks.size();
    std::vector<Vec3> field(n);
    for (std::size_t i = 0; i < n; ++i) {
        const kspace::BlochVector b = kspace::bloch_vector(spec, T, Momentum(ks[i]), tol);
        if (!b.defined()) throw_gapless(Momentum(ks[i]));
        field[i] = b.n;
    }
    const Vec3 axis = kspace::chiral_data(spec, T).axis;
    const double h = 2.0 * pi / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& next = field[(i + 1) % n];
        const Vec3& prev = field[(i + n - 1) % n];
        const Vec3 d = sub_scaled(next, prev, 1.0 / (2.0 * h));
        sum += dot(cross(field[i], d), axis);
    }
    return make_invariant(sum * h / (2.0 * pi), resolution, tol);
}

double winding_closed_form(StepIndex T, double theta)
{
    const double s = std::sin(0.5 * T.as_double() * theta);
    if (!(s > 1e-12)) {
        throw DomainError("winding closed form needs sin(T theta / 2) > 0, got " + std::to_string(s));
    }
    return -s * std::sqrt(1.0 / s);
}

ZakValue zak_phase(StepIndex T, double alpha, double beta, ZakMode mode)
{
    constexpr double eps = 1e-12;
    const double x = 0.5 * T.as_double() * alpha;
    const double y = 0.5 * T.as_double() * beta;
    ZakValue z;
    if (std::abs(std::cos(x)) < eps || std::abs(std::cos(y)) < eps || std::abs(std::tan(y)) < eps) {
        z.divergent = true;
        z.value = std::numeric_limits<double>::infinity();
        return z;
    }
    z.value = std::tan(x) / std::tan(y);
    if (mode == ZakMode::Absolute) z.value = std::abs(z.value);
    return z;
}

InvariantValue chern_number(const ProtocolSpec& spec, StepIndex T, int resolution, const Tolerances& tol,
                            unsigned threads)
{
    if (!is_2d(spec.family)) throw std::invalid_argument("chern_number: two-dimensional families only");
    if (resolution < 64) throw std::invalid_argument("chern_number: resolution must be >= 64");
    spec.validate();
    tol.validate();

    const std::vector<double> ks = periodic_bz_grid(resolution);
    const std::size_t n = ks.size();
    std::vector<Vec3> field(n * n);
    std::vector<char> bad(n * n, 0);
    parallel_for(n * n, threads, [&](std::size_t idx) {
        const kspace::BlochVector b = kspace::bloch_vector(spec, T, Momentum(ks[idx / n], ks[idx % n]), tol);
        if (b.defined()) {
            field[idx] = b.n;
        } else {
            bad[idx] = 1;
        }
    });
    for (std::size_t idx = 0; idx < n * n; ++idx) {
        if (bad[idx]) throw_gapless(Momentum(ks[idx / n], ks[idx % n]));
    }

    const double h = 2.0 * pi / static_cast<double>(n);
    const double inv2h = 1.0 / (2.0 * h);
    auto at = [&](std::size_t i, std::size_t j) -> const Vec3& { return field[(i % n) * n + (j % n)]; };
    std::vector<double> rows(n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3 dx = sub_scaled(at(i + 1, j), at(i + n - 1, j), inv2h);
            const Vec3 dy = sub_scaled(at(i, j + 1), at(i, j + n - 1), inv2h);
            acc += dot(cross(dx, dy), at(i, j));
        }
        rows[i] = acc;
    });
    double sum = 0.0;
    for (double r : rows) sum += r;
    return make_invariant(sum * h * h / (4.0 * pi), resolution, tol);
}

PathInvariants path_invariants(const ProtocolSpec& spec, StepIndex T, double start, double end, int samples,
                               const Tolerances& tol)
{
    if (samples < 128) throw std::invalid_argument("path_invariants: samples must be >= 128");
    for (double endpoint : {start, end}) {
        for (const Momentum& k : high_symmetry_momenta(spec.family)) {
            if (kspace::gap_sine(spec.with_scan_angle(endpoint), T, k) < tol.gap_eps) {
                throw GaplessError("path endpoint " + std::to_string(endpoint) + " is gapless");
            }
        }
    }
    PathInvariants q;
    if (start == end) return q;
    const AngleRange range{std::min(start, end), std::max(start, end)};
    for (const GapClosing& g : locate_gap_closings(spec, T, range, samples, tol)) {
        if (g.sector == EnergySector::Zero) {
            ++q.q0;
        } else {
            ++q.qpi;
        }
    }
    return q;
}

} // namespace topowalk::topology
