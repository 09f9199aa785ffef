#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topowalk/kspace.hpp"
#include "topowalk/parallel.hpp"
#include "topowalk/topology.hpp"

namespace topowalk::topology {

std::string_view to_string(EnergySector s)
{
    return s == EnergySector::Zero ? "E=0" : "E=pi";
}

std::string_view to_string(BoundaryKind k)
{
    switch (k) {
    case BoundaryKind::DiracCone: return "DiracCone";
    case BoundaryKind::FermiArc: return "FermiArc";
    case BoundaryKind::FlatBand: return "FlatBand";
    }
    return "?";
}

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr double kMergeDistance = 1e-8;

void push_unique(std::vector<GapClosing>& out, const GapClosing& g)
{
    for (const auto& e : out) {
        if (std::abs(e.angle - g.angle) < kAngleSlack) return;
    }
    out.push_back(g);
}

} // namespace

std::vector<GapClosing> analytic_gap_angles(Family family, StepIndex T, EnergySector sector,
                                            const Momentum& k, bool flat, const Tolerances& tol)
{
    if (is_split(family)) {
        throw std::invalid_argument("analytic_gap_angles: split families use locate_gap_closings");
    }
    if (is_2d(family) != k.is_2d()) {
        throw std::invalid_argument("analytic_gap_angles: momentum dimension does not match family");
    }
    const double t = T.as_double();
    const double two_pi = 2.0 * pi;
    const int cmax = T.value() / 2 + 2;
    std::vector<GapClosing> out;

    auto accept = [&](double theta, int c) {
        if (theta < -kAngleSlack || theta > two_pi + kAngleSlack) return;
        theta = std::clamp(theta, 0.0, two_pi);
        GapClosing g;
        g.angle = theta;
        g.momentum = k;
        g.sector = flat ? EnergySector::PlusMinusPi : sector;
        g.solution_index = c;
        g.flat = flat;
        push_unique(out, g);
    };

    if (flat) {
        for (int c = -cmax; c <= cmax; ++c) {
            accept((4.0 * pi * c + pi) / t, c);
            accept((4.0 * pi * c - pi) / t, c);
        }
    } else {
        const double p = k.kx + k.ky.value_or(0.0);
        const double cp = std::cos(p);
        if (std::abs(cp) < kAngleSlack) return out;
        double target = (sector == EnergySector::Zero ? 1.0 : -1.0) / cp;
        if (std::abs(target) > 1.0 + kAngleSlack) return out;
        target = std::clamp(target, -1.0, 1.0);
        const double a = std::acos(target);
        for (int c = -cmax; c <= cmax; ++c) {
            accept((2.0 * a + 4.0 * pi * c) / t, c);
            accept((-2.0 * a + 4.0 * pi * c) / t, c);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });

    for (const auto& g : out) {
        const ProtocolSpec spec = ProtocolSpec::simple(family, g.angle);
        if (flat) {
            if (std::abs(std::cos(0.5 * t * g.angle)) >= tol.flat_eps) {
                throw std::logic_error("analytic flat-band angle is not flat");
            }
        } else if (kspace::gap_sine(spec, T, k) >= tol.gap_eps) {
            throw std::logic_error("analytic gap angle is not gapless");
        }
    }
    return out;
}

std::vector<Momentum> high_symmetry_momenta(Family family)
{
    switch (family) {
    case Family::Simple1D:
    case Family::Split1D:
        return {Momentum(0.0), Momentum(pi)};
    case Family::Simple2D:
        return {Momentum(0.0, 0.0), Momentum(pi / 2, pi / 2)};
    case Family::Split2D:
        return {Momentum(0.0, 0.0), Momentum(pi, 0.0), Momentum(pi / 2, pi / 2), Momentum(pi / 2, -pi / 2)};
    }
    return {};
}

namespace {

// At the high-symmetry momenta U(k) is a rotation about y, so its sigma_y
// coefficient is +-sin E and changes sign through every closing.
double closing_function(const ProtocolSpec& spec, StepIndex T, const Momentum& k, double angle)
{
    return su2_coefficients(kspace::build_step_unitary(spec.with_scan_angle(angle), T, k)).b[1];
}

EnergySector sector_at(const ProtocolSpec& spec, StepIndex T, const Momentum& k, double angle)
{
    const double a0 = su2_coefficients(kspace::build_step_unitary(spec.with_scan_angle(angle), T, k)).a0;
    return a0 >= 0.0 ? EnergySector::Zero : EnergySector::PlusMinusPi;
}

double bisect(const ProtocolSpec& spec, StepIndex T, const Momentum& k, double lo, double hi, double flo)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = closing_function(spec, T, k, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Scan {
    std::vector<double> angles;
    std::vector<std::vector<double>> values;  // [momentum][sample]
};

Scan scan(const ProtocolSpec& spec, StepIndex T, const std::vector<Momentum>& ks, AngleRange range,
          int samples, unsigned threads)
{
    if (samples < 64) throw std::invalid_argument("gap-closing scan needs at least 64 samples");
    if (!(range.first < range.second)) throw std::invalid_argument("gap-closing scan needs lo < hi");
    Scan s;
    s.angles.resize(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        s.angles[static_cast<std::size_t>(i)] = grid_point(range.first, range.second, i, samples);
    }
    s.values.assign(ks.size(), std::vector<double>(s.angles.size()));
    const std::size_t n = s.angles.size();
    parallel_for(ks.size() * n, threads, [&](std::size_t idx) {
        const std::size_t m = idx / n;
        const std::size_t i = idx % n;
        s.values[m][i] = closing_function(spec, T, ks[m], s.angles[i]);
    });
    return s;
}

bool all_small(const std::vector<double>& f, double eps)
{
    return std::all_of(f.begin(), f.end(), [eps](double v) { return std::abs(v) < eps; });
}

} // namespace

std::vector<GapClosing> locate_gap_closings(const ProtocolSpec& spec, StepIndex T, AngleRange range,
                                            int samples, const Tolerances& tol, unsigned threads)
{
    spec.validate();
    tol.validate();
    const std::vector<Momentum> ks = high_symmetry_momenta(spec.family);
    const Scan s = scan(spec, T, ks, range, samples, threads);
    const double eps = tol.gap_eps;
    std::vector<GapClosing> found;

    for (std::size_t m = 0; m < ks.size(); ++m) {
        const auto& f = s.values[m];
        if (all_small(f, eps)) continue;
        const std::size_t n = f.size();
        std::vector<double> roots;
        std::size_t i = 0;
        while (i < n) {
            if (std::abs(f[i]) < eps) {
                // a run of near-zero samples counts as a single root
                std::size_t j = i;
                std::size_t best = i;
                while (j + 1 < n && std::abs(f[j + 1]) < eps) {
                    ++j;
                    if (std::abs(f[j]) < std::abs(f[best])) best = j;
                }
                double root = s.angles[best];
                if (i > 0 && j + 1 < n && f[i - 1] != 0.0 && (f[i - 1] > 0.0) != (f[j + 1] > 0.0)) {
                    root = bisect(spec, T, ks[m], s.angles[i - 1], s.angles[j + 1], f[i - 1]);
                }
                roots.push_back(root);
                i = j + 1;
                continue;
            }
            if (i + 1 < n && std::abs(f[i + 1]) >= eps && (f[i] > 0.0) != (f[i + 1] > 0.0)) {
                roots.push_back(bisect(spec, T, ks[m], s.angles[i], s.angles[i + 1], f[i]));
            }
            ++i;
        }
        for (double r : roots) {
            GapClosing g;
            g.angle = r;
            g.momentum = ks[m];
            g.sector = sector_at(spec, T, ks[m], r);
            if (kspace::gap_sine(spec.with_scan_angle(r), T, ks[m]) >= eps) continue;
            found.push_back(g);
        }
    }

    std::sort(found.begin(), found.end(), [](const GapClosing& a, const GapClosing& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        return a.sector < b.sector;
    });
    std::vector<GapClosing> out;
    for (const auto& g : found) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const GapClosing& e) {
            return e.sector == g.sector && std::abs(e.angle - g.angle) < kMergeDistance;
        });
        if (!dup) out.push_back(g);
    }
    std::sort(out.begin(), out.end(), [](const GapClosing& a, const GapClosing& b) {
        if (std::abs(a.angle - b.angle) >= kMergeDistance) return a.angle < b.angle;
        return a.sector < b.sector;
    });
    return out;
}

std::vector<GaplessSector> gapless_throughout(const ProtocolSpec& spec, StepIndex T, AngleRange range,
                                              int samples, const Tolerances& tol)
{
    spec.validate();
    const std::vector<Momentum> ks = high_symmetry_momenta(spec.family);
    const Scan s = scan(spec, T, ks, range, samples, 1);
    std::vector<GaplessSector> out;
    for (std::size_t m = 0; m < ks.size(); ++m) {
        if (!all_small(s.values[m], tol.gap_eps)) continue;
        const double mid = 0.5 * (range.first + range.second);
        const EnergySector sector = sector_at(spec, T, ks[m], mid);
        const bool dup = std::any_of(out.begin(), out.end(), [&](const GaplessSector& e) { return e.sector == sector; });
        if (!dup) out.push_back({ks[m], sector});
    }
    return out;
}

} // namespace topowalk::topology
