#include <algorithm>
#include <cctype>
#include <string>

#include "topowalk/core.hpp"

namespace topowalk {

namespace {

constexpr double kZoneSlack = 1e-12;

void check_in_zone(double k, const char* what)
{
    if (!std::isfinite(k) || std::abs(k) > pi + kZoneSlack) {
        throw std::invalid_argument(std::string(what) + " must lie in [-pi, pi], got " +
                                    std::to_string(k));
    }
}

} // namespace

Momentum::Momentum(double k) : kx(k) { check_in_zone(k, "k"); }

Momentum::Momentum(double kx_, double ky_) : kx(kx_), ky(ky_)
{
    check_in_zone(kx_, "kx");
    check_in_zone(ky_, "ky");
}

std::string_view to_string(Family f)
{
    switch (f) {
    case Family::Simple1D: return "simple1d";
    case Family::Split1D: return "split1d";
    case Family::Simple2D: return "simple2d";
    case Family::Split2D: return "split2d";
    }
    return "unknown";
}

Family parse_family(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "simple1d") return Family::Simple1D;
    if (lower == "split1d") return Family::Split1D;
    if (lower == "simple2d") return Family::Simple2D;
    if (lower == "split2d") return Family::Split2D;
    throw std::invalid_argument("unknown family '" + std::string(name) +
                                "' (expected simple1d|split1d|simple2d|split2d)");
}

ProtocolSpec ProtocolSpec::simple(Family f, double theta)
{
    ProtocolSpec s;
    s.family = f;
    s.theta = theta;
    s.validate();
    return s;
}

ProtocolSpec ProtocolSpec::split(Family f, double alpha, double beta)
{
    ProtocolSpec s;
    s.family = f;
    s.alpha = alpha;
    s.beta = beta;
    s.validate();
    return s;
}

ProtocolSpec ProtocolSpec::split_related(Family f, double alpha, AngleRelation rel)
{
    ProtocolSpec s;
    s.family = f;
    s.alpha = alpha;
    s.relation = rel;
    s.validate();
    return s.resolved();
}

ProtocolSpec ProtocolSpec::resolved() const
{
    ProtocolSpec out = *this;
    if (relation) out.beta = relation->apply(alpha);
    return out;
}

ProtocolSpec ProtocolSpec::with_scan_angle(double angle) const
{
    ProtocolSpec out = *this;
    if (is_split(family)) {
        out.alpha = angle;
        if (relation) out.beta = relation->apply(angle);
    } else {
        out.theta = angle;
    }
    return out;
}

void ProtocolSpec::validate() const
{
    if (!std::isfinite(theta) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::invalid_argument("protocol angles must be finite");
    }
    if (relation && (!std::isfinite(relation->s1) || !std::isfinite(relation->s2))) {
        throw std::invalid_argument("angle relation coefficients must be finite");
    }
    if (relation && !is_split(family)) {
        throw std::invalid_argument("an angle relation only applies to split-step families");
    }
}

StepIndex::StepIndex(int t) : t_(t)
{
    if (t < 1) throw std::invalid_argument("step index T must be >= 1, got " + std::to_string(t));
}

void Tolerances::validate() const
{
    for (double v : {gap_eps, flat_eps, unitarity_eps, invariant_eps}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("tolerances must be positive");
    }
}

void InhomogeneousProfile::validate() const
{
    if (!(width > 0.0)) throw std::invalid_argument("profile width must be positive");
    if (!std::isfinite(alpha1)) throw std::invalid_argument("alpha1 must be finite");
}

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 1) throw std::invalid_argument("linspace needs at least one sample");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = grid_point(lo, hi, i, n);
    return out;
}

std::vector<double> periodic_bz_grid(int n)
{
    if (n < 2) throw std::invalid_argument("Brillouin-zone grid needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = -pi + 2.0 * pi * (static_cast<double>(i) / n);
    }
    return out;
}

double wrap_to_bz(double k)
{
    const double r = std::remainder(k, 2.0 * pi);
    return r;
}

} // namespace topowalk
