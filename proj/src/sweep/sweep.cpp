#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <limits>
#include <stdexcept>
#include <string>

#include "topowalk/kspace.hpp"
#include "topowalk/parallel.hpp"
#include "topowalk/sweep.hpp"
#include "topowalk/topology.hpp"

namespace topowalk::sweep {

namespace {

struct QuantityName {
    Quantity q;
    std::string_view name;
};
constexpr QuantityName kQuantities[] = {
    {Quantity::EnergyPlus, "energy"},         {Quantity::VelocityPlus, "velocity"},
    {Quantity::ZakAbsolute, "zak-abs"},       {Quantity::ZakSigned, "zak"},
    {Quantity::Winding, "winding"},           {Quantity::Chern, "chern"},
    {Quantity::GapIndicator, "gap"},          {Quantity::PositionInvariant, "position-invariant"},
};

struct AxisLabel {
    AxisName a;
    std::string_view name;
};
constexpr AxisLabel kAxes[] = {
    {AxisName::Theta, "theta"}, {AxisName::Alpha, "alpha"}, {AxisName::Beta, "beta"}, {AxisName::Alpha1, "alpha1"},
    {AxisName::K, "k"},         {AxisName::Kx, "kx"},       {AxisName::Ky, "ky"},     {AxisName::X, "x"},
};

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_momentum(AxisName a) { return a == AxisName::K || a == AxisName::Kx || a == AxisName::Ky; }

void require(bool ok, const std::string& msg)
{
    if (!ok) throw std::invalid_argument("sweep request: " + msg);
}

void check_axis(const SweepRequest& r, const Axis& ax)
{
    const std::string n(to_string(ax.name));
    const Family f = r.spec.family;
    require(ax.samples >= 8, "axis " + n + " needs at least 8 samples");
    require(std::isfinite(ax.min) && std::isfinite(ax.max) && ax.min < ax.max, "axis " + n + " has a degenerate range");
    switch (ax.name) {
    case AxisName::Theta: require(!is_split(f), "theta axis needs a simple family"); break;
    case AxisName::Alpha: require(is_split(f), "alpha axis needs a split family"); break;
    case AxisName::Beta:
        require(is_split(f) && !r.spec.relation, "beta axis needs a split family without an angle relation");
        break;
    case AxisName::K: require(!is_2d(f), "k axis needs a one-dimensional family"); break;
    case AxisName::Kx:
    case AxisName::Ky: require(is_2d(f), "kx/ky axes need a two-dimensional family"); break;
    case AxisName::Alpha1:
    case AxisName::X:
        require(r.quantity == Quantity::PositionInvariant, "alpha1/x axes only apply to the position invariant");
        break;
    }
    if (is_momentum(ax.name)) {
        require(ax.min >= -pi - 1e-12 && ax.max <= pi + 1e-12, "momentum axis must lie in [-pi, pi]");
    }
}

struct Cell {
    ProtocolSpec spec;
    Momentum k;
    InhomogeneousProfile profile;
    double x = 0.0;
};

void assign(Cell& c, AxisName a, double v)
{
    switch (a) {
    case AxisName::Theta: c.spec.theta = v; break;
    case AxisName::Alpha: c.spec.alpha = v; break;
    case AxisName::Beta: c.spec.beta = v; break;
    case AxisName::Alpha1: c.profile.alpha1 = v; break;
    case AxisName::K: c.k = Momentum(std::clamp(v, -pi, pi)); break;
    case AxisName::Kx: c.k = Momentum(std::clamp(v, -pi, pi), *c.k.ky); break;
    case AxisName::Ky: c.k = Momentum(c.k.kx, std::clamp(v, -pi, pi)); break;
    case AxisName::X: c.x = v; break;
    }
}

std::pair<double, bool> evaluate(const SweepRequest& r, const Cell& c, StepIndex T)
{
    const Tolerances& tol = r.tolerances;
    const ProtocolSpec spec = c.spec.resolved();
    auto gapless_here = [&] { return kspace::gap_sine(spec, T, c.k) < tol.gap_eps; };
    switch (r.quantity) {
    case Quantity::EnergyPlus:
        return {kspace::dispersion(spec, T, c.k).e_plus, gapless_here()};
    case Quantity::GapIndicator: {
        const double e = kspace::dispersion(spec, T, c.k).e_plus;
        return {std::min(e, pi - e), gapless_here()};
    }
    case Quantity::VelocityPlus: {
        const kspace::VelocityValue v = kspace::group_velocity(spec, T, c.k, tol);
        if (!v.defined()) return {kNaN, true};
        return {v.vx, gapless_here()};
    }
    case Quantity::ZakAbsolute:
    case Quantity::ZakSigned: {
        const auto mode = r.quantity == Quantity::ZakAbsolute ? topology::ZakMode::Absolute : topology::ZakMode::Signed;
        const topology::ZakValue z = topology::zak_phase(T, spec.alpha, spec.beta, mode);
        if (z.divergent) return {kNaN, true};
        return {z.value, false};
    }
    case Quantity::Winding:
        try {
            return {topology::winding_number(spec, T, r.invariant_resolution, tol).value, false};
        } catch (const GaplessError&) {
            return {kNaN, true};
        }
    case Quantity::Chern:
        try {
            return {topology::chern_number(spec, T, std::max(64, r.invariant_resolution / 4), tol, 1).value, false};
        } catch (const GaplessError&) {
            return {kNaN, true};
        }
    case Quantity::PositionInvariant: {
        const auto w = topology::position_resolved_invariant(c.profile, T, c.x, r.invariant_resolution, tol);
        if (!w) return {kNaN, true};
        return {w->value, false};
    }
    }
    return {kNaN, true};
}

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string_view to_string(Quantity q)
{
    for (const auto& e : kQuantities)
        if (e.q == q) return e.name;
    return "?";
}

Quantity parse_quantity(std::string_view name)
{
    const std::string n = lower(name);
    for (const auto& e : kQuantities)
        if (e.name == n) return e.q;
    throw std::invalid_argument("unknown quantity '" + std::string(name) +
                                "' (energy|velocity|zak|zak-abs|winding|chern|gap|position-invariant)");
}

std::string_view to_string(AxisName a)
{
    for (const auto& e : kAxes)
        if (e.a == a) return e.name;
    return "?";
}

AxisName parse_axis_name(std::string_view name)
{
    const std::string n = lower(name);
    for (const auto& e : kAxes)
        if (e.name == n) return e.a;
    throw std::invalid_argument("unknown axis '" + std::string(name) + "' (theta|alpha|beta|alpha1|k|kx|ky|x)");
}

void SweepRequest::validate() const
{
    spec.validate();
    tolerances.validate();
    require(!T_list.empty(), "T list is empty");
    require(axis1.name != axis2.name, "the two axes must differ");
    require(base_momentum.is_2d() == is_2d(spec.family), "base momentum dimension does not match the family");
    check_axis(*this, axis1);
    check_axis(*this, axis2);
    switch (quantity) {
    case Quantity::ZakAbsolute:
    case Quantity::ZakSigned: require(spec.family == Family::Split1D, "Zak phase needs split1d"); break;
    case Quantity::Winding:
        require(!is_2d(spec.family), "winding needs a one-dimensional family");
        require(invariant_resolution >= 256, "winding resolution must be >= 256");
        break;
    case Quantity::Chern: require(is_2d(spec.family), "Chern number needs a two-dimensional family"); break;
    case Quantity::PositionInvariant:
        require(spec.family == Family::Split1D, "position invariant needs split1d");
        require(invariant_resolution >= 256, "winding resolution must be >= 256");
        profile.validate();
        break;
    default: break;
    }
}

std::uint64_t fnv1a(const std::vector<double>& values)
{
    std::uint64_t h = 1469598103934665603ull;
    for (double v : values) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ull;
        }
    }
    return h;
}

SweepResult run_sweep(const SweepRequest& req, unsigned threads)
{
    req.validate();
    SweepResult res;
    res.request = req;
    const std::vector<double> a1 = req.axis1.values();
    const std::vector<double> a2 = req.axis2.values();
    res.metadata.generated_at = utc_now();
    res.metadata.tool_version = std::string(tool_version);
    res.metadata.axis1_hash = fnv1a(a1);
    res.metadata.axis2_hash = fnv1a(a2);

    for (StepIndex T : req.T_list) {
        Panel p;
        p.T = T;
        p.axis1_values = a1;
        p.axis2_values = a2;
        const std::size_t n = a1.size() * a2.size();
        p.values.assign(n, kNaN);
        p.gapless.assign(n, 1);
        parallel_for(n, threads, [&](std::size_t idx) {
            Cell c{req.spec, req.base_momentum, req.profile, 0.0};
            assign(c, req.axis1.name, a1[idx / a2.size()]);
            assign(c, req.axis2.name, a2[idx % a2.size()]);
            try {
                const auto [v, g] = evaluate(req, c, T);
                p.values[idx] = v;
                p.gapless[idx] = g ? 1 : 0;
            } catch (const std::runtime_error&) {
                p.values[idx] = kNaN;
                p.gapless[idx] = 1;
            } catch (const std::domain_error&) {
                p.values[idx] = kNaN;
                p.gapless[idx] = 1;
            }
        });
        res.panels.push_back(std::move(p));
    }
    return res;
}

} // namespace topowalk::sweep
