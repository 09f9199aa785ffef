#include <cmath>
#include <stdexcept>
#include <string>

#include "topowalk/kspace.hpp"
#include "topowalk/realspace.hpp"

namespace topowalk::realspace {

LatticeGeometry LatticeGeometry::ring(int extent)
{
    LatticeGeometry g{Dim::One, extent, 1};
    g.validate();
    return g;
}

LatticeGeometry LatticeGeometry::torus(int ex, int ey)
{
    LatticeGeometry g{Dim::Two, ex, ey};
    g.validate();
    return g;
}

void LatticeGeometry::validate() const
{
    if (extent_x < 4) throw std::invalid_argument("lattice extent must be >= 4");
    if (dim == Dim::Two && extent_y < 4) throw std::invalid_argument("lattice extent must be >= 4 on both axes");
    if (dim == Dim::One && extent_y != 1) throw std::invalid_argument("a ring has extent_y = 1");
}

double WalkState::norm() const
{
    double s = 0.0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    return s;
}

namespace {

int index_of(int coord, int extent, const char* axis)
{
    const int i = coord + extent / 2;
    if (i < 0 || i >= extent) {
        throw std::invalid_argument(std::string("position ") + axis + "=" + std::to_string(coord) +
                                    " outside the lattice");
    }
    return i;
}

void check_spinor(const Spinor& s)
{
    if (std::abs(s.norm_squared() - 1.0) > 1e-12) {
        throw std::invalid_argument("initial spinor must be normalised");
    }
}

void check_family(const LatticeGeometry& g, Family f)
{
    if ((g.dim == Dim::Two) != is_2d(f)) {
        throw std::invalid_argument(std::string("geometry does not match family ") + std::string(to_string(f)));
    }
}

void apply_coin(std::vector<Complex>& a, const Mat2& c)
{
    for (std::size_t i = 0; i < a.size(); i += 2) {
        const Complex u = a[i];
        const Complex d = a[i + 1];
        a[i] = c(0, 0) * u + c(0, 1) * d;
        a[i + 1] = c(1, 0) * u + c(1, 1) * d;
    }
}

// Moves the up component by up_dx and the down component by down_dx along
// one axis (0 = x, 1 = y).
void shift(std::vector<Complex>& a, const LatticeGeometry& g, int axis, int up_dx, int down_dx)
{
    const int ex = g.extent_x;
    const int ey = g.extent_y;
    std::vector<Complex> out(a.size());
    for (int ix = 0; ix < ex; ++ix) {
        for (int iy = 0; iy < ey; ++iy) {
            const std::size_t src = 2 * (static_cast<std::size_t>(ix) * ey + iy);
            auto dest = [&](int d) {
                int jx = ix;
                int jy = iy;
                if (axis == 0) {
                    jx = ((ix + d) % ex + ex) % ex;
                } else {
                    jy = ((iy + d) % ey + ey) % ey;
                }
                return 2 * (static_cast<std::size_t>(jx) * ey + jy);
            };
            out[dest(up_dx)] = a[src];
            out[dest(down_dx) + 1] = a[src + 1];
        }
    }
    a.swap(out);
}

StepIndex coin_index(const WalkState& s, std::optional<StepIndex> frozen)
{
    return frozen ? *frozen : StepIndex(s.step + 1);
}

} // namespace

WalkState new_state(const LatticeGeometry& geometry, int x, const Spinor& spinor)
{
    if (geometry.dim != Dim::One) throw std::invalid_argument("new_state: 2D lattice needs x and y");
    return new_state(geometry, x, 0, spinor);
}

WalkState new_state(const LatticeGeometry& geometry, int x, int y, const Spinor& spinor)
{
    geometry.validate();
    check_spinor(spinor);
    WalkState s;
    s.geometry = geometry;
    s.amplitudes.assign(2 * geometry.sites(), Complex{});
    const int ix = index_of(x, geometry.extent_x, "x");
    const int iy = geometry.dim == Dim::Two ? index_of(y, geometry.extent_y, "y") : 0;
    if (geometry.dim == Dim::One && y != 0) throw std::invalid_argument("new_state: y must be 0 on a ring");
    s.amplitudes[s.index(ix, iy)] = spinor.up;
    s.amplitudes[s.index(ix, iy) + 1] = spinor.down;
    return s;
}

WalkState apply_step(const WalkState& state, const ProtocolSpec& raw, std::optional<StepIndex> frozen)
{
    check_family(state.geometry, raw.family);
    const ProtocolSpec spec = raw.resolved();
    const StepIndex m = coin_index(state, frozen);
    WalkState out = state;
    auto& a = out.amplitudes;
    const auto& g = state.geometry;
    switch (spec.family) {
    case Family::Simple1D:
        apply_coin(a, kspace::coin(m, spec.theta));
        shift(a, g, 0, +1, -1);
        break;
    case Family::Split1D:
        apply_coin(a, kspace::coin(m, spec.beta));
        shift(a, g, 0, 0, -1);
        apply_coin(a, kspace::coin(m, spec.alpha));
        shift(a, g, 0, +1, 0);
        break;
    case Family::Simple2D:
        apply_coin(a, kspace::coin(m, spec.theta));
        shift(a, g, 0, +1, -1);
        shift(a, g, 1, +1, -1);
        break;
    case Family::Split2D:
        apply_coin(a, kspace::coin(m, spec.beta));
        shift(a, g, 0, +1, -1);
        apply_coin(a, kspace::coin(m, spec.alpha));
        shift(a, g, 1, +1, -1);
        break;
    }
    ++out.step;
    return out;
}

WalkState apply_inhomogeneous_step(const WalkState& state, const InhomogeneousProfile& profile, Family family,
                                   std::optional<StepIndex> frozen)
{
    if (family != Family::Split1D) throw std::invalid_argument("inhomogeneous walks are Split1D only");
    if (state.geometry.dim != Dim::One) throw std::invalid_argument("inhomogeneous walks need a ring");
    profile.validate();
    const StepIndex m = coin_index(state, frozen);
    const int ex = state.geometry.extent_x;
    std::vector<Mat2> ca(static_cast<std::size_t>(ex));
    std::vector<Mat2> cb(static_cast<std::size_t>(ex));
    for (int ix = 0; ix < ex; ++ix) {
        const auto [alpha, beta] = profile.angles_at(static_cast<double>(state.geometry.x_of(ix)));
        ca[static_cast<std::size_t>(ix)] = kspace::coin(m, alpha);
        cb[static_cast<std::size_t>(ix)] = kspace::coin(m, beta);
    }
    auto site_coin = [](std::vector<Complex>& a, const std::vector<Mat2>& c) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Complex u = a[2 * i];
            const Complex d = a[2 * i + 1];
            a[2 * i] = c[i](0, 0) * u + c[i](0, 1) * d;
            a[2 * i + 1] = c[i](1, 0) * u + c[i](1, 1) * d;
        }
    };
    WalkState out = state;
    site_coin(out.amplitudes, cb);
    shift(out.amplitudes, out.geometry, 0, 0, -1);
    site_coin(out.amplitudes, ca);
    shift(out.amplitudes, out.geometry, 0, +1, 0);
    ++out.step;
    return out;
}

WalkState Stepper::operator()(const WalkState& s) const
{
    if (const auto* spec = std::get_if<ProtocolSpec>(&rule)) return apply_step(s, *spec, frozen);
    return apply_inhomogeneous_step(s, std::get<InhomogeneousProfile>(rule), Family::Split1D, frozen);
}

std::vector<double> position_distribution(const WalkState& state)
{
    std::vector<double> p(state.geometry.sites());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(state.amplitudes[2 * i]) + std::norm(state.amplitudes[2 * i + 1]);
    }
    return p;
}

ObservableRecord observe(const WalkState& state, std::optional<int> window)
{
    const auto& g = state.geometry;
    const std::vector<double> p = position_distribution(state);
    double total = 0.0, mx = 0.0, mxx = 0.0, my = 0.0, myy = 0.0, inside = 0.0;
    for (int ix = 0; ix < g.extent_x; ++ix) {
        for (int iy = 0; iy < g.extent_y; ++iy) {
            const double w = p[static_cast<std::size_t>(ix) * g.extent_y + iy];
            const double x = g.x_of(ix);
            const double y = g.y_of(iy);
            total += w;
            mx += w * x;
            mxx += w * x * x;
            my += w * y;
            myy += w * y * y;
            if (window && std::abs(x) <= *window) inside += w;
        }
    }
    ObservableRecord r;
    r.step = state.step;
    r.norm = total;
    r.mean_x = mx;
    r.variance_x = mxx - mx * mx;
    if (g.dim == Dim::Two) {
        r.mean_y = my;
        r.variance_y = myy - my * my;
    }
    if (window && g.dim == Dim::One) r.window_probability = inside;
    return r;
}

Trajectory evolve(const WalkState& initial, const Stepper& stepper, int steps, std::optional<int> window)
{
    if (steps < 1) throw std::invalid_argument("evolve: steps must be >= 1");
    Trajectory t;
    const auto& g = initial.geometry;
    t.wrap_warning = g.extent_x <= 2 * steps + 2 || (g.dim == Dim::Two && g.extent_y <= 2 * steps + 2);
    t.records.reserve(static_cast<std::size_t>(steps) + 1);
    t.records.push_back(observe(initial, window));
    WalkState s = initial;
    for (int i = 0; i < steps; ++i) {
        s = stepper(s);
        t.records.push_back(observe(s, window));
    }
    t.final_state = std::move(s);
    return t;
}

} // namespace topowalk::realspace
