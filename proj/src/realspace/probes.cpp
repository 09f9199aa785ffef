#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "topowalk/kspace.hpp"
#include "topowalk/realspace.hpp"

namespace topowalk::realspace {

namespace {

std::string fmt(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("nan"); }

void check_commensurate(double k, int extent)
{
    const double n = k * extent / (2.0 * pi);
    if (std::abs(n - std::round(n)) > 1e-9) {
        throw std::invalid_argument("momentum " + std::to_string(k) + " is not commensurate with extent " +
                                    std::to_string(extent));
    }
}

} // namespace

double interface_localization(const InhomogeneousProfile& profile, StepIndex T, int window, int extent)
{
    if (window < 0 || 2 * window >= extent) throw std::invalid_argument("interface_localization: need window < extent / 2");
    const LatticeGeometry g = LatticeGeometry::ring(extent);
    const double h = 1.0 / std::sqrt(2.0);
    WalkState s = new_state(g, 0, Spinor{Complex{h, 0.0}, Complex{0.0, h}});
    const int steps = (extent - 3) / 2;
    if (steps < 1) throw std::invalid_argument("interface_localization: extent too small");
    const Stepper stepper{profile, T};
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        s = stepper(s);
        acc += *observe(s, window).window_probability;
    }
    return acc / steps;
}

double plane_wave_eigencheck(const ProtocolSpec& spec, StepIndex T, const Momentum& k, int extent)
{
    check_commensurate(k.kx, extent);
    if (k.is_2d()) check_commensurate(*k.ky, extent);
    const LatticeGeometry g = k.is_2d() ? LatticeGeometry::torus(extent, extent) : LatticeGeometry::ring(extent);

    const Eigen2 eig = mat2_eig(kspace::build_step_unitary(spec, T, k));
    const kspace::BandPair bands = kspace::dispersion(spec, T, k);
    // first eigenvalue exp(i E+) = exp(-i E-), second exp(-i E+)
    const double energies[2] = {bands.e_minus, bands.e_plus};
    const double amp = 1.0 / std::sqrt(static_cast<double>(g.sites()));

    double worst = 0.0;
    for (int b = 0; b < 2; ++b) {
        const Spinor& v = eig.vectors[static_cast<std::size_t>(b)];
        WalkState s;
        s.geometry = g;
        s.amplitudes.assign(2 * g.sites(), Complex{});
        for (int ix = 0; ix < g.extent_x; ++ix) {
            for (int iy = 0; iy < g.extent_y; ++iy) {
                double phase = -k.kx * g.x_of(ix);
                if (k.is_2d()) phase -= *k.ky * g.y_of(iy);
                const Complex w = std::polar(amp, phase);
                s.amplitudes[s.index(ix, iy)] = w * v.up;
                s.amplitudes[s.index(ix, iy) + 1] = w * v.down;
            }
        }
        const WalkState next = apply_step(s, spec, T);
        const Complex expected = std::polar(1.0, -energies[b]);
        double dev = 0.0;
        for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
            dev = std::max(dev, std::abs(next.amplitudes[i] - expected * s.amplitudes[i]) / amp);
        }
        worst = std::max(worst, dev);
    }
    return worst;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, Family family)
{
    out << "# topowalk v1, family=" << to_string(family) << ", T=" << (traj.records.empty() ? 0 : traj.records.back().step)
        << ", quantity=trajectory\n";
    out << "step,norm,mean_x,variance_x,mean_y,variance_y,window_probability\n";
    for (const auto& r : traj.records) {
        out << r.step << ',' << fmt(r.norm) << ',' << fmt(r.mean_x) << ',' << fmt(r.variance_x) << ','
            << fmt(r.mean_y) << ',' << fmt(r.variance_y) << ',' << fmt(r.window_probability) << '\n';
    }
}

} // namespace topowalk::realspace
