#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "topowalk/kspace.hpp"
#include "topowalk/parallel.hpp"

namespace topowalk::kspace {

namespace {

std::vector<Momentum> sample_grid(Family f, int n)
{
    if (n < 2) throw std::invalid_argument("symmetry grid needs at least 2 points per axis");
    const std::vector<double> ks = linspace(-pi, pi, n);
    std::vector<Momentum> out;
    if (is_2d(f)) {
        out.reserve(ks.size() * ks.size());
        for (double kx : ks)
            for (double ky : ks) out.emplace_back(kx, ky);
    } else {
        for (double k : ks) out.emplace_back(k);
    }
    return out;
}

} // namespace

FittedChiralAxis fit_chiral_axis(const ProtocolSpec& spec, StepIndex T, int grid_size,
                                 const Tolerances& tol)
{
    const std::vector<Momentum> grid = sample_grid(spec.family, grid_size);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (const Momentum& k : grid) {
        const SU2Coefficients c = su2_coefficients(build_step_unitary(spec, T, k));
        const Eigen::Vector3d b(c.b[0], c.b[1], c.b[2]);
        m += b * b.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
    Eigen::Vector3d a = solver.eigenvectors().col(0);
    // fix the overall sign: largest component positive
    Eigen::Index idx = 0;
    a.cwiseAbs().maxCoeff(&idx);
    if (a(idx) < 0.0) a = -a;

    FittedChiralAxis out;
    out.axis = {a(0), a(1), a(2)};
    for (const Momentum& k : grid) {
        const BlochVector n = bloch_vector(spec, T, k, tol);
        if (n.defined()) out.max_residual = std::max(out.max_residual, std::abs(dot(out.axis, n.n)));
    }
    return out;
}

SymmetryReport symmetry_report(const ProtocolSpec& spec, StepIndex T, int grid_size,
                               const Tolerances& tol, unsigned threads)
{
    spec.validate();
    SymmetryReport rep;
    Mat2 gamma;
    if (is_2d(spec.family)) {
        const FittedChiralAxis fit = fit_chiral_axis(spec, T, std::min(grid_size, 64), tol);
        rep.chiral_axis = fit.axis;
        gamma = pauli_combination(fit.axis);
    } else {
        const ChiralData cd = chiral_data(spec, T);
        rep.chiral_axis = cd.axis;
        rep.chiral_axis_analytic = true;
        gamma = cd.gamma_op;
    }

    const std::vector<Momentum> grid = sample_grid(spec.family, grid_size);
    struct Row {
        bool gapped = false;
        double chiral = 0, ph = 0, tr = 0, even = 0, det = 0, trace = 0, mismatch = 0;
    };
    std::vector<Row> rows(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const Momentum& k = grid[i];
        const Momentum mk = k.negated();
        Row& r = rows[i];
        const Mat2 u = build_step_unitary(spec, T, k);
        r.det = std::abs(u.det() - 1.0);
        r.even = std::abs(eigen_dispersion(spec, T, k).e_plus - eigen_dispersion(spec, T, mk).e_plus);
        const auto h = effective_hamiltonian(spec, T, k, tol);
        const auto hm = effective_hamiltonian(spec, T, mk, tol);
        const BlochVector n = bloch_vector(spec, T, k, tol);
        if (!h || !hm || !n.defined()) return;
        r.gapped = true;
        r.chiral = max_abs(gamma * *h * gamma + *h);
        r.ph = max_abs(h->conj() + *hm);
        r.tr = max_abs(gamma * h->conj() * gamma - *hm);
        r.trace = std::abs(h->trace());
        const double e = eigen_dispersion(spec, T, k).e_plus;
        r.mismatch = max_abs(*h - Complex{e, 0.0} * pauli_combination(n.n));
    });

    for (const Row& r : rows) {
        rep.max_det_deviation = std::max(rep.max_det_deviation, r.det);
        rep.max_even_E_residual = std::max(rep.max_even_E_residual, r.even);
        if (!r.gapped) {
            ++rep.skipped_gapless;
            continue;
        }
        ++rep.sampled;
        rep.max_chiral_residual = std::max(rep.max_chiral_residual, r.chiral);
        rep.max_ph_residual = std::max(rep.max_ph_residual, r.ph);
        rep.max_tr_residual = std::max(rep.max_tr_residual, r.tr);
        rep.max_trace_residual = std::max(rep.max_trace_residual, r.trace);
        rep.max_hamiltonian_mismatch = std::max(rep.max_hamiltonian_mismatch, r.mismatch);
    }
    return rep;
}

} // namespace topowalk::kspace
