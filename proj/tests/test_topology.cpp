#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "topowalk/kspace.hpp"
#include "topowalk/topology.hpp"

using namespace topowalk;
using namespace topowalk::topology;
using Catch::Approx;

namespace {

const AngleRelation cell_relation{1.0 / 3.0, pi / 3.0};

std::vector<double> angles_of(const std::vector<GapClosing>& cs)
{
    std::vector<double> out;
    for (const auto& c : cs) out.push_back(c.angle);
    return out;
}

std::vector<double> distinct(std::vector<double> v, double tol = 1e-8)
{
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double a : v)
        if (out.empty() || a - out.back() > tol) out.push_back(a);
    return out;
}

double min_gap(const ProtocolSpec& s, StepIndex T, int n)
{
    double g = 1.0;
    for (double kx : periodic_bz_grid(n)) {
        if (is_2d(s.family)) {
            for (double ky : periodic_bz_grid(n)) g = std::min(g, kspace::gap_sine(s, T, Momentum(kx, ky)));
        } else {
            g = std::min(g, kspace::gap_sine(s, T, Momentum(kx)));
        }
    }
    return g;
}

} // namespace

TEST_CASE("analytic gap angles", "[topology]")
{
    auto z0 = angles_of(analytic_gap_angles(Family::Simple1D, StepIndex(4), EnergySector::Zero, Momentum(0.0)));
    REQUIRE(z0.size() == 3);
    CHECK(z0[0] == Approx(0.0).margin(1e-15));
    CHECK(z0[1] == Approx(pi));
    CHECK(z0[2] == Approx(2 * pi));

    auto zpi = angles_of(analytic_gap_angles(Family::Simple1D, StepIndex(4), EnergySector::Zero, Momentum(pi)));
    REQUIRE(zpi.size() == 2);
    CHECK(zpi[0] == Approx(pi / 2));
    CHECK(zpi[1] == Approx(3 * pi / 2));

    const auto flat = analytic_gap_angles(Family::Simple1D, StepIndex(2), EnergySector::PlusMinusPi, Momentum(0.0), true);
    REQUIRE(flat.size() == 2);
    CHECK(flat[0].angle == Approx(pi / 2));
    CHECK(flat[1].angle == Approx(3 * pi / 2));
    for (const auto& f : flat) CHECK(f.flat);

    CHECK(analytic_gap_angles(Family::Simple1D, StepIndex(3), EnergySector::Zero, Momentum(1.0)).empty());
    CHECK_THROWS_AS(analytic_gap_angles(Family::Split1D, StepIndex(3), EnergySector::Zero, Momentum(0.0)),
                    std::invalid_argument);

    const auto two = analytic_gap_angles(Family::Simple2D, StepIndex(8), EnergySector::PlusMinusPi, Momentum(0.0, 0.0));
    for (const auto& c : two) {
        CHECK(kspace::gap_sine(ProtocolSpec::simple(Family::Simple2D, c.angle), StepIndex(8), c.momentum) < 1e-9);
    }
    CHECK_FALSE(two.empty());
}

TEST_CASE("numeric closings reproduce the analytic Simple1D set", "[topology]")
{
    for (int T = 2; T <= 8; ++T) {
        const auto found = locate_gap_closings(ProtocolSpec::simple(Family::Simple1D, 0.0), StepIndex(T),
                                               {0.0, 2 * pi}, 256);
        const auto numeric = distinct(angles_of(found));
        const auto expected = oracle::simple1d_closings(T);
        REQUIRE(numeric.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(numeric[i] - expected[i]) < 1e-8);
        for (std::size_t i = 1; i < numeric.size(); ++i) CHECK(std::abs(numeric[i] - numeric[i - 1] - 2 * pi / T) < 1e-8);

        std::vector<double> analytic;
        for (EnergySector s : {EnergySector::Zero, EnergySector::PlusMinusPi})
            for (double k : {0.0, pi})
                for (const auto& c : analytic_gap_angles(Family::Simple1D, StepIndex(T), s, Momentum(k)))
                    analytic.push_back(c.angle);
        CHECK(distinct(analytic) .size() == numeric.size());

        for (const auto& c : found) {
            CHECK(kspace::gap_sine(ProtocolSpec::simple(Family::Simple1D, c.angle), StepIndex(T), c.momentum) < 1e-9);
            CHECK(classify_boundary(ProtocolSpec::simple(Family::Simple1D, c.angle), StepIndex(T), c) ==
                  BoundaryKind::DiracCone);
        }
    }
}

TEST_CASE("closings that persist through a range are reported separately", "[topology]")
{
    const ProtocolSpec s = ProtocolSpec::split_related(Family::Split1D, 0.0, AngleRelation{1.0, 0.0});
    const auto always = gapless_throughout(s, StepIndex(1), {0.0, 2 * pi}, 128);
    REQUIRE_FALSE(always.empty());
    bool pi_sector = false;
    for (const auto& g : always) pi_sector = pi_sector || g.sector == EnergySector::PlusMinusPi;
    CHECK(pi_sector);
    // the k = pi sector never reopens; the isolated closings all sit at k = 0
    const auto isolated = locate_gap_closings(s, StepIndex(1), {0.0, 2 * pi}, 128);
    for (const auto& c : isolated) CHECK(c.momentum.kx == 0.0);
    const std::vector<double> want{0.0, pi, 2 * pi};
    const auto got = distinct(angles_of(isolated));
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == Approx(want[i]).margin(1e-10));
    CHECK_THROWS_AS(locate_gap_closings(s, StepIndex(1), {0.0, 1.0}, 10), std::invalid_argument);
}

TEST_CASE("classification examples", "[topology]")
{
    CHECK(classify_analytic(ProtocolSpec::split(Family::Split1D, 2 * pi / 3, 0.5), StepIndex(3), 2 * pi / 3) ==
          BoundaryKind::DiracCone);
    CHECK(classify_analytic(ProtocolSpec::split(Family::Split1D, 0.7, pi), StepIndex(1), 0.7) ==
          BoundaryKind::FlatBand);
    CHECK(classify_analytic(ProtocolSpec::simple(Family::Simple1D, pi), StepIndex(4), pi) == BoundaryKind::DiracCone);
}

TEST_CASE("cell structure of the related split-step walk", "[topology][cells]")
{
    const CellReport six = enumerate_cells(StepIndex(6), cell_relation, {-pi / 2, pi / 2}, 512);
    CHECK(six.pattern_present);
    REQUIRE(six.ordered_boundaries.size() == 5);
    const std::vector<BoundaryKind> expected{BoundaryKind::FlatBand, BoundaryKind::FermiArc, BoundaryKind::DiracCone,
                                             BoundaryKind::FermiArc, BoundaryKind::FlatBand};
    const std::vector<double> where{-pi / 2, -pi / 4, 0.0, pi / 4, pi / 2};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(six.ordered_boundaries[i].kind == expected[i]);
        CHECK(six.ordered_boundaries[i].angle == Approx(where[i]).margin(1e-9));
    }
    CHECK(six.ordered_boundaries[2].both_sectors);

    CHECK_FALSE(enumerate_cells(StepIndex(2), cell_relation, {-pi / 2, pi / 2}, 512).pattern_present);

    const CellReport none = enumerate_cells(StepIndex(6), cell_relation, {0.1, 0.2}, 128);
    CHECK(none.ordered_boundaries.empty());
    CHECK_FALSE(none.pattern_present);
    CHECK_FALSE(has_cell_pattern({}));
}

TEST_CASE("every split-step closing receives one kind", "[topology][cells]")
{
    for (int T : {1, 2, 3, 4, 5, 6}) {
        const ProtocolSpec s = ProtocolSpec::split_related(Family::Split1D, 0.0, cell_relation);
        for (const auto& c : locate_gap_closings(s, StepIndex(T), {-pi, pi}, 256)) {
            const ProtocolSpec at = s.with_scan_angle(c.angle);
            const BoundaryKind k = classify_boundary(at, StepIndex(T), c);
            CHECK(k == classify_analytic(at, StepIndex(T), c.angle));
        }
    }
}

TEST_CASE("winding number examples", "[topology][winding]")
{
    const InvariantValue w = winding_number(ProtocolSpec::simple(Family::Simple1D, pi / 2), StepIndex(1), 2048);
    REQUIRE(w.quantized);
    CHECK(std::abs(*w.quantized) == 1);
    CHECK(w.resolution == 2048);
    CHECK_THROWS_AS(winding_number(ProtocolSpec::simple(Family::Simple1D, pi / 2), StepIndex(1), 128),
                    std::invalid_argument);
    CHECK_THROWS_AS(winding_number(ProtocolSpec::simple(Family::Simple1D, pi), StepIndex(4), 256), GaplessError);
    CHECK_THROWS_AS(winding_number(ProtocolSpec::simple(Family::Simple2D, 1.0), StepIndex(1), 256),
                    std::invalid_argument);
}

TEST_CASE("winding matches the unwrapped polar angle", "[topology][winding]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-pi, pi);
    std::uniform_int_distribution<int> step(1, 8);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 50; ++i) {
        const bool split = i % 2 == 1;
        const int T = step(rng);
        const double a = ang(rng);
        const double b = ang(rng);
        const ProtocolSpec s = split ? ProtocolSpec::split(Family::Split1D, a, b) : ProtocolSpec::simple(Family::Simple1D, a);
        if (min_gap(s, StepIndex(T), 512) < 0.05) continue;
        const InvariantValue w = winding_number(s, StepIndex(T), 2048);
        REQUIRE(w.quantized);
        CHECK(std::abs(w.value - *w.quantized) < 1e-3);

        const Vec3 axis = kspace::chiral_data(s, StepIndex(T)).axis;
        std::vector<Eigen::Vector3d> ns;
        for (double k : periodic_bz_grid(512)) ns.push_back(oracle::bloch(oracle::unitary(split ? 1 : 0, T, a, b, k, 0.0)));
        const double o = oracle::winding_by_unwrapping(ns, Eigen::Vector3d(axis[0], axis[1], axis[2]));
        CHECK(std::abs(o - *w.quantized) < 1e-9);
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("winding changes across closings", "[topology][winding]")
{
    for (int T : {1, 2, 3, 4}) {
        const ProtocolSpec base = ProtocolSpec::simple(Family::Simple1D, 0.0);
        for (const auto& c : locate_gap_closings(base, StepIndex(T), {0.0, 2 * pi}, 256)) {
            if (c.angle < 0.1 || c.angle > 2 * pi - 0.1) continue;
            const double d = 0.5 * pi / T;
            const auto before = winding_number(base.with_scan_angle(c.angle - d), StepIndex(T), 2048);
            const auto after = winding_number(base.with_scan_angle(c.angle + d), StepIndex(T), 2048);
            REQUIRE(before.quantized);
            REQUIRE(after.quantized);
            CHECK(*before.quantized != *after.quantized);
        }
    }
}

TEST_CASE("winding closed form", "[topology][winding]")
{
    CHECK(winding_closed_form(StepIndex(1), pi) == Approx(-1.0));
    CHECK(winding_closed_form(StepIndex(3), pi / 9) == Approx(-0.5 * std::sqrt(2.0)));
    CHECK_THROWS_AS(winding_closed_form(StepIndex(1), 2 * pi), DomainError);
    CHECK_THROWS_AS(winding_closed_form(StepIndex(2), -0.3), DomainError);
}

TEST_CASE("Zak phase ratio", "[topology][zak]")
{
    const ZakValue one = zak_phase(StepIndex(3), 0.4, 0.4, ZakMode::Signed);
    CHECK_FALSE(one.divergent);
    CHECK(one.value == Approx(1.0));
    const ZakValue zero = zak_phase(StepIndex(2), pi, pi / 4, ZakMode::Signed);
    CHECK_FALSE(zero.divergent);
    CHECK(zero.value == Approx(0.0).margin(1e-12));
    CHECK(zak_phase(StepIndex(1), 0.3, pi, ZakMode::Signed).divergent);
    CHECK(zak_phase(StepIndex(2), 0.3, pi, ZakMode::Absolute).divergent);
    const ZakValue neg = zak_phase(StepIndex(1), -0.6, 0.3, ZakMode::Signed);
    const ZakValue abs = zak_phase(StepIndex(1), -0.6, 0.3, ZakMode::Absolute);
    CHECK(neg.value < 0);
    CHECK(abs.value == Approx(-neg.value));
}

TEST_CASE("Chern numbers vanish", "[topology][chern]")
{
    const InvariantValue a = chern_number(ProtocolSpec::simple(Family::Simple2D, pi / 5), StepIndex(8), 128);
    CHECK(std::abs(a.value) < 1e-3);
    REQUIRE(a.quantized);
    CHECK(*a.quantized == 0);
    const ProtocolSpec split = ProtocolSpec::split_related(Family::Split2D, pi / 5, cell_relation);
    const InvariantValue b = chern_number(split, StepIndex(8), 128);
    CHECK(std::abs(b.value) < 1e-3);
    const InvariantValue b2 = chern_number(split, StepIndex(8), 256);
    CHECK(std::abs(b2.value - b.value) < 1e-4);
    CHECK_THROWS_AS(chern_number(split, StepIndex(8), 32), std::invalid_argument);
    CHECK_THROWS_AS(chern_number(ProtocolSpec::simple(Family::Simple1D, 1.0), StepIndex(1), 64),
                    std::invalid_argument);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ang(-pi, pi);
    int checked = 0;
    for (int i = 0; i < 40 && checked < 10; ++i) {
        const bool sp = i % 2 == 1;
        const double x = ang(rng);
        const double y = ang(rng);
        const int T = 1 + i % 5;
        const ProtocolSpec s = sp ? ProtocolSpec::split(Family::Split2D, x, y) : ProtocolSpec::simple(Family::Simple2D, x);
        if (min_gap(s, StepIndex(T), 64) < 0.1) continue;
        const InvariantValue c = chern_number(s, StepIndex(T), 96);
        CHECK(std::abs(c.value) < 1e-3);
        CHECK(std::abs(oracle::chern_lattice(sp ? 3 : 2, T, x, y, 32)) < 1e-6);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("Chern number does not depend on the worker count", "[topology][chern]")
{
    const ProtocolSpec s = ProtocolSpec::split(Family::Split2D, 0.3, 1.9);
    CHECK(chern_number(s, StepIndex(3), 96, {}, 1).value == chern_number(s, StepIndex(3), 96, {}, 3).value);
}

TEST_CASE("path counting", "[topology][path]")
{
    const ProtocolSpec simple = ProtocolSpec::simple(Family::Simple1D, 0.0);
    const PathInvariants p = path_invariants(simple, StepIndex(4), pi / 4, 3 * pi / 4, 256);
    CHECK(p.q0 == 1);
    CHECK(p.qpi == 1);
    const PathInvariants none = path_invariants(simple, StepIndex(4), 0.1, 0.5, 256);
    CHECK(none.q0 == 0);
    CHECK(none.qpi == 0);

    const ProtocolSpec cell = ProtocolSpec::split_related(Family::Split1D, 0.0, cell_relation);
    const PathInvariants outer = path_invariants(cell, StepIndex(6), -pi / 2 - 1e-3, pi / 2 + 1e-3, 512);
    CHECK(outer.q0 == 3);
    CHECK(outer.qpi == 3);
    const PathInvariants inner = path_invariants(cell, StepIndex(6), -pi / 2 + 1e-3, pi / 2 - 1e-3, 512);
    CHECK(inner.q0 + inner.qpi == 4);
    CHECK_THROWS_AS(path_invariants(cell, StepIndex(6), -pi / 2, 0.3, 512), GaplessError);
    CHECK_THROWS_AS(path_invariants(simple, StepIndex(4), 0.1, 0.5, 64), std::invalid_argument);
}

TEST_CASE("position-resolved invariant", "[topology]")
{
    InhomogeneousProfile profile;
    profile.alpha1 = 1.2;
    const auto far = position_resolved_invariant(profile, StepIndex(2), 60.0, 512);
    const auto bulk = winding_number(ProtocolSpec::split_related(Family::Split1D, 1.2, profile.beta_relation),
                                     StepIndex(2), 512);
    REQUIRE(far);
    CHECK(far->quantized == bulk.quantized);

    const auto centre = position_resolved_invariant(profile, StepIndex(2), 0.0, 512);
    const auto homogeneous = winding_number(ProtocolSpec::split(Family::Split1D, 0.0, pi / 3), StepIndex(2), 512);
    REQUIRE(centre);
    CHECK(centre->value == homogeneous.value);

    InhomogeneousProfile flat;
    flat.alpha1 = 0.0;
    flat.beta_relation = AngleRelation{0.0, 0.0};
    CHECK_FALSE(position_resolved_invariant(flat, StepIndex(1), 0.0, 512));
}
