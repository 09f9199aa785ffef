#include "topowalk/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <string_view>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace topowalk::cli {

namespace {

void add_protocol(CLI::App* sub, ProtocolArgs& p)
{
    sub->add_option("--family", p.family, "simple1d | split1d | simple2d | split2d")->capture_default_str();
    sub->add_option("-T,--T", p.T, "step index entering the coins")->capture_default_str();
    sub->add_option("--theta", p.theta, "coin angle of simple protocols (pi-expressions allowed)");
    sub->add_option("--alpha", p.alpha, "first coin angle of split protocols");
    sub->add_option("--beta", p.beta, "second coin angle of split protocols");
    sub->add_option("--relation", p.relation, "s1,s2: beta = s1*alpha + s2");
}

void add_tolerances(CLI::App* sub, ToleranceArgs& t)
{
    sub->add_option("--gap-eps", t.gap_eps, "gap closing threshold on |sin E|")->capture_default_str();
    sub->add_option("--flat-eps", t.flat_eps, "flat-band threshold")->capture_default_str();
    sub->add_option("--invariant-eps", t.invariant_eps, "quantization tolerance")->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Step-dependent discrete-time quantum walks: bands, invariants, gap closings, evolution and sweeps",
                 "topowalk"};
    app.set_config("--config", "", "TOML config file; [subcommand] sections hold per-command keys");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    std::string schema;
    app.add_option("--schema", schema, "config schema line")->group("");
    int threads = 0;
    auto* threads_opt = app.add_option("--threads", threads, "worker threads (0 = all cores; env TOPOWALK_THREADS)")
                            ->check(CLI::NonNegativeNumber);

    DispersionArgs disp;
    auto* c_disp = app.add_subcommand("dispersion", "bands, group velocity and Bloch vector at momenta");
    add_protocol(c_disp, disp.protocol);
    add_tolerances(c_disp, disp.tol);
    c_disp->add_option("--k", disp.k, "momentum k or kx,ky");
    c_disp->add_option("--k-grid", disp.k_grid, "uniform grid of N points per axis over [-pi, pi]");
    c_disp->add_option("--format", disp.format, "text | csv")->capture_default_str();

    InvariantArgs inv;
    auto* c_inv = app.add_subcommand("invariants", "winding, Chern, Zak and path invariants");
    add_protocol(c_inv, inv.protocol);
    add_tolerances(c_inv, inv.tol);
    c_inv->add_flag("--winding", inv.winding, "winding number (1D)");
    c_inv->add_flag("--chern", inv.chern, "Chern number (2D)");
    c_inv->add_flag("--zak", inv.zak, "Zak-phase ratio (split1d)");
    c_inv->add_flag("--path", inv.path, "count closings between --from and --to");
    c_inv->add_option("--mode", inv.zak_mode, "signed | absolute")->capture_default_str();
    c_inv->add_option("--from", inv.from, "path start angle");
    c_inv->add_option("--to", inv.to, "path end angle");
    c_inv->add_option("--samples", inv.samples, "path scan samples")->capture_default_str();
    c_inv->add_option("--resolution", inv.resolution, "quadrature points (default 2048 winding, 256 Chern)");

    ClassifyArgs cls;
    auto* c_cls = app.add_subcommand("classify", "locate and classify gap closings along the scanned angle");
    add_protocol(c_cls, cls.protocol);
    add_tolerances(c_cls, cls.tol);
    c_cls->add_option("--range,--alpha-range", cls.range, "lo,hi of the scanned angle");
    c_cls->add_option("--samples", cls.samples, "scan samples")->capture_default_str();

    EvolveArgs ev;
    auto* c_ev = app.add_subcommand("evolve", "real-space evolution; writes a trajectory CSV");
    add_protocol(c_ev, ev.protocol);
    c_ev->add_option("--steps", ev.steps, "number of steps")->capture_default_str();
    c_ev->add_option("--extent", ev.extent, "sites per axis (default 2*steps+3)");
    c_ev->add_option("--x0", ev.x0, "initial x")->capture_default_str();
    c_ev->add_option("--y0", ev.y0, "initial y (2D)")->capture_default_str();
    c_ev->add_option("--spinor", ev.spinor, "up | down | balanced")->capture_default_str();
    c_ev->add_option("--frozen", ev.frozen, "keep the coin step index fixed at this value");
    c_ev->add_flag("--inhomogeneous", ev.inhomogeneous, "split1d with alpha(x) = alpha1 tanh(x / width)");
    c_ev->add_option("--alpha1", ev.alpha1, "interface amplitude")->capture_default_str();
    c_ev->add_option("--width", ev.width, "interface width")->capture_default_str();
    c_ev->add_option("--window", ev.window, "record P(|x| <= window)");
    c_ev->add_option("--output,-o", ev.output, "trajectory CSV path (default stdout)");

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "evaluate a quantity on a two-axis grid per step index");
    add_protocol(c_sw, sw.protocol);
    add_tolerances(c_sw, sw.tol);
    c_sw->add_option("--T-list", sw.T_list, "comma-separated step indices (default -T)");
    c_sw->add_option("--quantity", sw.quantity, "energy|velocity|zak|zak-abs|winding|chern|gap|position-invariant")
        ->capture_default_str();
    c_sw->add_option("--axis1", sw.axis1, "theta|alpha|beta|alpha1|k|kx|ky|x")->capture_default_str();
    c_sw->add_option("--range1", sw.range1, "lo,hi for axis1");
    c_sw->add_option("--samples1", sw.samples1, "axis1 samples")->capture_default_str();
    c_sw->add_option("--axis2", sw.axis2, "theta|alpha|beta|alpha1|k|kx|ky|x")->capture_default_str();
    c_sw->add_option("--range2", sw.range2, "lo,hi for axis2")->capture_default_str();
    c_sw->add_option("--samples2", sw.samples2, "axis2 samples")->capture_default_str();
    c_sw->add_option("--k", sw.k, "fixed momentum for cells without momentum axes");
    c_sw->add_option("--alpha1", sw.alpha1, "fixed interface amplitude")->capture_default_str();
    c_sw->add_option("--resolution", sw.resolution, "winding quadrature points")->capture_default_str();
    c_sw->add_option("--csv", sw.csv, "CSV output path");
    c_sw->add_option("--svg", sw.svg, "SVG heatmap output path");
    c_sw->add_option("--palette", sw.palette, "diverging | sequential")->capture_default_str();

    VerifyArgs ver;
    auto* c_ver = app.add_subcommand("verify", "symmetry and real-space consistency checks on random parameters");
    c_ver->add_option("--grid", ver.grid, "momentum points per axis")->capture_default_str();
    c_ver->add_option("--tol", ver.tol, "residual tolerance")->capture_default_str();
    c_ver->add_option("--seed", ver.seed, "random seed")->capture_default_str();
    c_ver->add_option("--sets", ver.sets, "random parameter sets per family")->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return exit_usage;
    }

    if (threads_opt->count() == 0) {
        if (const char* env = std::getenv("TOPOWALK_THREADS"); env && *env) {
            const std::string_view v(env);
            const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), threads);
            if (ec != std::errc{} || end != v.data() + v.size() || threads < 0) {
                err << "error: TOPOWALK_THREADS must be a non-negative integer, got '" << v << "'\n";
                return exit_usage;
            }
        }
    }

    if (!schema.empty() && schema != config_schema) {
        err << "error: unsupported config schema '" << schema << "' (expected " << config_schema << ")\n";
        return exit_usage;
    }

    Context ctx{out, err, static_cast<unsigned>(threads)};
    CLI::App* used = app.get_subcommands().front();
    try {
        if (used == c_disp) return cmd_dispersion(disp, ctx);
        if (used == c_inv) return cmd_invariants(inv, ctx);
        if (used == c_cls) return cmd_classify(cls, ctx);
        if (used == c_ev) return cmd_evolve(ev, ctx);
        if (used == c_sw) return cmd_sweep(sw, ctx);
        return cmd_verify(ver, ctx);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n' << used->help();
        return exit_usage;
    } catch (const GaplessError& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace topowalk::cli
