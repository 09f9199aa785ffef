#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "topowalk/cli.hpp"

using topowalk::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text)
{
    std::ofstream f(name);
    f << text;
    return name;
}

std::string read_file(const std::string& name)
{
    std::ifstream f(name);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("dispersion command", "[cli]")
{
    const Result r = call({"dispersion", "--family", "simple1d", "-T", "4", "--theta", "pi", "--k", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gap=gapless") != std::string::npos);
    CHECK(r.out.find("IllDefined") != std::string::npos);

    const Result two = call({"dispersion", "--family", "simple2d", "-T", "8", "--theta", "pi/5", "--k", "pi/7,pi/5"});
    CHECK(two.code == 0);
    CHECK(two.out.find("gap=gapped") != std::string::npos);

    const Result missing = call({"dispersion", "--family", "simple1d", "-T", "4", "--k", "0"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--theta") != std::string::npos);

    const Result csv = call({"dispersion", "--family", "split1d", "-T", "2", "--alpha", "0.3", "--beta", "1.1",
                             "--k-grid", "9", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') >= 10);

    CHECK(call({"dispersion", "--family", "simple3d", "--theta", "1", "--k", "0"}).code == 2);
    CHECK(call({"dispersion", "--family", "simple1d", "--theta", "pi/", "--k", "0"}).code == 2);
    CHECK(call({"dispersion", "--family", "simple1d", "--theta", "1", "--k", "0", "--bogus"}).code == 2);
}

TEST_CASE("invariants command", "[cli]")
{
    const Result w = call({"invariants", "--winding", "--family", "simple1d", "-T", "1", "--theta", "pi/2"});
    CHECK(w.code == 0);
    CHECK((w.out.find("quantized=-1") != std::string::npos || w.out.find("quantized=1") != std::string::npos));

    const Result c = call({"invariants", "--chern", "--family", "split2d", "-T", "8", "--alpha", "pi/5", "--relation",
                           "1/3,pi/3", "--resolution", "64"});
    CHECK(c.code == 0);
    CHECK(c.out.find("quantized=0") != std::string::npos);

    const Result z = call({"invariants", "--zak", "--family", "split1d", "-T", "1", "--alpha", "0.4", "--beta", "0.4"});
    CHECK(z.code == 0);

    const Result gapless = call({"invariants", "--path", "--family", "split1d", "-T", "6", "--relation", "1/3,pi/3",
                                 "--from", "-pi/2", "--to", "0.5"});
    CHECK(gapless.code == 1);
    CHECK(gapless.err.find("gapless") != std::string::npos);

    const Result path = call({"invariants", "--path", "--family", "simple1d", "-T", "4", "--from", "pi/4", "--to",
                              "3pi/4"});
    CHECK(path.code == 0);
    CHECK(path.out.find("q0=1") != std::string::npos);

    CHECK(call({"invariants", "--winding", "--chern", "--family", "simple1d", "--theta", "1"}).code == 2);
    CHECK(call({"invariants", "--family", "simple1d", "--theta", "1"}).code == 2);
}

TEST_CASE("classify command", "[cli]")
{
    const Result cell = call({"classify", "--family", "split1d", "-T", "6", "--relation", "1/3,pi/3", "--alpha-range",
                              "-pi/2,pi/2"});
    CHECK(cell.code == 0);
    CHECK(cell.out.find("pattern: CELL") != std::string::npos);
    CHECK(cell.out.find("FlatBand") != std::string::npos);
    CHECK(cell.out.find("FermiArc") != std::string::npos);

    const Result simple = call({"classify", "--family", "simple1d", "-T", "4", "--range", "0,2pi"});
    CHECK(simple.code == 0);
    std::size_t dirac = 0;
    for (std::size_t p = simple.out.find("DiracCone"); p != std::string::npos; p = simple.out.find("DiracCone", p + 1))
        ++dirac;
    CHECK(dirac == 5);
    CHECK(simple.out.find("pattern: none") != std::string::npos);

    const Result empty = call({"classify", "--family", "simple1d", "-T", "4", "--range", "1,1"});
    CHECK(empty.code == 0);
    CHECK(empty.out.find("Dirac") == std::string::npos);
}

TEST_CASE("evolve command", "[cli]")
{
    const Result drift = call({"evolve", "--family", "simple1d", "--theta", "0", "--steps", "10", "--extent", "64"});
    CHECK(drift.code == 0);
    const auto last = drift.out.rfind("\n10,");
    REQUIRE(last != std::string::npos);
    CHECK(drift.out.substr(last + 1, 8) == "10,1,10,");

    const Result inh = call({"evolve", "--inhomogeneous", "--alpha1", "1.2", "--steps", "50", "--window", "4", "-T",
                             "2"});
    CHECK(inh.code == 0);
    CHECK(inh.out.find(",nan\n") == std::string::npos);

    const Result wrap = call({"evolve", "--family", "simple1d", "--theta", "0.3", "--steps", "20", "--extent", "16"});
    CHECK(wrap.code == 0);
    CHECK(wrap.err.find("warning") != std::string::npos);

    const std::string path = "test_cli_traj.csv";
    CHECK(call({"evolve", "--family", "simple1d", "--theta", "0.3", "--steps", "5", "-o", path}).code == 0);
    CHECK(read_file(path).rfind("# topowalk v1", 0) == 0);
    std::remove(path.c_str());
}

TEST_CASE("sweep command", "[cli]")
{
    const Result r = call({"sweep", "--family", "simple1d", "--theta", "0", "--T-list", "2,4", "--axis1", "theta",
                           "--samples1", "9", "--samples2", "9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("T=2") != std::string::npos);
    CHECK(r.out.find("T=4") != std::string::npos);

    const std::string csv = "test_cli_sweep.csv";
    const std::string svg = "test_cli_sweep.svg";
    CHECK(call({"sweep", "--family", "split1d", "--alpha", "0", "--beta", "pi/3", "-T", "3", "--axis1", "alpha",
                "--samples1", "9", "--samples2", "8", "--quantity", "zak-abs", "--csv", csv, "--svg", svg})
              .code == 0);
    CHECK(read_file(csv).find("quantity=zak-abs") != std::string::npos);
    CHECK(read_file(svg).find("<svg") != std::string::npos);
    std::remove(csv.c_str());
    std::remove(svg.c_str());

    CHECK(call({"sweep", "--family", "simple1d", "--theta", "0", "--axis1", "alpha"}).code == 2);
    CHECK(call({"sweep", "--family", "simple1d", "--theta", "0", "--T-list", "2,x"}).code == 2);
}

TEST_CASE("verify command", "[cli]")
{
    const Result ok = call({"verify", "--grid", "32", "--sets", "2"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verify: PASS") != std::string::npos);
    const Result strict = call({"verify", "--grid", "32", "--sets", "2", "--tol", "1e-20"});
    CHECK(strict.code == 1);
    CHECK(strict.out.find("verify: FAIL") != std::string::npos);
    CHECK(call({"verify", "--grid", "1"}).code == 2);
}

TEST_CASE("config files and precedence", "[cli][config]")
{
    const std::string cfg = write_file("test_cli_config.toml", "schema = \"topowalk-config/1\"\n"
                                                               "[dispersion]\n"
                                                               "family = \"simple1d\"\n"
                                                               "T = 4\n"
                                                               "theta = \"pi\"\n"
                                                               "k = \"0\"\n");
    const Result from_file = call({"dispersion", "--config", cfg});
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("gap=gapless") != std::string::npos);

    const Result flag_wins = call({"dispersion", "--config", cfg, "--theta", "pi/3"});
    CHECK(flag_wins.code == 0);
    CHECK(flag_wins.out.find("gap=gapped") != std::string::npos);

    const Result direct = call({"dispersion", "--family", "simple1d", "-T", "4", "--theta", "pi/3", "--k", "0"});
    CHECK(flag_wins.out == direct.out);

    const std::string unknown = write_file("test_cli_unknown.toml", "[dispersion]\nfamily = \"simple1d\"\ncolour = 3\n");
    CHECK(call({"dispersion", "--config", unknown, "--theta", "1", "--k", "0"}).code == 2);

    const std::string schema = write_file("test_cli_schema.toml", "schema = \"topowalk-config/9\"\n");
    CHECK(call({"dispersion", "--config", schema, "--family", "simple1d", "--theta", "1", "--k", "0"}).code == 2);

    CHECK(call({"dispersion", "--config", "missing.toml", "--theta", "1"}).code == 2);

    for (const auto& f : {cfg, unknown, schema}) std::remove(f.c_str());
}

TEST_CASE("outputs do not depend on the worker count", "[cli]")
{
    const std::vector<std::string> base{"sweep", "--family", "split1d", "--alpha", "0", "--relation", "1/3,pi/3",
                                        "-T", "6", "--axis1", "alpha", "--samples1", "17", "--samples2", "8",
                                        "--quantity", "winding"};
    auto with = [&](const std::string& t) {
        auto a = base;
        a.insert(a.begin(), {"--threads", t});
        return call(a);
    };
    const Result one = with("1");
    const Result four = with("4");
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
    CHECK(one.out == with("1").out);

    setenv("TOPOWALK_THREADS", "3", 1);
    const Result env = call(base);
    unsetenv("TOPOWALK_THREADS");
    CHECK(env.out == one.out);

    setenv("TOPOWALK_THREADS", "-2", 1);
    CHECK(call(base).code == 2);
    unsetenv("TOPOWALK_THREADS");
}

TEST_CASE("help and usage", "[cli]")
{
    const Result help = call({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("dispersion") != std::string::npos);
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
}
