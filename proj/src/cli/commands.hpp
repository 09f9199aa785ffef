#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "topowalk/core.hpp"

namespace topowalk::cli {

/// Bad or missing arguments detected after parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProtocolArgs {
    std::string family = "simple1d";
    int T = 1;
    std::string theta;
    std::string alpha;
    std::string beta;
    std::string relation;  // "s1,s2": beta = s1 alpha + s2
};

struct ToleranceArgs {
    double gap_eps = 1e-9;
    double flat_eps = 1e-9;
    double invariant_eps = 1e-3;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned threads = 0;
};

struct DispersionArgs {
    ProtocolArgs protocol;
    ToleranceArgs tol;
    std::string k;
    int k_grid = 0;
    std::string format = "text";
};

struct InvariantArgs {
    ProtocolArgs protocol;
    ToleranceArgs tol;
    bool winding = false;
    bool chern = false;
    bool zak = false;
    bool path = false;
    std::string zak_mode = "signed";
    std::string from;
    std::string to;
    int samples = 1024;
    int resolution = 0;  // 0 = 2048 for winding, 256 for Chern
};

struct ClassifyArgs {
    ProtocolArgs protocol;
    ToleranceArgs tol;
    std::string range;
    int samples = 2048;
};

struct EvolveArgs {
    ProtocolArgs protocol;
    int steps = 10;
    int extent = 0;  // 0 = 2 * steps + 3
    int x0 = 0;
    int y0 = 0;
    std::string spinor = "up";
    int frozen = 0;  // 0 = coin index follows the step counter
    bool inhomogeneous = false;
    double alpha1 = 0.0;
    double width = 3.0;
    int window = -1;
    std::string output;
};

struct SweepArgs {
    ProtocolArgs protocol;
    ToleranceArgs tol;
    std::string T_list;
    std::string quantity = "energy";
    std::string axis1 = "theta";
    std::string range1;
    int samples1 = 201;
    std::string axis2 = "k";
    std::string range2 = "-pi,pi";
    int samples2 = 201;
    std::string k = "0";
    double alpha1 = 0.0;
    int resolution = 256;
    std::string csv;
    std::string svg;
    std::string palette = "diverging";
};

struct VerifyArgs {
    int grid = 256;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int sets = 5;
};

ProtocolSpec build_spec(const ProtocolArgs& a);
Tolerances build_tolerances(const ToleranceArgs& a);

int cmd_dispersion(const DispersionArgs& a, Context& ctx);
int cmd_invariants(const InvariantArgs& a, Context& ctx);
int cmd_classify(const ClassifyArgs& a, Context& ctx);
int cmd_evolve(const EvolveArgs& a, Context& ctx);
int cmd_sweep(const SweepArgs& a, Context& ctx);
int cmd_verify(const VerifyArgs& a, Context& ctx);

} // namespace topowalk::cli
