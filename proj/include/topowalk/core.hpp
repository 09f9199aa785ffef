#pragma once

// Shared value types for the step-dependent quantum walk library: 2x2 complex
// algebra, momenta, protocol descriptions and numerical tolerances.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topowalk {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I_unit{0.0, 1.0};

/// Raised when an operation needs a gapped spectrum and finds a gap closing.
class GaplessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a closed-form expression is evaluated outside its real domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// 2x2 complex matrices

/// Row-major 2x2 complex matrix.
struct Mat2 {
    std::array<Complex, 4> m{};

    constexpr Mat2() = default;
    constexpr Mat2(Complex a, Complex b, Complex c, Complex d) : m{a, b, c, d} {}

    constexpr Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    constexpr const Complex& operator()(int r, int c) const
    {
        return m[static_cast<std::size_t>(2 * r + c)];
    }

    Complex trace() const { return m[0] + m[3]; }
    Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
    Mat2 adjoint() const { return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}; }
    Mat2 conj() const { return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}; }

    bool is_unitary(double tol) const;
    bool is_hermitian(double tol) const;
    bool is_traceless(double tol) const;

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a);
Mat2 operator*(Complex s, const Mat2& a);

/// Exact matrix product a*b.
inline Mat2 mat2_mul(const Mat2& a, const Mat2& b) { return a * b; }

/// Frobenius norm.
double frobenius(const Mat2& a);
/// Largest absolute entry.
double max_abs(const Mat2& a);

namespace pauli {
inline constexpr Mat2 identity{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2 x{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 y{0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0};
inline constexpr Mat2 z{1.0, 0.0, 0.0, -1.0};
} // namespace pauli

/// Real 3-vector (Bloch-sphere coordinates, chiral axes).
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// v . sigma
Mat2 pauli_combination(const Vec3& v);

/// Coefficients (a0, b) of U = a0 I - i b.sigma; exact for U in SU(2).
struct SU2Coefficients {
    double a0;
    Vec3 b;
};
SU2Coefficients su2_coefficients(const Mat2& u);

/// Two-component internal state.
struct Spinor {
    Complex up{1.0, 0.0};
    Complex down{0.0, 0.0};

    double norm_squared() const { return std::norm(up) + std::norm(down); }
};

Spinor operator*(const Mat2& a, const Spinor& v);

struct Eigen2 {
    std::array<Complex, 2> values;
    std::array<Spinor, 2> vectors;  // unit norm
    bool degenerate = false;
};

/// Eigenpairs of a 2x2 matrix. The first eigenvalue has phase in [0, pi].
/// The degenerate flag is set when |lambda1 - lambda2| < degeneracy_eps.
Eigen2 mat2_eig(const Mat2& u, double degeneracy_eps = 1e-12);

// ---------------------------------------------------------------------------
// Momenta and protocol parameters

/// Point in the first Brillouin zone; ky is absent for one-dimensional walks.
struct Momentum {
    double kx = 0.0;
    std::optional<double> ky;

    Momentum() = default;
    explicit Momentum(double k);
    Momentum(double kx_, double ky_);

    bool is_2d() const { return ky.has_value(); }
    Momentum negated() const { return is_2d() ? Momentum(-kx, -*ky) : Momentum(-kx); }
};

enum class Family { Simple1D, Split1D, Simple2D, Split2D };

inline bool is_2d(Family f) { return f == Family::Simple2D || f == Family::Split2D; }
inline bool is_split(Family f) { return f == Family::Split1D || f == Family::Split2D; }

std::string_view to_string(Family f);
/// Accepts simple1d|split1d|simple2d|split2d (case-insensitive).
Family parse_family(std::string_view name);

/// beta = s1 * alpha + s2
struct AngleRelation {
    double s1 = 1.0;
    double s2 = 0.0;

    double apply(double alpha) const { return s1 * alpha + s2; }
};

/// Everything needed to evaluate one walk protocol. Simple families read
/// theta; split families read alpha and beta.
struct ProtocolSpec {
    Family family = Family::Simple1D;
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<AngleRelation> relation;

    static ProtocolSpec simple(Family f, double theta);
    static ProtocolSpec split(Family f, double alpha, double beta);
    static ProtocolSpec split_related(Family f, double alpha, AngleRelation rel);

    /// Copy with beta recomputed from alpha when a relation is present.
    ProtocolSpec resolved() const;

    /// The scanned angle: theta for simple families, alpha for split ones.
    double scan_angle() const { return is_split(family) ? alpha : theta; }
    /// Copy with the scanned angle replaced (beta follows the relation).
    ProtocolSpec with_scan_angle(double angle) const;

    void validate() const;
};

/// Number of steps T entering the step-dependent coins; always >= 1.
class StepIndex {
public:
    explicit StepIndex(int t);
    int value() const { return t_; }
    double as_double() const { return static_cast<double>(t_); }

    friend bool operator==(StepIndex, StepIndex) = default;

private:
    int t_;
};

struct Tolerances {
    double gap_eps = 1e-9;
    double flat_eps = 1e-9;
    double unitarity_eps = 1e-12;
    double invariant_eps = 1e-3;

    void validate() const;
};

/// Position-dependent coin angle alpha(x) = alpha1 tanh(x / width), with beta
/// following beta_relation.
struct InhomogeneousProfile {
    double alpha1 = 0.0;
    double width = 3.0;
    AngleRelation beta_relation{1.0 / 3.0, pi / 3.0};

    double alpha_at(double x) const { return alpha1 * std::tanh(x / width); }
    std::pair<double, double> angles_at(double x) const
    {
        const double a = alpha_at(x);
        return {a, beta_relation.apply(a)};
    }
    void validate() const;
};

// ---------------------------------------------------------------------------
// Grids

/// Endpoint-inclusive uniform grid value i of n on [lo, hi]. Grids nest under
/// n -> 2n - 1 bit-exactly.
inline double grid_point(double lo, double hi, int i, int n)
{
    if (n == 1) return lo;
    return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n - 1));
}

std::vector<double> linspace(double lo, double hi, int n);

/// Periodic Brillouin-zone grid: n points -pi + 2 pi i / n, i = 0..n-1.
std::vector<double> periodic_bz_grid(int n);

/// Wrap an angle into [-pi, pi].
double wrap_to_bz(double k);

} // namespace topowalk
