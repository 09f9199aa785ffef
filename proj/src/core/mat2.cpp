#include <algorithm>
#include <cmath>

#include "topowalk/core.hpp"

namespace topowalk {

Mat2 operator*(const Mat2& a, const Mat2& b)
{
    return {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
            a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
}

Mat2 operator+(const Mat2& a, const Mat2& b)
{
    return {a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]};
}

Mat2 operator-(const Mat2& a, const Mat2& b)
{
    return {a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]};
}

Mat2 operator-(const Mat2& a) { return {-a.m[0], -a.m[1], -a.m[2], -a.m[3]}; }

Mat2 operator*(Complex s, const Mat2& a) { return {s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}; }

double frobenius(const Mat2& a)
{
    double s = 0.0;
    for (const auto& z : a.m) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const Mat2& a)
{
    double s = 0.0;
    for (const auto& z : a.m) s = std::max(s, std::abs(z));
    return s;
}

bool Mat2::is_unitary(double tol) const
{
    return max_abs(adjoint() * (*this) - pauli::identity) <= tol;
}

bool Mat2::is_hermitian(double tol) const { return max_abs(adjoint() - *this) <= tol; }

bool Mat2::is_traceless(double tol) const { return std::abs(trace()) <= tol; }

Mat2 pauli_combination(const Vec3& v)
{
    return {Complex{v[2], 0.0}, Complex{v[0], -v[1]}, Complex{v[0], v[1]}, Complex{-v[2], 0.0}};
}

SU2Coefficients su2_coefficients(const Mat2& u)
{
    // tr(U sigma_j) = -2i b_j for U = a0 I - i b.sigma
    const Complex half_i{0.0, 0.5};
    return {0.5 * u.trace().real(),
            {(half_i * (u * pauli::x).trace()).real(), (half_i * (u * pauli::y).trace()).real(),
             (half_i * (u * pauli::z).trace()).real()}};
}

Spinor operator*(const Mat2& a, const Spinor& v)
{
    return {a.m[0] * v.up + a.m[1] * v.down, a.m[2] * v.up + a.m[3] * v.down};
}

namespace {

Spinor normalized(Complex a, Complex b)
{
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

Spinor orthogonal_complement(const Spinor& v) { return {-std::conj(v.down), std::conj(v.up)}; }

// Null vector of (u - lambda I), or nullopt when u - lambda I vanishes.
std::optional<Spinor> null_vector(const Mat2& u, Complex lambda)
{
    const Complex a = u(0, 0) - lambda;
    const Complex b = u(0, 1);
    const Complex c = u(1, 0);
    const Complex d = u(1, 1) - lambda;
    // rows (a, b) and (c, d) are parallel; each gives a candidate (b, -a) / (d, -c)
    const double n1 = std::norm(a) + std::norm(b);
    const double n2 = std::norm(c) + std::norm(d);
    if (std::max(n1, n2) < 1e-300) return std::nullopt;
    if (n1 >= n2) return normalized(b, -a);
    return normalized(d, -c);
}

} // namespace

Eigen2 mat2_eig(const Mat2& u, double degeneracy_eps)
{
    const Complex half_tr = 0.5 * u.trace();
    const Complex half_diff = 0.5 * (u(0, 0) - u(1, 1));
    const Complex disc = std::sqrt(half_diff * half_diff + u(0, 1) * u(1, 0));
    Complex l1 = half_tr + disc;
    Complex l2 = half_tr - disc;
    if (std::arg(l2) > std::arg(l1)) std::swap(l1, l2);

    Eigen2 out;
    out.values = {l1, l2};
    out.degenerate = std::abs(l1 - l2) < degeneracy_eps;

    // Take the eigenvector from the eigenvalue whose shifted matrix has the
    // larger rows; the partner is its orthogonal complement when the pair is
    // degenerate (normal matrices only) and solved independently otherwise.
    auto v1 = null_vector(u, l1);
    auto v2 = null_vector(u, l2);
    if (!v1 && !v2) {
        out.vectors = {Spinor{1.0, 0.0}, Spinor{0.0, 1.0}};
    } else if (out.degenerate || !v1 || !v2) {
        if (v1) {
            out.vectors = {*v1, orthogonal_complement(*v1)};
        } else {
            out.vectors = {orthogonal_complement(*v2), *v2};
        }
    } else {
        out.vectors = {*v1, *v2};
    }
    return out;
}

} // namespace topowalk
