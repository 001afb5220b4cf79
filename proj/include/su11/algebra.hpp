#pragma once

// Parameter-space arithmetic for the su(1,1) group: normal/antinormal
// factorizations, composition of exponentials, inversion, and the
// unitarity criterion.  Everything here is representation-free; the
// 2x2 defining representation is used only as a composition backend.

#include <cmath>
#include <complex>
#include <string>

#include "su11/errors.hpp"
#include "su11/types.hpp"

namespace su11 {

/// Coefficient triple (omega_plus, omega_zero, omega_minus) of a group
/// exponential exp(omega_plus K+ + omega_zero K0 + omega_minus K-).
struct AlgebraParams {
    cplx omega_plus{0.0, 0.0};
    cplx omega_zero{0.0, 0.0};
    cplx omega_minus{0.0, 0.0};

    /// Squared radical (omega_zero/2)^2 - omega_plus*omega_minus.  All
    /// hyperbolic factors depend on the parameters only through this.
    cplx radical_arg() const {
        const cplx half = 0.5 * omega_zero;
        return half * half - omega_plus * omega_minus;
    }

    double norm() const {
        return std::sqrt(std::norm(omega_plus) + std::norm(omega_zero) + std::norm(omega_minus));
    }

    static AlgebraParams identity() { return {}; }
};

inline AlgebraParams operator*(double s, const AlgebraParams& p) {
    return {s * p.omega_plus, s * p.omega_zero, s * p.omega_minus};
}

/// Unitary subfamily: (xi, i*omega, -conj(xi)) with real omega.
struct UnitaryParams {
    cplx xi{0.0, 0.0};
    double omega = 0.0;

    AlgebraParams to_params() const { return {xi, kI * omega, -std::conj(xi)}; }
};

enum class Ordering { Normal, Antinormal };

/// Factors of a three-exponential ordering of a group element.
/// Normal:      exp(f_plus K+) f_zero^K0 exp(f_minus K-)
/// Antinormal:  exp(f_minus K-) f_zero^K0 exp(f_plus K+)
struct NormalFactors {
    cplx f_plus{0.0, 0.0};
    cplx f_zero{1.0, 0.0};
    cplx f_minus{0.0, 0.0};
    Ordering ordering = Ordering::Normal;
};

/// Intermediate reordering coefficients shared by the composition routes.
struct ComposeFactors {
    cplx c_plus{0.0, 0.0};
    cplx c_zero{1.0, 0.0};
    cplx c_minus{0.0, 0.0};
};

/// cosh and sinhc evaluated on the *squared* radical z, i.e.
/// C(z) = cosh(sqrt(z)) and S(z) = sinh(sqrt(z))/sqrt(z).  Both are
/// entire in z, so no square-root branch ever enters the formulas.
struct RadicalPair {
    cplx c{1.0, 0.0};
    cplx s{1.0, 0.0};
};

inline RadicalPair radical_functions(cplx z) {
    if (std::abs(z) < 1e-2) {
        // C = sum z^k/(2k)!,  S = sum z^k/(2k+1)!
        cplx c{1.0, 0.0}, s{1.0, 0.0}, term{1.0, 0.0};
        for (int k = 1; k <= 8; ++k) {
            term *= z / double((2 * k - 1) * (2 * k));
            c += term;
            s += term / double(2 * k + 1);
        }
        return {c, s};
    }
    const cplx w = std::sqrt(z);
    return {std::cosh(w), std::sinh(w) / w};
}

namespace detail {

inline bool denominator_ok(cplx den, cplx numerator_scale) {
    return std::abs(den) > 1e-12 * (1.0 + std::abs(numerator_scale));
}

}  // namespace detail

/// Normal-order factors (A+, A0, A-) of exp(p.K).
inline NormalFactors decompose_normal(const AlgebraParams& p) {
    const auto [c, s] = radical_functions(p.radical_arg());
    const cplx den = c - 0.5 * p.omega_zero * s;
    if (!detail::denominator_ok(den, c))
        throw DegenerateDecomposition("normal-order denominator vanished");
    return {p.omega_plus * s / den, 1.0 / (den * den), p.omega_minus * s / den, Ordering::Normal};
}

/// Antinormal-order factors (B+, B0, B-) of exp(p.K).
inline NormalFactors decompose_antinormal(const AlgebraParams& p) {
    const auto [c, s] = radical_functions(p.radical_arg());
    const cplx den = c + 0.5 * p.omega_zero * s;
    if (!detail::denominator_ok(den, c))
        throw DegenerateDecomposition("antinormal-order denominator vanished");
    return {p.omega_plus * s / den, den * den, p.omega_minus * s / den, Ordering::Antinormal};
}

/// Reordering coefficients (C+, C0, C-) arising when the antinormal
/// factors of p2 are pushed through the normal factors of p1.
inline ComposeFactors compose_factors(const AlgebraParams& p1, const AlgebraParams& p2) {
    const NormalFactors a = decompose_normal(p1);
    const NormalFactors b = decompose_antinormal(p2);
    const cplx mixed = b.f_zero * b.f_plus * (a.f_minus + b.f_minus);
    const cplx den = 1.0 - mixed;
    if (!detail::denominator_ok(den, mixed))
        throw CompositionSingularity("composition denominator vanished");
    return {b.f_zero * b.f_plus / den,
            b.f_zero / (den * den),
            b.f_zero * (a.f_minus + b.f_minus) / den};
}

/// 2x2 defining (faithful) representation element.  Determinant is 1 for
/// any exponential of the algebra.
struct GroupMatrix {
    cplx m00{1.0, 0.0}, m01{0.0, 0.0};
    cplx m10{0.0, 0.0}, m11{1.0, 0.0};

    cplx determinant() const { return m00 * m11 - m01 * m10; }
    cplx trace() const { return m00 + m11; }

    GroupMatrix operator*(const GroupMatrix& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }

    static GroupMatrix identity() { return {}; }
};

/// Defining representation: K+ -> [[0,1],[0,0]], K- -> [[0,0],[-1,0]],
/// K0 -> diag(1/2,-1/2).  exp of the generator combination is
/// C(z) I + S(z) X with X the traceless coefficient matrix.
inline GroupMatrix matrix_rep(const AlgebraParams& p) {
    const auto [c, s] = radical_functions(p.radical_arg());
    return {c + 0.5 * p.omega_zero * s, p.omega_plus * s,
            -p.omega_minus * s, c - 0.5 * p.omega_zero * s};
}

/// Principal-branch inverse of matrix_rep.  Throws BranchAmbiguity when
/// the trace lies on the negative real cut (trace <= -2), where the
/// principal logarithm is not defined / not unique.
inline AlgebraParams params_from_matrix(const GroupMatrix& m) {
    if (std::abs(m.determinant() - 1.0) > 1e-10)
        throw std::invalid_argument("params_from_matrix: determinant must be 1");
    const cplx tr = m.trace();
    if (std::abs(tr.imag()) <= 1e-12 * (1.0 + std::abs(tr)) && tr.real() <= -2.0 + 1e-12)
        throw BranchAmbiguity("matrix trace on the negative real cut");
    const cplx half_tr = 0.5 * tr;
    const cplx w = std::acosh(half_tr);  // principal branch
    const cplx z = w * w;
    const auto [c, s] = radical_functions(z);
    // m = C I + S X; recover X. S cannot vanish off the cut.
    const cplx x00 = (m.m00 - c) / s;
    return {m.m01 / s, 2.0 * x00, -m.m10 / s};
}

/// Composition Sigma with exp(Sigma.K) = exp(p1.K) exp(p2.K), computed
/// through the defining representation (product then principal log).
inline AlgebraParams compose(const AlgebraParams& p1, const AlgebraParams& p2) {
    return params_from_matrix(matrix_rep(p1) * matrix_rep(p2));
}

/// Same composition through the scalar reordering route: normal factors
/// of the product assembled from compose_factors, then inverted back to
/// exponential parameters.  Used to cross-validate compose().
inline AlgebraParams compose_via_factors(const AlgebraParams& p1, const AlgebraParams& p2) {
    const NormalFactors a = decompose_normal(p1);
    const ComposeFactors cf = compose_factors(p1, p2);
    const cplx n_plus = a.f_plus + a.f_zero * cf.c_plus;
    const cplx n_zero = a.f_zero * cf.c_zero;
    const cplx n_minus = cf.c_minus;
    if (std::abs(n_zero) < 1e-300) throw CompositionSingularity("vanishing central factor");

    // Invert the normal-order relations: with d = n_zero^{-1/2},
    // cosh(beta) = d + u and u = (omega_zero/2) sinhc coefficient solved from
    // C^2 - z S^2 = 1.
    const cplx d = std::exp(-0.5 * std::log(n_zero));
    const cplx u = (1.0 - d * d * (1.0 + n_plus * n_minus)) / (2.0 * d);
    const cplx c = d + u;
    if (std::abs(c.imag()) <= 1e-12 * (1.0 + std::abs(c)) && c.real() <= -1.0 + 1e-12)
        throw BranchAmbiguity("factor-route cosh on the negative real cut");
    const cplx w = std::acosh(c);
    const cplx z = w * w;
    const auto [cc, s] = radical_functions(z);
    (void)cc;
    if (std::abs(s) < 1e-14)
        throw BranchAmbiguity("factor-route sinhc vanished (element on the cut)");
    return {n_plus * d / s, 2.0 * u / s, n_minus * d / s};
}

/// Inverse element: exp(-p.K).
inline AlgebraParams inverse(const AlgebraParams& p) {
    return {-p.omega_plus, -p.omega_zero, -p.omega_minus};
}

/// True iff exp(p.K) generates a unitary transformation, i.e.
/// omega_minus = -conj(omega_plus) and omega_zero purely imaginary.
inline bool is_unitary(const AlgebraParams& p, double tol = 1e-12) {
    return std::abs(p.omega_plus + std::conj(p.omega_minus)) <= tol &&
           std::abs(p.omega_zero.real()) <= tol;
}

}  // namespace su11
