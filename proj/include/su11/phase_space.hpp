#pragma once

// Symmetric characteristic functions, bipartite Wigner functions, the
// pullback propagation W(X;t) = W(Z;0) / C(G;t) = C(Y;0), and normally
// ordered moments by Wirtinger differentiation of the characteristic
// function.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <map>

#include "su11/amplifier.hpp"
#include "su11/types.hpp"

namespace su11 {

/// Phase-space vector roles: X pairs with Wigner arguments at time t,
/// Z at time 0; G pairs with characteristic arguments at time t, Y at 0.
enum class Role { X, Z, G, Y };

/// Conjugate-paired 4-vector (c_a, conj c_a, c_b, conj c_b); only the
/// independent components are stored.
struct PhasePoint {
    cplx c_a{0.0, 0.0};
    cplx c_b{0.0, 0.0};
    Role role = Role::X;

    Eigen::Vector4cd to_vector4() const {
        return {c_a, std::conj(c_a), c_b, std::conj(c_b)};
    }
};

/// Fixed symplectic bookkeeping matrices: E = I (x) S, S = diag(1,-1).
struct SymplecticConvention {
    static Eigen::Matrix2cd identity2() { return Eigen::Matrix2cd::Identity(); }
    static Eigen::Matrix2cd s2() {
        Eigen::Matrix2cd s;
        s << 1.0, 0.0, 0.0, -1.0;
        return s;
    }
    static Eigen::Matrix4cd big_e() {
        Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
        e.diagonal() << 1.0, -1.0, 1.0, -1.0;
        return e;
    }
};

/// Laguerre polynomial by the stable three-term recurrence.
inline double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: n must be nonnegative");
    if (n == 0) return 1.0;
    double lkm1 = 1.0, lk = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double lkp1 = ((2.0 * k + 1.0 - x) * lk - k * lkm1) / (k + 1.0);
        lkm1 = lk;
        lk = lkp1;
    }
    return lk;
}

/// Symmetric characteristic function of the initial state at the Y point.
inline cplx characteristic_t0(const InitialState& state, const PhasePoint& y) {
    if (y.role != Role::Y) throw std::invalid_argument("characteristic_t0: Y-role point required");
    const cplx ba = y.c_a, bb = y.c_b;
    const double q = std::norm(ba) + std::norm(bb);
    if (const auto* c = std::get_if<CoherentState>(&state)) {
        const double im = (ba * std::conj(c->zeta_a)).imag() + (bb * std::conj(c->zeta_b)).imag();
        return std::exp(cplx(-0.5 * q, 2.0 * im));
    }
    if (const auto* n = std::get_if<NumberState>(&state)) {
        return std::exp(-0.5 * q) * laguerre(n->n_a, std::norm(ba)) * laguerre(n->n_b, std::norm(bb));
    }
    const auto& th = std::get<ThermalState>(state);
    return std::exp(-0.5 * ((1.0 + 2.0 * th.nbar_a) * std::norm(ba) +
                            (1.0 + 2.0 * th.nbar_b) * std::norm(bb)));
}

/// Wigner function of the initial state at the Z point (normalized so that
/// integral over d^2 a d^2 b / pi^2 is 1).
inline double wigner_t0(const InitialState& state, const PhasePoint& z) {
    if (z.role != Role::Z) throw std::invalid_argument("wigner_t0: Z-role point required");
    const cplx ga = z.c_a, gb = z.c_b;
    if (const auto* c = std::get_if<CoherentState>(&state)) {
        return 4.0 * std::exp(-2.0 * (std::norm(ga - c->zeta_a) + std::norm(gb - c->zeta_b)));
    }
    if (const auto* n = std::get_if<NumberState>(&state)) {
        const double sign = ((n->n_a + n->n_b) % 2 == 0) ? 1.0 : -1.0;
        return 4.0 * sign * std::exp(-2.0 * (std::norm(ga) + std::norm(gb))) *
               laguerre(n->n_a, 4.0 * std::norm(ga)) * laguerre(n->n_b, 4.0 * std::norm(gb));
    }
    const auto& th = std::get<ThermalState>(state);
    const double wa = 1.0 + 2.0 * th.nbar_a, wb = 1.0 + 2.0 * th.nbar_b;
    return 4.0 / (wa * wb) * std::exp(-2.0 * (std::norm(ga) / wa + std::norm(gb) / wb));
}

/// Pull a time-t point back to time 0 through the inverse evolution matrix
/// (X -> Z, G -> Y).
inline PhasePoint pullback(const TMatrix& t, const PhasePoint& x) {
    if (x.role != Role::X && x.role != Role::G)
        throw std::invalid_argument("pullback: X- or G-role point required");
    const auto res = check_constraints(t);
    for (const double r : res)
        if (r > 1e-8) throw SingularTMatrix("pullback: evolution matrix violates constraints");
    PhasePoint out;
    out.c_a = std::conj(t.mu_a) * x.c_a - t.nu_a * std::conj(x.c_a) +
              std::conj(t.mu_b) * x.c_b - t.nu_b * std::conj(x.c_b);
    out.c_b = std::conj(t.chi_a) * x.c_a - t.eta_a * std::conj(x.c_a) +
              std::conj(t.chi_b) * x.c_b - t.eta_b * std::conj(x.c_b);
    out.role = x.role == Role::X ? Role::Z : Role::Y;
    return out;
}

/// Forward map (Z -> X, Y -> G), the inverse of pullback.
inline PhasePoint pushforward(const TMatrix& t, const PhasePoint& z) {
    if (z.role != Role::Z && z.role != Role::Y)
        throw std::invalid_argument("pushforward: Z- or Y-role point required");
    PhasePoint out;
    out.c_a = t.mu_a * z.c_a + t.nu_a * std::conj(z.c_a) + t.chi_a * z.c_b +
              t.eta_a * std::conj(z.c_b);
    out.c_b = t.mu_b * z.c_a + t.nu_b * std::conj(z.c_a) + t.chi_b * z.c_b +
              t.eta_b * std::conj(z.c_b);
    out.role = z.role == Role::Z ? Role::X : Role::G;
    return out;
}

/// W(X;t) = W(Z;0) with Z the pulled-back point.
inline double wigner_t(const InitialState& state, const AmplifierConfig& cfg, double t,
                       const PhasePoint& x) {
    if (x.role != Role::X) throw std::invalid_argument("wigner_t: X-role point required");
    return wigner_t0(state, pullback(heisenberg_solution(cfg, t), x));
}

/// C(G;t) = C(Y;0) with Y the pulled-back point.
inline cplx characteristic_t(const InitialState& state, const AmplifierConfig& cfg, double t,
                             const PhasePoint& g) {
    if (g.role != Role::G) throw std::invalid_argument("characteristic_t: G-role point required");
    return characteristic_t0(state, pullback(heisenberg_solution(cfg, t), g));
}

// ---------------------------------------------------------------------
// normally ordered moments via Wirtinger finite differences

namespace detail {

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;
};

/// Central-difference stencils of order O(h^2) for derivative order d.
inline const Stencil& stencil(int d) {
    static const std::array<Stencil, 7> table = {{
        {{0}, {1.0}},
        {{-1, 1}, {-0.5, 0.5}},
        {{-1, 0, 1}, {1.0, -2.0, 1.0}},
        {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
        {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
        {{-3, -2, -1, 1, 2, 3}, {-0.5, 2.0, -2.5, 2.5, -2.0, 0.5}},
        {{-3, -2, -1, 0, 1, 2, 3}, {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0}},
    }};
    return table.at(d);
}

inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
}

using GridCache = std::map<std::array<int, 4>, cplx>;

/// Mixed real partial d^{o0+o1+o2+o3} F / dx1^{o0} dy1^{o1} dx2^{o2} dy2^{o3}
/// at the origin, step h, evaluations memoized across calls.
template <typename F>
cplx mixed_partial(F&& f, GridCache& cache, const std::array<int, 4>& ord, double h) {
    const Stencil& s0 = stencil(ord[0]);
    const Stencil& s1 = stencil(ord[1]);
    const Stencil& s2 = stencil(ord[2]);
    const Stencil& s3 = stencil(ord[3]);
    cplx acc{0.0, 0.0};
    for (size_t i0 = 0; i0 < s0.offsets.size(); ++i0)
        for (size_t i1 = 0; i1 < s1.offsets.size(); ++i1)
            for (size_t i2 = 0; i2 < s2.offsets.size(); ++i2)
                for (size_t i3 = 0; i3 < s3.offsets.size(); ++i3) {
                    const std::array<int, 4> pt = {s0.offsets[i0], s1.offsets[i1],
                                                   s2.offsets[i2], s3.offsets[i3]};
                    auto it = cache.find(pt);
                    if (it == cache.end())
                        it = cache.emplace(pt, f(pt[0] * h, pt[1] * h, pt[2] * h, pt[3] * h)).first;
                    acc += s0.weights[i0] * s1.weights[i1] * s2.weights[i2] * s3.weights[i3] *
                           it->second;
                }
    const int total = ord[0] + ord[1] + ord[2] + ord[3];
    return acc / std::pow(h, total);
}

/// Full Wirtinger derivative d^p/dxi_a^p d^q/dxi_a*^q d^r/dxi_b^r
/// d^s/dxi_b*^s of F at the origin via the binomial expansion into real
/// partials.
template <typename F>
cplx wirtinger_derivative(F&& f, int p, int q, int r, int s, double h) {
    GridCache cache;
    cplx acc{0.0, 0.0};
    const cplx mi(0.0, -1.0), pi_(0.0, 1.0);
    for (int j = 0; j <= p; ++j)
        for (int k = 0; k <= q; ++k)
            for (int j2 = 0; j2 <= r; ++j2)
                for (int k2 = 0; k2 <= s; ++k2) {
                    const cplx coeff_a = binom(p, j) * binom(q, k) * std::pow(mi, p - j) *
                                         std::pow(pi_, q - k);
                    const cplx coeff_b = binom(r, j2) * binom(s, k2) * std::pow(mi, r - j2) *
                                         std::pow(pi_, s - k2);
                    const std::array<int, 4> ord = {j + k, (p - j) + (q - k), j2 + k2,
                                                    (r - j2) + (s - k2)};
                    acc += coeff_a * coeff_b * mixed_partial(f, cache, ord, h);
                }
    return acc / std::pow(2.0, p + q + r + s);
}

}  // namespace detail

struct MomentOptions {
    double base_step = 1e-2;
    double richardson_tol = 1e-4;
};

/// Normally ordered moment <a^dag^p a^q b^dag^r b^s>(t) via central
/// differences with three-level Richardson extrapolation applied to
/// exp((|xi_a|^2+|xi_b|^2)/2) C(G;t) at the origin.
inline cplx moment(const InitialState& state, const AmplifierConfig& cfg, double t, int p, int q,
                   int r, int s, const MomentOptions& opts = {}) {
    if (p < 0 || q < 0 || r < 0 || s < 0) throw std::invalid_argument("moment: negative order");
    const int total = p + q + r + s;
    if (total > 6) throw std::invalid_argument("moment: differentiation order capped at 6");
    if (total == 0) return {1.0, 0.0};
    const TMatrix tm = heisenberg_solution(cfg, t);
    auto f = [&](double x1, double y1, double x2, double y2) -> cplx {
        const PhasePoint g{cplx(x1, y1), cplx(x2, y2), Role::G};
        const double n2 = std::norm(g.c_a) + std::norm(g.c_b);
        return std::exp(0.5 * n2) * characteristic_t0(state, pullback(tm, g));
    };
    // wider base step for high orders keeps roundoff below the Richardson
    // tolerance
    const double h0 = total <= 4 ? opts.base_step : (total == 5 ? 0.08 : 0.14);
    const cplx d1 = detail::wirtinger_derivative(f, p, q, r, s, h0);
    const cplx d2 = detail::wirtinger_derivative(f, p, q, r, s, 0.5 * h0);
    const cplx d3 = detail::wirtinger_derivative(f, p, q, r, s, 0.25 * h0);
    const cplx r1 = (4.0 * d2 - d1) / 3.0;
    const cplx r2 = (4.0 * d3 - d2) / 3.0;
    const cplx extrap = (16.0 * r2 - r1) / 15.0;
    if (std::abs(extrap - r2) > opts.richardson_tol * (1.0 + std::abs(extrap)))
        throw DifferentiationUnstable("moment: Richardson levels disagree");
    const double sign = ((q + s) % 2 == 0) ? 1.0 : -1.0;
    return sign * extrap;
}

}  // namespace su11
