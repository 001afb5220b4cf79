#pragma once

// Truncated-Fock-space oracle: explicit dense matrices for ladder
// operators and su(1,1) generators in the one- and two-mode bosonic
// representations, matrix exponentials, displacement operators, state
// density matrices, and a brute-force time-ordered propagator for the
// detuned amplifier.  Every analytic result in the library is checked
// against this module on truncation-insensitive interior blocks.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numeric>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/errors.hpp"
#include "su11/types.hpp"

namespace su11::fock {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

enum class RepKind { OneModeBoson, TwoModeBoson };

struct FockRep {
    RepKind kind = RepKind::OneModeBoson;
    int cutoff = 20;  // max photon number per mode

    int dim() const {
        const int levels = cutoff + 1;
        return kind == RepKind::OneModeBoson ? levels : levels * levels;
    }

    void validate() const {
        if (cutoff < 2) throw CutoffTooSmall("cutoff must be at least 2");
        const int limit = kind == RepKind::OneModeBoson ? 80 : 40;
        if (cutoff > limit) throw ConfigError("cutoff exceeds the dense-matrix limit");
    }

    int index(int n_a, int n_b) const { return n_a * (cutoff + 1) + n_b; }
};

/// Dense operator together with the truncation-insensitive block size
/// (photon levels per mode) declared for comparisons.
struct OperatorMatrix {
    MatrixXcd mat;
    FockRep rep;
    int interior_levels = 0;

    int dimension() const { return int(mat.rows()); }
};

/// Default interior size: retained levels per mode after discarding the
/// rows reachable by truncation leakage for a parameter of norm pnorm.
inline int default_interior_levels(double pnorm, int cutoff) {
    const int margin = 2 * int(std::ceil(pnorm * std::sqrt(double(cutoff))));
    const int levels = cutoff + 1 - margin;
    if (levels < 1) throw CutoffTooSmall("no interior block survives at this cutoff");
    return levels;
}

inline std::vector<int> interior_indices(const FockRep& rep, int levels) {
    std::vector<int> idx;
    if (rep.kind == RepKind::OneModeBoson) {
        for (int n = 0; n < levels; ++n) idx.push_back(n);
    } else {
        for (int na = 0; na < levels; ++na)
            for (int nb = 0; nb < levels; ++nb) idx.push_back(rep.index(na, nb));
    }
    return idx;
}

inline MatrixXcd gather(const MatrixXcd& m, const std::vector<int>& idx) {
    MatrixXcd out(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
}

/// Annihilation/creation pair on a single mode with max photon `cutoff`.
inline std::pair<MatrixXcd, MatrixXcd> ladder_matrices(int cutoff) {
    if (cutoff < 2) throw CutoffTooSmall("cutoff must be at least 2");
    const int d = cutoff + 1;
    MatrixXcd a = MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {a, a.adjoint()};
}

struct Generators {
    MatrixXcd k_plus, k_minus, k_zero;
};

/// su(1,1) generators in the chosen bosonic representation.
inline Generators generators(const FockRep& rep) {
    rep.validate();
    const int d = rep.dim();
    MatrixXcd kp = MatrixXcd::Zero(d, d);
    MatrixXcd k0 = MatrixXcd::Zero(d, d);
    if (rep.kind == RepKind::OneModeBoson) {
        // K+ = a^dag^2/2, K- = a^2/2, K0 = (a^dag a + 1/2)/2
        for (int n = 0; n + 2 <= rep.cutoff; ++n)
            kp(n + 2, n) = 0.5 * std::sqrt(double((n + 1) * (n + 2)));
        for (int n = 0; n < d; ++n) k0(n, n) = 0.5 * (n + 0.5);
    } else {
        // K+ = a^dag b^dag, K- = ab, K0 = (n_a + n_b + 1)/2
        for (int na = 0; na < rep.cutoff; ++na)
            for (int nb = 0; nb < rep.cutoff; ++nb)
                kp(rep.index(na + 1, nb + 1), rep.index(na, nb)) =
                    std::sqrt(double((na + 1) * (nb + 1)));
        for (int na = 0; na <= rep.cutoff; ++na)
            for (int nb = 0; nb <= rep.cutoff; ++nb)
                k0(rep.index(na, nb), rep.index(na, nb)) = 0.5 * (na + nb + 1);
    }
    return {kp, kp.adjoint(), k0};
}

/// Casimir K0^2 - (K-K+ + K+K-)/2 as an explicit matrix.
inline OperatorMatrix casimir(const FockRep& rep) {
    const Generators g = generators(rep);
    MatrixXcd c = g.k_zero * g.k_zero -
                  0.5 * (g.k_minus * g.k_plus + g.k_plus * g.k_minus);
    // one ladder rung is lost at the truncation edge
    const int interior = rep.cutoff - 1;
    return {std::move(c), rep, interior};
}

namespace detail {

inline double one_norm(const MatrixXcd& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// Connected components of the structural nonzero pattern (union-find).
inline std::vector<std::vector<int>> components(const MatrixXcd& m) {
    const int n = int(m.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i != j && m(i, j) != 0.0) {
                const int ri = find(i), rj = find(j);
                if (ri != rj) parent[ri] = rj;
            }
    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    return groups;
}

}  // namespace detail

/// Scaling-and-squaring matrix exponential.  Block-diagonal structure
/// (after permutation) is detected and exploited; each diagonal block is
/// exponentiated independently.  Accuracy ~1e-12 for 1-norms up to ~50.
inline MatrixXcd matexp(const MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matexp: matrix must be square");
    if (!m.allFinite()) throw std::invalid_argument("matexp: entries must be finite");
    if (detail::one_norm(m) > 350.0)
        throw OverflowError("matexp: input norm too large for a reliable exponential");
    const auto groups = detail::components(m);
    if (groups.size() == 1) return m.exp();
    MatrixXcd out = MatrixXcd::Zero(m.rows(), m.cols());
    for (const auto& g : groups) {
        if (g.size() == 1) {
            out(g[0], g[0]) = std::exp(m(g[0], g[0]));
            continue;
        }
        MatrixXcd block(g.size(), g.size());
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t j = 0; j < g.size(); ++j) block(i, j) = m(g[i], g[j]);
        const MatrixXcd eb = block.exp();
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t j = 0; j < g.size(); ++j) out(g[i], g[j]) = eb(i, j);
    }
    return out;
}

inline OperatorMatrix matexp(const OperatorMatrix& m) {
    return {matexp(m.mat), m.rep, m.interior_levels};
}

/// Matrix realization of exp(p.K) in the chosen representation.
inline OperatorMatrix exponentiate_params(const AlgebraParams& p, const FockRep& rep) {
    const Generators g = generators(rep);
    MatrixXcd m = p.omega_plus * g.k_plus + p.omega_zero * g.k_zero + p.omega_minus * g.k_minus;
    return {matexp(m), rep, default_interior_levels(p.norm(), rep.cutoff)};
}

/// Realization of the three-factor ordering of `f` (central factor taken
/// as exp(log(f_zero) K0), principal log; f_zero = 0 is rejected).
inline OperatorMatrix realize_factors(const NormalFactors& f, const FockRep& rep) {
    if (f.f_zero == 0.0) throw DegenerateDecomposition("central factor must be nonzero");
    const Generators g = generators(rep);
    const MatrixXcd ep = matexp(MatrixXcd(f.f_plus * g.k_plus));
    const MatrixXcd e0 = matexp(MatrixXcd(std::log(f.f_zero) * g.k_zero));
    const MatrixXcd em = matexp(MatrixXcd(f.f_minus * g.k_minus));
    MatrixXcd prod = f.ordering == Ordering::Normal ? MatrixXcd(ep * e0 * em)
                                                    : MatrixXcd(em * e0 * ep);
    return {std::move(prod), rep, rep.cutoff + 1};
}

// ---------------------------------------------------------------------
// states

/// Truncated coherent-state column vector (exact amplitudes).
inline VectorXcd coherent_vector(cplx zeta, int cutoff) {
    VectorXcd v(cutoff + 1);
    v(0) = std::exp(-0.5 * std::norm(zeta));
    for (int n = 1; n <= cutoff; ++n) v(n) = v(n - 1) * zeta / std::sqrt(double(n));
    return v;
}

inline MatrixXcd single_mode_density(const InitialState& state, bool mode_a, int cutoff) {
    const int d = cutoff + 1;
    if (const auto* c = std::get_if<CoherentState>(&state)) {
        const VectorXcd v = coherent_vector(mode_a ? c->zeta_a : c->zeta_b, cutoff);
        return v * v.adjoint();
    }
    if (const auto* n = std::get_if<NumberState>(&state)) {
        const int occ = mode_a ? n->n_a : n->n_b;
        if (occ > cutoff) throw CutoffTooSmall("number state exceeds cutoff");
        MatrixXcd rho = MatrixXcd::Zero(d, d);
        rho(occ, occ) = 1.0;
        return rho;
    }
    const auto& th = std::get<ThermalState>(state);
    const double nbar = mode_a ? th.nbar_a : th.nbar_b;
    MatrixXcd rho = MatrixXcd::Zero(d, d);
    const double q = nbar / (nbar + 1.0);
    double w = 1.0 / (nbar + 1.0);
    for (int n = 0; n <= cutoff; ++n, w *= q) rho(n, n) = w;
    return rho;
}

/// Two-mode initial density matrix (product state, truncated).
inline MatrixXcd density_matrix(const InitialState& state, const FockRep& rep) {
    if (rep.kind != RepKind::TwoModeBoson)
        throw std::invalid_argument("density_matrix: two-mode representation required");
    const MatrixXcd ra = single_mode_density(state, true, rep.cutoff);
    const MatrixXcd rb = single_mode_density(state, false, rep.cutoff);
    const int d = rep.cutoff + 1;
    MatrixXcd rho(d * d, d * d);
    for (int ia = 0; ia < d; ++ia)
        for (int ja = 0; ja < d; ++ja)
            rho.block(ia * d, ja * d, d, d) = ra(ia, ja) * rb;
    return rho;
}

/// Single-mode displacement exp(xi a^dag - conj(xi) a).
inline MatrixXcd displacement_single(cplx xi, int cutoff) {
    const auto [a, adag] = ladder_matrices(cutoff);
    return matexp(MatrixXcd(xi * adag - std::conj(xi) * a));
}

/// Two-mode displacement D_a(xi_a) x D_b(xi_b).
inline MatrixXcd displacement(cplx xi_a, cplx xi_b, const FockRep& rep) {
    if (rep.kind != RepKind::TwoModeBoson)
        throw std::invalid_argument("displacement: two-mode representation required");
    const MatrixXcd da = displacement_single(xi_a, rep.cutoff);
    const MatrixXcd db = displacement_single(xi_b, rep.cutoff);
    const int d = rep.cutoff + 1;
    MatrixXcd out(d * d, d * d);
    for (int ia = 0; ia < d; ++ia)
        for (int ja = 0; ja < d; ++ja) out.block(ia * d, ja * d, d, d) = da(ia, ja) * db;
    return out;
}

/// tr(A B) without forming the product.
inline cplx trace_product(const MatrixXcd& a, const MatrixXcd& b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

// ---------------------------------------------------------------------
// brute-force propagator for the amplifier Hamiltonian

namespace detail {

struct InteractionFrame {
    Eigen::SparseMatrix<cplx> ab;       // two-mode ab
    Eigen::SparseMatrix<cplx> ab_dag;   // two-mode a^dag b^dag
    Eigen::VectorXd h0;                 // omega_a n_a + omega_b n_b
};

inline InteractionFrame make_frame(const AmplifierConfig& cfg, const FockRep& rep) {
    const int d = rep.cutoff + 1;
    const int dim = rep.dim();
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int na = 1; na < d; ++na)
        for (int nb = 1; nb < d; ++nb)
            trip.emplace_back(rep.index(na - 1, nb - 1), rep.index(na, nb),
                              std::sqrt(double(na * nb)));
    InteractionFrame f;
    f.ab.resize(dim, dim);
    f.ab.setFromTriplets(trip.begin(), trip.end());
    f.ab_dag = f.ab.adjoint();
    f.h0.resize(dim);
    for (int na = 0; na < d; ++na)
        for (int nb = 0; nb < d; ++nb)
            f.h0(rep.index(na, nb)) = cfg.omega_a * na + cfg.omega_b * nb;
    return f;
}

/// One RK4 sweep of dU/dt = -i Vtil(t) U over [t0, t1] with n steps,
/// where Vtil(t) = kappa e^{i delta t} ab + conj(kappa) e^{-i delta t}
/// a^dag b^dag is the interaction-picture coupling (the diagonal frame
/// rotation is exact and applied by the caller).
inline MatrixXcd rk4_interaction(const InteractionFrame& f, const AmplifierConfig& cfg,
                                 double t0, double t1, long n) {
    const double h = (t1 - t0) / double(n);
    MatrixXcd u = MatrixXcd::Identity(f.h0.size(), f.h0.size());
    const cplx mi(0.0, -1.0);
    auto apply = [&](double t, const MatrixXcd& x) -> MatrixXcd {
        const cplx ca = cfg.kappa * std::exp(kI * (cfg.delta * t));
        return mi * (ca * (f.ab * x) + std::conj(ca) * (f.ab_dag * x));
    };
    for (long k = 0; k < n; ++k) {
        const double t = t0 + h * double(k);
        const MatrixXcd k1 = apply(t, u);
        const MatrixXcd k2 = apply(t + 0.5 * h, u + (0.5 * h) * k1);
        const MatrixXcd k3 = apply(t + 0.5 * h, u + (0.5 * h) * k2);
        const MatrixXcd k4 = apply(t + h, u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

inline void rotate_frame(const InteractionFrame& f, double t_end, double t_start, MatrixXcd& u) {
    const auto dim = f.h0.size();
    for (Eigen::Index i = 0; i < dim; ++i) u.row(i) *= std::exp(cplx(0.0, -f.h0(i) * t_end));
    for (Eigen::Index j = 0; j < dim; ++j) u.col(j) *= std::exp(cplx(0.0, f.h0(j) * t_start));
}

inline long initial_steps(const AmplifierConfig& cfg, const FockRep& rep, double span,
                          double tol) {
    const double vnorm = 2.0 * std::abs(cfg.kappa) * (rep.cutoff + 1.0) + std::abs(cfg.delta);
    const double dt = std::pow(tol * 120.0 / std::max(span * std::pow(vnorm, 5), 1e-30), 0.25);
    const long n = long(std::ceil(span / std::min(dt, 0.25 / (1.0 + vnorm))));
    return std::max<long>(16, n);
}

}  // namespace detail

/// Time-ordered propagator of the amplifier Hamiltonian over
/// [t_start, t_end], integrated by fixed-step RK4 in the exact diagonal
/// rotating frame.  Steps are doubled until halving them moves the
/// result by less than `tol` (max-entry norm).
inline OperatorMatrix propagator_segment(const AmplifierConfig& cfg, double t_start,
                                         double t_end, const FockRep& rep,
                                         double tol = 1e-8, long max_steps = 1 << 21) {
    if (rep.kind != RepKind::TwoModeBoson)
        throw std::invalid_argument("propagator: two-mode representation required");
    rep.validate();
    cfg.validate();
    if (t_end < t_start) throw std::invalid_argument("propagator: t_end < t_start");
    const detail::InteractionFrame frame = detail::make_frame(cfg, rep);
    if (t_end == t_start)
        return {MatrixXcd::Identity(rep.dim(), rep.dim()), rep, rep.cutoff + 1};

    long n = detail::initial_steps(cfg, rep, t_end - t_start, tol);
    if (n > max_steps) throw StepSizeFailure("propagator: tolerance unreachable within the step budget");
    MatrixXcd u_prev = detail::rk4_interaction(frame, cfg, t_start, t_end, n);
    for (int halvings = 0; halvings < 8; ++halvings) {
        n *= 2;
        if (n > max_steps)
            throw StepSizeFailure("propagator: tolerance unreachable within the step budget");
        MatrixXcd u = detail::rk4_interaction(frame, cfg, t_start, t_end, n);
        const double change = (u - u_prev).cwiseAbs().maxCoeff();
        if (change < tol) {
            detail::rotate_frame(frame, t_end, t_start, u);
            return {std::move(u), rep, rep.cutoff + 1};
        }
        u_prev = std::move(u);
    }
    throw StepSizeFailure("propagator did not converge under step halving");
}

inline OperatorMatrix propagator(const AmplifierConfig& cfg, double t, const FockRep& rep,
                                 double tol = 1e-8, long max_steps = 1 << 21) {
    return propagator_segment(cfg, 0.0, t, rep, tol, max_steps);
}

/// Propagators at each time of an ascending grid, integrated in one pass.
inline std::vector<OperatorMatrix> propagator_grid(const AmplifierConfig& cfg,
                                                   const std::vector<double>& ts,
                                                   const FockRep& rep, double tol = 1e-8,
                                                   long max_steps = 1 << 21) {
    if (rep.kind != RepKind::TwoModeBoson)
        throw std::invalid_argument("propagator: two-mode representation required");
    rep.validate();
    cfg.validate();
    for (size_t i = 0; i + 1 < ts.size(); ++i)
        if (ts[i + 1] < ts[i]) throw std::invalid_argument("propagator_grid: times must ascend");
    if (ts.empty()) return {};
    if (ts.front() < 0.0) throw std::invalid_argument("propagator_grid: times must be >= 0");
    const detail::InteractionFrame frame = detail::make_frame(cfg, rep);
    const double span = ts.back();

    auto run = [&](long n_total) {
        std::vector<MatrixXcd> out;
        MatrixXcd u = MatrixXcd::Identity(rep.dim(), rep.dim());
        double t_prev = 0.0;
        for (const double t : ts) {
            if (t > t_prev) {
                const long n = std::max<long>(
                    2, long(std::ceil(double(n_total) * (t - t_prev) / std::max(span, 1e-300))));
                u = detail::rk4_interaction(frame, cfg, t_prev, t, n) * u;
                t_prev = t;
            }
            out.push_back(u);
        }
        return out;
    };

    long n = detail::initial_steps(cfg, rep, std::max(span, 1e-12), tol);
    if (n > max_steps) throw StepSizeFailure("propagator grid: tolerance unreachable within the step budget");
    std::vector<MatrixXcd> prev = run(n);
    for (int halvings = 0; halvings < 8; ++halvings) {
        n *= 2;
        if (n > max_steps)
            throw StepSizeFailure("propagator grid: tolerance unreachable within the step budget");
        std::vector<MatrixXcd> cur = run(n);
        double change = 0.0;
        for (size_t i = 0; i < ts.size(); ++i)
            change = std::max(change, (cur[i] - prev[i]).cwiseAbs().maxCoeff());
        if (change < tol) {
            std::vector<OperatorMatrix> out;
            for (size_t i = 0; i < ts.size(); ++i) {
                detail::rotate_frame(frame, ts[i], 0.0, cur[i]);
                out.push_back({std::move(cur[i]), rep, rep.cutoff + 1});
            }
            return out;
        }
        prev = std::move(cur);
    }
    throw StepSizeFailure("propagator grid did not converge under step halving");
}

/// Reference integrator without the rotating frame: plain RK4 on
/// dU/dt = -i H(t) U.  Slow; used to validate the frame transformation.
inline MatrixXcd propagator_direct(const AmplifierConfig& cfg, double t, const FockRep& rep,
                                   long steps) {
    const detail::InteractionFrame frame = detail::make_frame(cfg, rep);
    const Eigen::Index dim = rep.dim();
    const cplx mi(0.0, -1.0);
    auto apply = [&](double tt, const MatrixXcd& x) -> MatrixXcd {
        const cplx ca = cfg.kappa * std::exp(kI * (cfg.eta() * tt));
        MatrixXcd y = ca * (frame.ab * x) + std::conj(ca) * (frame.ab_dag * x);
        y += frame.h0.cast<cplx>().asDiagonal() * x;
        return mi * y;
    };
    MatrixXcd u = MatrixXcd::Identity(dim, dim);
    const double h = t / double(steps);
    for (long k = 0; k < steps; ++k) {
        const double tk = h * double(k);
        const MatrixXcd k1 = apply(tk, u);
        const MatrixXcd k2 = apply(tk + 0.5 * h, u + (0.5 * h) * k1);
        const MatrixXcd k3 = apply(tk + 0.5 * h, u + (0.5 * h) * k2);
        const MatrixXcd k4 = apply(tk + h, u + h * k3);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

}  // namespace su11::fock
