#pragma once

// Bipartite and marginal Husimi functions for coherent and thermal inputs
// of the detuned amplifier, Wehrl entropy functionals (closed-form and
// Gauss-Hermite numeric routes), and the correlation functional.

#include <cmath>
#include <functional>
#include <optional>

#include "su11/amplifier.hpp"
#include "su11/phase_space.hpp"
#include "su11/quadrature.hpp"
#include "su11/types.hpp"

namespace su11 {

enum class Mode { A, B };

/// Gaussian data of the coherent-input Husimi function.  The gamma map is
/// the same pullback that propagates phase-space points; eps_a/eps_b are
/// the evolved coherent centers.
struct HusimiCoherentParams {
    cplx a_zero{1.0, 0.0};
    cplx a_plus{0.0, 0.0};
    cplx g_aa{1.0, 0.0}, g_ab{0.0, 0.0};  // gamma_a = g_aa a + g_ab conj(b)
    cplx g_bb{1.0, 0.0}, g_ba{0.0, 0.0};  // gamma_b = g_bb b + g_ba conj(a)
    cplx eps_a{0.0, 0.0}, eps_b{0.0, 0.0};
    cplx zeta_a{0.0, 0.0}, zeta_b{0.0, 0.0};

    double operator()(cplx alpha_a, cplx alpha_b) const {
        const cplx ga = g_aa * alpha_a + g_ab * std::conj(alpha_b) - zeta_a;
        const cplx gb = g_bb * alpha_b + g_ba * std::conj(alpha_a) - zeta_b;
        const double quad = std::norm(ga) + std::norm(gb) -
                            2.0 * (std::conj(a_plus) * ga * gb).real();
        return std::abs(a_zero) * std::exp(-quad);
    }

    double marginal(Mode mode, cplx alpha) const {
        const double w = std::abs(a_zero);
        const cplx eps = mode == Mode::A ? eps_a : eps_b;
        return w * std::exp(-w * std::norm(alpha - eps));
    }
};

inline HusimiCoherentParams husimi_coherent_params(const AmplifierConfig& cfg,
                                                   const CoherentState& state, double t) {
    const TMatrix tm = heisenberg_solution(cfg, t);
    const double z = cfg.rate_squared() * t * t;
    const auto [c, s] = radical_functions(cplx(z, 0.0));
    const cplx den = c + kI * (0.5 * cfg.delta * t) * s;
    HusimiCoherentParams hp;
    hp.a_zero = 1.0 / (den * den);
    hp.a_plus = kI * std::conj(cfg.kappa) * t * s / den;
    hp.g_aa = std::conj(tm.mu_a);
    hp.g_ab = -tm.nu_b;
    hp.g_bb = std::conj(tm.chi_b);
    hp.g_ba = -tm.eta_a;
    hp.zeta_a = state.zeta_a;
    hp.zeta_b = state.zeta_b;
    const PhasePoint eps = pushforward(tm, {state.zeta_a, state.zeta_b, Role::Z});
    hp.eps_a = eps.c_a;
    hp.eps_b = eps.c_b;
    return hp;
}

inline double husimi_coherent(const AmplifierConfig& cfg, const CoherentState& state, double t,
                              const PhasePoint& alpha) {
    if (alpha.role != Role::X) throw std::invalid_argument("husimi_coherent: X-role point required");
    return husimi_coherent_params(cfg, state, t)(alpha.c_a, alpha.c_b);
}

inline double husimi_marginal_coherent(const AmplifierConfig& cfg, const CoherentState& state,
                                       double t, Mode mode, cplx alpha_mode) {
    return husimi_coherent_params(cfg, state, t).marginal(mode, alpha_mode);
}

/// Gaussian data of the thermal-input Husimi function.
struct HusimiThermalParams {
    double ell_a = 1.0;
    double ell_b = 1.0;
    cplx ell_ab{0.0, 0.0};
    double g11 = 1.0, g10 = 1.0, g01 = 1.0;  // G(1,1), G(1,0), G(0,1)
    double nbar_a = 0.0, nbar_b = 0.0;
    double squeeze = 0.0;  // (|kappa|/phi)^2 sinh^2(phi t)

    /// G_{nbar_a,nbar_b}(x, y; t)
    double g_factor(double x, double y) const {
        return (nbar_a * x + 1.0) * (nbar_b * y + 1.0) + (nbar_a + nbar_b + 1.0) * squeeze;
    }

    double operator()(cplx alpha_a, cplx alpha_b) const {
        const double quad = ell_b * std::norm(alpha_a) + ell_a * std::norm(alpha_b) -
                            2.0 * (ell_ab * alpha_a * alpha_b).real();
        return std::exp(-quad) / g11;
    }

    double marginal(Mode mode, cplx alpha) const {
        const double g = mode == Mode::A ? g10 : g01;
        return std::exp(-std::norm(alpha) / g) / g;
    }

    void validate() const {
        if (!(ell_a > 0.0) || !(ell_b > 0.0) || !(ell_a * ell_b - std::norm(ell_ab) > 0.0))
            throw PositivityViolation("thermal Husimi quadratic form degenerate");
    }
};

inline HusimiThermalParams husimi_thermal_params(const AmplifierConfig& cfg,
                                                 const ThermalState& state, double t) {
    const double z = cfg.rate_squared() * t * t;
    const auto [c, s] = radical_functions(cplx(z, 0.0));
    HusimiThermalParams hp;
    hp.nbar_a = state.nbar_a;
    hp.nbar_b = state.nbar_b;
    hp.squeeze = std::norm(cfg.kappa) * t * t * (s * s).real();
    hp.g11 = hp.g_factor(1.0, 1.0);
    hp.g10 = hp.g_factor(1.0, 0.0);
    hp.g01 = hp.g_factor(0.0, 1.0);
    hp.ell_a = hp.g10 / hp.g11;
    hp.ell_b = hp.g01 / hp.g11;
    const cplx den_conj = c - kI * (0.5 * cfg.delta * t) * s;
    hp.ell_ab = kI * cfg.kappa * t * s * den_conj * (state.nbar_a + state.nbar_b + 1.0) *
                std::exp(kI * (cfg.eta() * t)) / hp.g11;
    hp.validate();
    return hp;
}

inline double husimi_thermal(const AmplifierConfig& cfg, const ThermalState& state, double t,
                             const PhasePoint& alpha) {
    if (alpha.role != Role::X) throw std::invalid_argument("husimi_thermal: X-role point required");
    return husimi_thermal_params(cfg, state, t)(alpha.c_a, alpha.c_b);
}

inline double husimi_marginal_thermal(const AmplifierConfig& cfg, const ThermalState& state,
                                      double t, Mode mode, cplx alpha_mode) {
    return husimi_thermal_params(cfg, state, t).marginal(mode, alpha_mode);
}

// ---------------------------------------------------------------------
// entropy functionals

/// Joint/partial/conditional Wehrl entropies (nats) and the correlation
/// functional.
struct EntropyReport {
    double joint = 2.0;
    double partial_a = 1.0;
    double partial_b = 1.0;
    double cond_a = 1.0;
    double cond_b = 1.0;
    double correlation = 0.0;
};

/// Correlation functional 2(1 - E/(E_A+E_B)).  Values outside [0,1] by
/// more than 1e-9 indicate an upstream entropy bug; smaller excursions
/// are clamped.
inline double correlation(double joint, double partial_a, double partial_b) {
    const double denom = partial_a + partial_b;
    if (!(denom > 0.0)) throw std::invalid_argument("correlation: partial entropies must sum > 0");
    const double c = 2.0 * (1.0 - joint / denom);
    if (c < -1e-9 || c > 1.0 + 1e-9) throw RangeViolation("correlation functional out of [0,1]");
    return std::min(1.0, std::max(0.0, c));
}

struct QuadratureSpec {
    int order = 40;
    bool certify = true;
    double cert_tol = 1e-6;
    std::optional<quad::GaussianFrame> frame;
};

/// Wehrl entropy -(1/pi^{d/2}) integral h ln h over R^d (d = 2 per mode),
/// by Gauss-Hermite after whitening with the Gaussian's covariance.
/// The evaluator must be strictly positive on the quadrature support;
/// 0 ln 0 is treated as 0.
inline double entropy_numeric(const std::function<double(const Eigen::VectorXd&)>& h, int dims,
                              const QuadratureSpec& spec = {}) {
    if (dims != 2 && dims != 4) throw std::invalid_argument("entropy_numeric: dims must be 2 or 4");
    quad::GaussianFrame frame =
        spec.frame ? *spec.frame
                   : quad::frame_from_quadratic(
                         [&](const Eigen::VectorXd& u) {
                             const double v = h(u);
                             if (!(v > 0.0))
                                 throw PositivityViolation("entropy_numeric: evaluator not positive");
                             return -std::log(v);
                         },
                         dims);
    auto integrand = [&](const Eigen::VectorXd& u) {
        const double v = h(u);
        return v > 0.0 ? v * std::log(v) : 0.0;
    };
    const double pi_pow = std::pow(M_PI, dims / 2);
    const double e1 = -quad::integrate_gaussian(integrand, frame, spec.order) / pi_pow;
    if (!spec.certify) return e1;
    const double e2 = -quad::integrate_gaussian(integrand, frame, 2 * spec.order) / pi_pow;
    if (std::abs(e2 - e1) > spec.cert_tol)
        throw QuadratureNotConverged("entropy_numeric: order doubling moved the result");
    return e2;
}

namespace detail {

inline EntropyReport fill_report(double joint, double ea, double eb) {
    EntropyReport r;
    r.joint = joint;
    r.partial_a = ea;
    r.partial_b = eb;
    r.cond_a = joint - ea;
    r.cond_b = joint - eb;
    r.correlation = correlation(joint, ea, eb);
    return r;
}

}  // namespace detail

/// Closed-form entropy report for coherent or thermal inputs.
inline EntropyReport entropy_closed(const AmplifierConfig& cfg, const InitialState& state,
                                    double t) {
    const double z = cfg.rate_squared() * t * t;
    const auto [c, s] = radical_functions(cplx(z, 0.0));
    const double squeeze = std::norm(cfg.kappa) * t * t * (s * s).real();
    if (std::holds_alternative<CoherentState>(state)) {
        const double growth = std::log(1.0 + squeeze);
        return detail::fill_report(2.0 + growth, 1.0 + growth, 1.0 + growth);
    }
    if (const auto* th = std::get_if<ThermalState>(&state)) {
        HusimiThermalParams hp;
        hp.nbar_a = th->nbar_a;
        hp.nbar_b = th->nbar_b;
        hp.squeeze = squeeze;
        return detail::fill_report(2.0 + std::log(hp.g_factor(1.0, 1.0)),
                                   1.0 + std::log(hp.g_factor(1.0, 0.0)),
                                   1.0 + std::log(hp.g_factor(0.0, 1.0)));
    }
    throw std::invalid_argument("entropy_closed: coherent or thermal input required");
}

// ---------------------------------------------------------------------
// numeric-route helpers

inline std::function<double(const Eigen::VectorXd&)> joint_evaluator(
    const std::function<double(cplx, cplx)>& h) {
    return [h](const Eigen::VectorXd& u) { return h(cplx(u(0), u(1)), cplx(u(2), u(3))); };
}

inline std::function<double(const Eigen::VectorXd&)> marginal_evaluator(
    const std::function<double(cplx)>& h) {
    return [h](const Eigen::VectorXd& u) { return h(cplx(u(0), u(1))); };
}

/// Entropy report evaluated entirely through quadrature of the pointwise
/// Husimi evaluators.
inline EntropyReport entropy_numeric_report(const AmplifierConfig& cfg, const InitialState& state,
                                            double t, const QuadratureSpec& spec = {}) {
    std::function<double(cplx, cplx)> joint;
    std::function<double(cplx)> marg_a, marg_b;
    if (const auto* coh = std::get_if<CoherentState>(&state)) {
        const HusimiCoherentParams hp = husimi_coherent_params(cfg, *coh, t);
        joint = [hp](cplx a, cplx b) { return hp(a, b); };
        marg_a = [hp](cplx a) { return hp.marginal(Mode::A, a); };
        marg_b = [hp](cplx b) { return hp.marginal(Mode::B, b); };
    } else if (const auto* th = std::get_if<ThermalState>(&state)) {
        const HusimiThermalParams hp = husimi_thermal_params(cfg, *th, t);
        joint = [hp](cplx a, cplx b) { return hp(a, b); };
        marg_a = [hp](cplx a) { return hp.marginal(Mode::A, a); };
        marg_b = [hp](cplx b) { return hp.marginal(Mode::B, b); };
    } else {
        throw std::invalid_argument("entropy_numeric_report: coherent or thermal input required");
    }
    const double joint_e = entropy_numeric(joint_evaluator(joint), 4, spec);
    const double ea = entropy_numeric(marginal_evaluator(marg_a), 2, spec);
    const double eb = entropy_numeric(marginal_evaluator(marg_b), 2, spec);
    return detail::fill_report(joint_e, ea, eb);
}

}  // namespace su11
