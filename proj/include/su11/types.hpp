#pragma once

#include <cmath>
#include <complex>
#include <variant>

#include "su11/errors.hpp"

namespace su11 {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Two-mode coherent preparation |zeta_a, zeta_b>.
struct CoherentState {
    cplx zeta_a{0.0, 0.0};
    cplx zeta_b{0.0, 0.0};
};

/// Two-mode number preparation |n_a, n_b>.
struct NumberState {
    int n_a = 0;
    int n_b = 0;
};

/// Uncorrelated thermal mixture with mean occupations nbar_a, nbar_b.
struct ThermalState {
    double nbar_a = 0.0;
    double nbar_b = 0.0;
};

using InitialState = std::variant<CoherentState, NumberState, ThermalState>;

inline void validate(const InitialState& state) {
    if (const auto* n = std::get_if<NumberState>(&state)) {
        if (n->n_a < 0 || n->n_b < 0) throw ConfigError("number state occupations must be nonnegative");
    } else if (const auto* th = std::get_if<ThermalState>(&state)) {
        if (th->nbar_a < 0.0 || th->nbar_b < 0.0) throw ConfigError("thermal occupations must be nonnegative");
    }
}

/// Detuned parametric amplifier parameters (hbar = 1, frequencies in
/// rad/time).  The pump frequency is eta = omega_a + omega_b + delta.
struct AmplifierConfig {
    double omega_a = 1.0;
    double omega_b = 1.0;
    cplx kappa{0.1, 0.0};
    double delta = 0.0;

    double eta() const { return omega_a + omega_b + delta; }

    /// Squared dynamical rate |kappa|^2 - (delta/2)^2; may be negative in
    /// the over-detuned regime.
    double rate_squared() const { return std::norm(kappa) - 0.25 * delta * delta; }

    /// The model assumes delta is a small deviation from resonance.
    bool detuning_out_of_regime() const {
        return std::abs(delta / (omega_a + omega_b)) >= 0.1;
    }

    void validate() const {
        if (!(omega_a > 0.0) || !(omega_b > 0.0)) throw ConfigError("mode frequencies must be positive");
        if (!std::isfinite(omega_a) || !std::isfinite(omega_b) || !std::isfinite(delta) ||
            !std::isfinite(kappa.real()) || !std::isfinite(kappa.imag()))
            throw ConfigError("amplifier parameters must be finite");
    }
};

}  // namespace su11
