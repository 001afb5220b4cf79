#pragma once

// Run configuration, the verification-check registry, and the data-export
// commands behind the command-line tool.  Kept header-only and testable
// apart from argument parsing.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "su11/algebra.hpp"
#include "su11/amplifier.hpp"
#include "su11/fock.hpp"
#include "su11/phase_space.hpp"
#include "su11/types.hpp"
#include "su11/wehrl.hpp"

namespace su11::cli {

using json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };

struct WignerSlice {
    std::array<std::string, 2> axes = {"re_a", "im_a"};
    std::array<double, 2> min = {-3.0, -3.0};
    std::array<double, 2> max = {3.0, 3.0};
    std::array<int, 2> points = {41, 41};
    std::map<std::string, double> fixed = {{"re_b", 0.0}, {"im_b", 0.0}};
    double t = 0.0;
};

struct RunConfig {
    AmplifierConfig amplifier{1.0, 1.7, cplx(0.3, 0.1), 0.05};
    InitialState state = CoherentState{cplx(0.4, 0.0), cplx(-0.2, 0.3)};
    double t0 = 0.0;
    double t1 = 5.0;
    int steps = 11;
    int cutoff = 14;
    int gh_order = 40;
    std::uint64_t seed = 12345;
    std::map<std::string, double> tolerances;
    std::vector<std::string> checks;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    WignerSlice slice;

    void validate() const {
        amplifier.validate();
        su11::validate(state);
        if (t0 > t1) throw ConfigError("time grid requires t0 <= t1");
        if (steps < 1) throw ConfigError("time grid requires steps >= 1");
        if (cutoff < 2 || cutoff > 40) throw ConfigError("cutoff out of oracle limits [2, 40]");
        if (gh_order < 2 || gh_order > 80) throw ConfigError("gh_order out of range [2, 80]");
    }
};

// ---------------------------------------------------------------------
// config parsing

namespace detail {

inline cplx parse_cplx(const json& j, const char* what) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw ConfigError(std::string(what) + ": expected number or [re, im]");
}

inline InitialState parse_state(const json& j) {
    const std::string type = j.value("type", "");
    if (type == "coherent")
        return CoherentState{parse_cplx(j.value("zeta_a", json(0.0)), "zeta_a"),
                             parse_cplx(j.value("zeta_b", json(0.0)), "zeta_b")};
    if (type == "number") return NumberState{j.value("n_a", 0), j.value("n_b", 0)};
    if (type == "thermal") return ThermalState{j.value("nbar_a", 0.0), j.value("nbar_b", 0.0)};
    throw ConfigError("state.type must be coherent, number, or thermal");
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    RunConfig cfg;
    try {
        if (j.contains("amplifier")) {
            const json& a = j.at("amplifier");
            cfg.amplifier.omega_a = a.value("omega_a", cfg.amplifier.omega_a);
            cfg.amplifier.omega_b = a.value("omega_b", cfg.amplifier.omega_b);
            if (a.contains("kappa")) cfg.amplifier.kappa = detail::parse_cplx(a.at("kappa"), "kappa");
            cfg.amplifier.delta = a.value("delta", cfg.amplifier.delta);
        }
        if (j.contains("state")) cfg.state = detail::parse_state(j.at("state"));
        if (j.contains("time_grid")) {
            const json& t = j.at("time_grid");
            cfg.t0 = t.value("t0", cfg.t0);
            cfg.t1 = t.value("t1", cfg.t1);
            cfg.steps = t.value("steps", cfg.steps);
        }
        cfg.cutoff = j.value("cutoff", cfg.cutoff);
        cfg.gh_order = j.value("gh_order", cfg.gh_order);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("tolerances"))
            for (const auto& [k, v] : j.at("tolerances").items())
                cfg.tolerances[k] = v.get<double>();
        if (j.contains("checks"))
            for (const auto& c : j.at("checks")) cfg.checks.push_back(c.get<std::string>());
        if (j.contains("output")) {
            cfg.output_path = j.at("output").value("path", "");
            const std::string fmt = j.at("output").value("format", "csv");
            if (fmt == "csv") cfg.format = OutputFormat::Csv;
            else if (fmt == "json") cfg.format = OutputFormat::Json;
            else throw ConfigError("output.format must be csv or json");
        }
        if (j.contains("wigner_slice")) {
            const json& w = j.at("wigner_slice");
            WignerSlice s;
            if (w.contains("axes")) { s.axes[0] = w.at("axes").at(0); s.axes[1] = w.at("axes").at(1); }
            if (w.contains("min")) { s.min[0] = w.at("min").at(0); s.min[1] = w.at("min").at(1); }
            if (w.contains("max")) { s.max[0] = w.at("max").at(0); s.max[1] = w.at("max").at(1); }
            if (w.contains("points")) { s.points[0] = w.at("points").at(0); s.points[1] = w.at("points").at(1); }
            if (w.contains("fixed"))
                for (const auto& [k, v] : w.at("fixed").items()) s.fixed[k] = v.get<double>();
            s.t = w.value("t", 0.0);
            cfg.slice = s;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------
// verification checks

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;
};

namespace detail {

inline AlgebraParams draw_params(std::mt19937_64& rng, double radius) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    AlgebraParams p{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    const double scale = radius * std::pow(u(rng), 1.0 / 6.0) / p.norm();
    return scale * p;
}

inline double param_distance(const AlgebraParams& a, const AlgebraParams& b) {
    return std::sqrt(std::norm(a.omega_plus - b.omega_plus) + std::norm(a.omega_zero - b.omega_zero) +
                     std::norm(a.omega_minus - b.omega_minus));
}

inline AmplifierConfig draw_amplifier(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    AmplifierConfig cfg;
    cfg.omega_a = 0.5 + 1.5 * u(rng);
    cfg.omega_b = 0.5 + 1.5 * u(rng);
    cfg.kappa = std::polar(0.1 + 0.5 * u(rng), 2.0 * M_PI * u(rng));
    cfg.delta = (u(rng) - 0.5) * 0.12 * (cfg.omega_a + cfg.omega_b);
    return cfg;
}

using CheckFn = std::function<double(const RunConfig&, std::mt19937_64&)>;

struct Check {
    std::string name;
    double default_tol;
    CheckFn fn;
};

inline double check_radical_identity(const RunConfig&, std::mt19937_64&) {
    double worst = 0.0;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
            const cplx z(i, j * 0.97);
            if (std::abs(z) > 10.0) continue;
            const auto [c, s] = radical_functions(z);
            worst = std::max(worst, std::abs(c * c - z * s * s - 1.0));
        }
    return worst;
}

inline double check_associativity(const RunConfig&, std::mt19937_64& rng) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto p = draw_params(rng, 1.0), q = draw_params(rng, 1.0), r = draw_params(rng, 1.0);
        try {
            worst = std::max(worst, param_distance(compose(compose(p, q), r),
                                                   compose(p, compose(q, r))));
        } catch (const BranchAmbiguity&) {
        }
    }
    return worst;
}

inline double check_compose_routes(const RunConfig&, std::mt19937_64& rng) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto p = draw_params(rng, 1.0), q = draw_params(rng, 1.0);
        try {
            worst = std::max(worst, param_distance(compose(p, q), compose_via_factors(p, q)));
        } catch (const Error&) {
        }
    }
    return worst;
}

inline double check_unitary_closure(const RunConfig&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const UnitaryParams u1{cplx(u(rng), u(rng)) * 0.5, u(rng) * 0.7};
        const UnitaryParams u2{cplx(u(rng), u(rng)) * 0.5, u(rng) * 0.7};
        try {
            const AlgebraParams s = compose(u1.to_params(), u2.to_params());
            worst = std::max(worst, std::abs(s.omega_plus + std::conj(s.omega_minus)));
            worst = std::max(worst, std::abs(s.omega_zero.real()));
        } catch (const BranchAmbiguity&) {
        }
    }
    return worst;
}

inline double check_matrix_roundtrip(const RunConfig&, std::mt19937_64& rng) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto p = draw_params(rng, 0.999);
        worst = std::max(worst, param_distance(params_from_matrix(matrix_rep(p)), p));
    }
    return worst;
}

inline double check_decomposition_fock(const RunConfig& cfg, std::mt19937_64& rng) {
    double worst = 0.0;
    for (const auto kind : {fock::RepKind::OneModeBoson, fock::RepKind::TwoModeBoson}) {
        const fock::FockRep rep{kind, cfg.cutoff};
        rep.validate();
        for (int i = 0; i < 6; ++i) {
            const auto p = draw_params(rng, 0.5);
            const int levels = fock::default_interior_levels(p.norm(), cfg.cutoff);
            const auto idx = fock::interior_indices(rep, levels);
            const Eigen::MatrixXcd u = fock::gather(fock::exponentiate_params(p, rep).mat, idx);
            for (const auto ordering :
                 {decompose_normal(p), decompose_antinormal(p)}) {
                const Eigen::MatrixXcd f =
                    fock::gather(fock::realize_factors(ordering, rep).mat, idx);
                worst = std::max(worst, (f - u).norm() / u.norm());
            }
        }
    }
    return worst;
}

inline double check_constraint_residuals(const RunConfig&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const AmplifierConfig a = draw_amplifier(rng);
        for (int j = 0; j < 10; ++j) {
            const auto res = check_constraints(heisenberg_solution(a, 4.0 * u(rng)));
            for (const double r : res) worst = std::max(worst, r);
        }
    }
    return worst;
}

inline double check_inverse(const RunConfig&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        const AmplifierConfig a = draw_amplifier(rng);
        const TMatrix t = heisenberg_solution(a, 3.0 * u(rng));
        const Eigen::Matrix4cd prod = t.to_matrix() * invert(t).to_matrix();
        worst = std::max(worst, (prod - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
}

inline double check_factor_vs_propagator(const RunConfig& cfg, std::mt19937_64& rng) {
    const int cut = std::min(cfg.cutoff, 12);
    const fock::FockRep rep{fock::RepKind::TwoModeBoson, cut};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        AmplifierConfig a = draw_amplifier(rng);
        a.kappa *= 0.5;
        if (i == 2) a.delta = 2.5 * std::abs(a.kappa);  // over-detuned regime
        const double t = 1.0;
        const fock::OperatorMatrix up = fock::propagator(a, t, rep);
        const fock::OperatorMatrix uf = realize(factor_evolution(a, t), rep);
        const auto idx = fock::interior_indices(rep, cut / 2);
        const Eigen::MatrixXcd mp = fock::gather(up.mat, idx);
        const Eigen::MatrixXcd mf = fock::gather(uf.mat, idx);
        const cplx phase = (mf.adjoint() * mp).trace();
        const cplx lambda = phase / std::abs(phase);
        worst = std::max(worst, (mp - lambda * mf).norm() / mp.norm());
    }
    return worst;
}

inline double check_conservation(const RunConfig& cfg, std::mt19937_64& rng) {
    const AmplifierConfig a = draw_amplifier(rng);
    double worst = 0.0;
    const auto [na0, nb0] = mean_photon(a, 0.0, cfg.state);
    for (int i = 1; i <= 10; ++i) {
        const double t = 0.3 * i / std::abs(a.kappa) * 0.5;
        const auto [na, nb] = mean_photon(a, t, cfg.state);
        worst = std::max(worst, std::abs((na - nb) - (na0 - nb0)));
    }
    return worst;
}

inline double check_cauchy_schwarz(const RunConfig& cfg, std::mt19937_64& rng) {
    AmplifierConfig a = draw_amplifier(rng);
    a.kappa *= 0.4;
    double worst = 0.0;
    for (int n = 0; n <= 2; ++n) {
        const NumberState st{n, n};
        const double t = 0.5 / std::abs(a.kappa) * 0.5;
        const double nanb = intensity_correlation(a, t, st, cfg.cutoff);
        // <n_a^2> via the same evolved vector
        const fock::FockRep rep{fock::RepKind::TwoModeBoson, cfg.cutoff + 8};
        const fock::OperatorMatrix u = realize(factor_evolution(a, t), rep);
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(rep.dim());
        psi(rep.index(n, n)) = 1.0;
        const Eigen::VectorXcd w = u.mat * psi;
        double na2 = 0.0;
        for (int ia = 0; ia <= rep.cutoff; ++ia)
            for (int ib = 0; ib <= rep.cutoff; ++ib)
                na2 += double(ia) * double(ia) * std::norm(w(rep.index(ia, ib)));
        worst = std::max(worst, std::abs(nanb - na2) / std::max(1.0, na2));
    }
    return worst;
}

inline double check_det_t(const RunConfig&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const TMatrix t = heisenberg_solution(draw_amplifier(rng), 3.0 * u(rng));
        worst = std::max(worst, std::abs(std::abs(t.to_matrix().determinant()) - 1.0));
    }
    return worst;
}

inline double check_pullback_roundtrip(const RunConfig&, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const TMatrix t = heisenberg_solution(draw_amplifier(rng), 2.0 * u(rng));
        const PhasePoint x{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), Role::X};
        const PhasePoint back = pushforward(t, pullback(t, x));
        worst = std::max(worst, std::abs(back.c_a - x.c_a) + std::abs(back.c_b - x.c_b));
    }
    return worst;
}

inline double check_characteristic_oracle(const RunConfig& cfg, std::mt19937_64& rng) {
    const int cut = std::min(cfg.cutoff, 12);
    const fock::FockRep rep{fock::RepKind::TwoModeBoson, cut};
    AmplifierConfig a = draw_amplifier(rng);
    a.kappa *= 0.5 / std::abs(a.kappa) * 0.6;
    const double t = 0.9;
    const fock::OperatorMatrix u = fock::propagator(a, t, rep);
    std::normal_distribution<double> g;
    double worst = 0.0;
    const std::vector<InitialState> states = {CoherentState{cplx(0.3, -0.2), cplx(-0.1, 0.25)},
                                              NumberState{1, 0},
                                              ThermalState{0.4, 0.7}};
    for (const auto& st : states) {
        const Eigen::MatrixXcd rho0 = fock::density_matrix(st, rep);
        const Eigen::MatrixXcd rho_t = u.mat * rho0 * u.mat.adjoint();
        for (int i = 0; i < 8; ++i) {
            const PhasePoint gp{0.45 * cplx(g(rng), g(rng)), 0.45 * cplx(g(rng), g(rng)), Role::G};
            const cplx closed = characteristic_t(st, a, t, gp);
            const Eigen::MatrixXcd d = fock::displacement(gp.c_a, gp.c_b, rep);
            const cplx oracle = fock::trace_product(d, rho_t);
            worst = std::max(worst, std::abs(closed - oracle));
        }
    }
    return worst;
}

inline double check_moments_oracle(const RunConfig& cfg, std::mt19937_64& rng) {
    const int cut = std::min(cfg.cutoff, 12);
    const fock::FockRep rep{fock::RepKind::TwoModeBoson, cut};
    AmplifierConfig a = draw_amplifier(rng);
    a.kappa *= 0.4 / std::abs(a.kappa);
    const double t = 0.8;
    const InitialState st = ThermalState{0.3, 0.5};
    const fock::OperatorMatrix u = realize(factor_evolution(a, t), rep);
    const Eigen::MatrixXcd rho_t = u.mat * fock::density_matrix(st, rep) * u.mat.adjoint();
    const auto [am, adm] = fock::ladder_matrices(cut);
    const int d = cut + 1;
    auto lift = [&](const Eigen::MatrixXcd& single, bool mode_a) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d * d, d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (mode_a)
                    out.block(i * d, j * d, d, d) = single(i, j) * Eigen::MatrixXcd::Identity(d, d);
                else
                    out.block(i * d, i * d, d, d) = single;
        return out;
    };
    const Eigen::MatrixXcd a2 = lift(am, true), ad2 = lift(adm, true);
    const Eigen::MatrixXcd b2 = lift(am, false), bd2 = lift(adm, false);
    double worst = 0.0;
    const std::array<std::array<int, 4>, 4> orders = {{{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}, {1, 1, 1, 1}}};
    for (const auto& o : orders) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(d * d, d * d);
        for (int i = 0; i < o[0]; ++i) op = op * ad2;
        for (int i = 0; i < o[1]; ++i) op = op * a2;
        for (int i = 0; i < o[2]; ++i) op = op * bd2;
        for (int i = 0; i < o[3]; ++i) op = op * b2;
        const cplx oracle = fock::trace_product(rho_t, op);
        const cplx analytic = moment(st, a, t, o[0], o[1], o[2], o[3]);
        worst = std::max(worst, std::abs(analytic - oracle) / (1.0 + std::abs(oracle)));
    }
    (void)rng;
    return worst;
}

inline double check_husimi_oracle(const RunConfig& cfg, std::mt19937_64& rng) {
    const int cut = std::min(cfg.cutoff, 12);
    const fock::FockRep rep{fock::RepKind::TwoModeBoson, cut};
    AmplifierConfig a = draw_amplifier(rng);
    a.kappa *= 0.5 / std::abs(a.kappa) * 0.5;
    const double t = 1.1;
    const fock::OperatorMatrix u = realize(factor_evolution(a, t), rep);
    std::normal_distribution<double> g;
    double worst = 0.0;
    const CoherentState coh{cplx(0.3, 0.1), cplx(-0.2, 0.2)};
    const ThermalState th{0.35, 0.6};
    const Eigen::MatrixXcd rho_coh = u.mat * fock::density_matrix(coh, rep) * u.mat.adjoint();
    const Eigen::MatrixXcd rho_th = u.mat * fock::density_matrix(th, rep) * u.mat.adjoint();
    for (int i = 0; i < 8; ++i) {
        const cplx aa = 0.5 * cplx(g(rng), g(rng));
        const cplx ab = 0.5 * cplx(g(rng), g(rng));
        const Eigen::VectorXcd va = fock::coherent_vector(aa, cut);
        const Eigen::VectorXcd vb = fock::coherent_vector(ab, cut);
        Eigen::VectorXcd v(rep.dim());
        for (int ia = 0; ia <= cut; ++ia)
            for (int ib = 0; ib <= cut; ++ib) v(rep.index(ia, ib)) = va(ia) * vb(ib);
        const double orac_coh = (v.adjoint() * rho_coh * v)(0).real();
        const double orac_th = (v.adjoint() * rho_th * v)(0).real();
        worst = std::max(worst, std::abs(husimi_coherent(a, coh, t, {aa, ab, Role::X}) - orac_coh));
        worst = std::max(worst, std::abs(husimi_thermal(a, th, t, {aa, ab, Role::X}) - orac_th));
    }
    return worst;
}

inline double check_closed_vs_numeric(const RunConfig& cfg, std::mt19937_64& rng) {
    double worst = 0.0;
    QuadratureSpec spec;
    spec.order = cfg.gh_order;
    spec.certify = false;
    for (int i = 0; i < 3; ++i) {
        const AmplifierConfig a = draw_amplifier(rng);
        const double t = 0.4 + 0.5 * i;
        for (const InitialState st :
             {InitialState(CoherentState{cplx(0.3, 0.0), cplx(0.0, -0.4)}),
              InitialState(ThermalState{0.5, 1.0})}) {
            const EntropyReport closed = entropy_closed(a, st, t);
            const EntropyReport numeric = entropy_numeric_report(a, st, t, spec);
            worst = std::max({worst, std::abs(closed.joint - numeric.joint),
                              std::abs(closed.partial_a - numeric.partial_a),
                              std::abs(closed.partial_b - numeric.partial_b)});
        }
    }
    return worst;
}

inline double check_inequalities(const RunConfig&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const AmplifierConfig a = draw_amplifier(rng);
        const double t = 3.0 * u(rng);
        const InitialState st = (i % 2 == 0)
                                    ? InitialState(CoherentState{cplx(u(rng), u(rng)), cplx(u(rng), -u(rng))})
                                    : InitialState(ThermalState{1.5 * u(rng), 1.5 * u(rng)});
        const EntropyReport r = entropy_closed(a, st, t);
        worst = std::max(worst, std::abs(r.partial_a - r.partial_b) - r.joint);
        worst = std::max(worst, r.joint - (r.partial_a + r.partial_b));
        worst = std::max(worst, std::abs((r.cond_a + r.partial_a) - (r.cond_b + r.partial_b)));
        worst = std::max(worst, r.cond_a - r.partial_b);
        worst = std::max(worst, r.cond_b - r.partial_a);
        worst = std::max(worst, -r.correlation);
        worst = std::max(worst, r.correlation - 1.0);
    }
    return worst;
}

inline double check_correlation_identity(const RunConfig&, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        const AmplifierConfig a = draw_amplifier(rng);
        const double t = 4.0 * u(rng);
        const EntropyReport r = entropy_closed(a, CoherentState{}, t);
        const double z = a.rate_squared() * t * t;
        const auto [c, s] = radical_functions(cplx(z, 0.0));
        const double x = std::log(1.0 + std::norm(a.kappa) * t * t * (s * s).real());
        worst = std::max(worst, std::abs(r.correlation - x / (1.0 + x)));
    }
    return worst;
}

inline const std::vector<Check>& registry() {
    static const std::vector<Check> checks = {
        {"algebra.radical_identity", 1e-12, check_radical_identity},
        {"algebra.associativity", 1e-9, check_associativity},
        {"algebra.compose_routes", 1e-8, check_compose_routes},
        {"algebra.unitary_closure", 1e-10, check_unitary_closure},
        {"algebra.matrix_roundtrip", 1e-10, check_matrix_roundtrip},
        {"algebra.decomposition_fock", 1e-8, check_decomposition_fock},
        {"amplifier.constraints", 1e-12, check_constraint_residuals},
        {"amplifier.inverse", 1e-10, check_inverse},
        {"amplifier.factor_vs_propagator", 1e-6, check_factor_vs_propagator},
        {"amplifier.conservation", 1e-8, check_conservation},
        {"amplifier.cauchy_schwarz", 1e-8, check_cauchy_schwarz},
        {"phase_space.det_t", 1e-10, check_det_t},
        {"phase_space.pullback_roundtrip", 1e-10, check_pullback_roundtrip},
        {"phase_space.characteristic_oracle", 1e-5, check_characteristic_oracle},
        {"phase_space.moments_oracle", 1e-4, check_moments_oracle},
        {"wehrl.husimi_oracle", 1e-6, check_husimi_oracle},
        {"wehrl.closed_vs_numeric", 1e-6, check_closed_vs_numeric},
        {"wehrl.inequalities", 1e-9, check_inequalities},
        {"wehrl.correlation_identity", 1e-12, check_correlation_identity},
    };
    return checks;
}

}  // namespace detail

inline std::vector<CheckResult> run_verify(const RunConfig& cfg) {
    cfg.validate();
    std::vector<CheckResult> results;
    for (const auto& check : detail::registry()) {
        if (!cfg.checks.empty()) {
            const bool wanted = std::any_of(cfg.checks.begin(), cfg.checks.end(),
                                            [&](const std::string& f) {
                                                return check.name.rfind(f, 0) == 0;
                                            });
            if (!wanted) continue;
        }
        CheckResult r;
        r.name = check.name;
        const auto it = cfg.tolerances.find(check.name);
        r.tol = it != cfg.tolerances.end() ? it->second : check.default_tol;
        std::mt19937_64 rng(cfg.seed ^ std::hash<std::string>{}(check.name));
        try {
            r.residual = check.fn(cfg, rng);
            r.pass = r.residual <= r.tol;
        } catch (const Error& e) {
            r.residual = std::numeric_limits<double>::infinity();
            r.pass = false;
            r.note = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

// ---------------------------------------------------------------------
// data export

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct SweepRow {
    double t, e_joint, e_a, e_b, cond_a, cond_b, c_closed, c_numeric;
};

inline std::vector<SweepRow> sweep_rows(const RunConfig& cfg) {
    cfg.validate();
    if (std::holds_alternative<NumberState>(cfg.state))
        throw ConfigError("sweep requires a coherent or thermal state");
    std::vector<SweepRow> rows(cfg.steps);
    QuadratureSpec spec;
    spec.order = cfg.gh_order;
    spec.certify = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < cfg.steps; ++i) {
        const double t = cfg.steps == 1
                             ? cfg.t0
                             : cfg.t0 + (cfg.t1 - cfg.t0) * double(i) / double(cfg.steps - 1);
        const EntropyReport closed = entropy_closed(cfg.amplifier, cfg.state, t);
        const EntropyReport numeric = entropy_numeric_report(cfg.amplifier, cfg.state, t, spec);
        rows[i] = {t,        closed.joint,  closed.partial_a,   closed.partial_b,
                   closed.cond_a, closed.cond_b, closed.correlation, numeric.correlation};
    }
    return rows;
}

inline std::string render_sweep(const std::vector<SweepRow>& rows, OutputFormat fmt) {
    if (fmt == OutputFormat::Csv) {
        std::ostringstream out;
        out << "t,E_joint,E_A,E_B,cond_A,cond_B,C_closed,C_numeric\n";
        for (const auto& r : rows)
            out << format_double(r.t) << ',' << format_double(r.e_joint) << ','
                << format_double(r.e_a) << ',' << format_double(r.e_b) << ','
                << format_double(r.cond_a) << ',' << format_double(r.cond_b) << ','
                << format_double(r.c_closed) << ',' << format_double(r.c_numeric) << '\n';
        return out.str();
    }
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back(json{{"t", r.t},
                           {"E_joint", r.e_joint},
                           {"E_A", r.e_a},
                           {"E_B", r.e_b},
                           {"cond_A", r.cond_a},
                           {"cond_B", r.cond_b},
                           {"C_closed", r.c_closed},
                           {"C_numeric", r.c_numeric}});
    return arr.dump(2) + "\n";
}

struct WignerRow {
    double re_a, im_a, re_b, im_b, w;
};

inline std::vector<WignerRow> wigner_grid_rows(const RunConfig& cfg) {
    cfg.validate();
    const WignerSlice& s = cfg.slice;
    const std::array<std::string, 4> names = {"re_a", "im_a", "re_b", "im_b"};
    std::array<double, 4> coord{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        const auto it = s.fixed.find(names[i]);
        if (it != s.fixed.end()) coord[i] = it->second;
    }
    std::array<int, 2> axis_index;
    for (int a = 0; a < 2; ++a) {
        const auto it = std::find(names.begin(), names.end(), s.axes[a]);
        if (it == names.end()) throw ConfigError("wigner slice axis must be one of re_a, im_a, re_b, im_b");
        axis_index[a] = int(it - names.begin());
    }
    if (axis_index[0] == axis_index[1]) throw ConfigError("wigner slice axes must differ");
    if (s.points[0] < 1 || s.points[1] < 1) throw ConfigError("wigner slice needs >= 1 point per axis");
    std::vector<WignerRow> rows;
    rows.reserve(size_t(s.points[0]) * size_t(s.points[1]));
    for (int i = 0; i < s.points[0]; ++i) {
        for (int j = 0; j < s.points[1]; ++j) {
            auto c = coord;
            c[axis_index[0]] = s.points[0] == 1 ? s.min[0]
                                                : s.min[0] + (s.max[0] - s.min[0]) * double(i) /
                                                                 double(s.points[0] - 1);
            c[axis_index[1]] = s.points[1] == 1 ? s.min[1]
                                                : s.min[1] + (s.max[1] - s.min[1]) * double(j) /
                                                                 double(s.points[1] - 1);
            const PhasePoint x{cplx(c[0], c[1]), cplx(c[2], c[3]), Role::X};
            rows.push_back({c[0], c[1], c[2], c[3], wigner_t(cfg.state, cfg.amplifier, s.t, x)});
        }
    }
    return rows;
}

inline std::string render_wigner(const std::vector<WignerRow>& rows, OutputFormat fmt) {
    if (fmt == OutputFormat::Csv) {
        std::ostringstream out;
        out << "re_a,im_a,re_b,im_b,w\n";
        for (const auto& r : rows)
            out << format_double(r.re_a) << ',' << format_double(r.im_a) << ','
                << format_double(r.re_b) << ',' << format_double(r.im_b) << ','
                << format_double(r.w) << '\n';
        return out.str();
    }
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back(json{{"re_a", r.re_a}, {"im_a", r.im_a}, {"re_b", r.re_b},
                           {"im_b", r.im_b}, {"w", r.w}});
    return arr.dump(2) + "\n";
}

/// Parse one AlgebraParams from {"omega_plus": [..], "omega_zero": [..],
/// "omega_minus": [..]}.
inline AlgebraParams parse_params(const json& j) {
    AlgebraParams p;
    p.omega_plus = detail::parse_cplx(j.at("omega_plus"), "omega_plus");
    p.omega_zero = detail::parse_cplx(j.at("omega_zero"), "omega_zero");
    p.omega_minus = detail::parse_cplx(j.at("omega_minus"), "omega_minus");
    return p;
}

}  // namespace su11::cli
