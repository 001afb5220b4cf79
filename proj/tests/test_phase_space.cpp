#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "su11/fock.hpp"
#include "su11/phase_space.hpp"
#include "su11/quadrature.hpp"

using namespace su11;
using fock::FockRep;
using fock::RepKind;
using Eigen::MatrixXcd;

namespace {

std::mt19937_64 rng(777);

cplx rand_cplx(double scale) {
    std::normal_distribution<double> g;
    return scale * cplx(g(rng), g(rng));
}

// exact binomial-sum Laguerre oracle
double laguerre_sum_oracle(int n, double x) {
    double acc = 0.0, binom = 1.0;
    double xpow = 1.0, fact = 1.0;
    for (int k = 0; k <= n; ++k) {
        acc += binom * ((k % 2 == 0) ? 1.0 : -1.0) * xpow / fact;
        binom = binom * double(n - k) / double(k + 1);
        xpow *= x;
        fact *= double(k + 1);
    }
    return acc;
}

const AmplifierConfig kCfg{1.0, 1.7, cplx(0.28, 0.12), 0.04};

}  // namespace

TEST_CASE("laguerre polynomials") {
    std::uniform_real_distribution<double> u(0.0, 8.0);
    REQUIRE(laguerre(0, 3.7) == 1.0);
    REQUIRE(std::abs(laguerre(1, 2.2) - (1.0 - 2.2)) < 1e-15);
    REQUIRE(std::abs(laguerre(5, 2.5) - laguerre_sum_oracle(5, 2.5)) < 1e-12);
    for (int i = 0; i < 40; ++i) {
        const double x = u(rng);
        const int n = int(u(rng));
        REQUIRE(std::abs(laguerre(n, x) - laguerre_sum_oracle(n, x)) < 1e-11);
    }
}

TEST_CASE("characteristic function at t = 0") {
    SECTION("normalization at the origin") {
        const PhasePoint origin{0.0, 0.0, Role::Y};
        REQUIRE(characteristic_t0(CoherentState{cplx(0.3, 1.0), cplx(-0.2, 0.0)}, origin) == 1.0);
        REQUIRE(characteristic_t0(NumberState{3, 2}, origin) == 1.0);
        REQUIRE(characteristic_t0(ThermalState{0.6, 1.4}, origin) == 1.0);
    }
    SECTION("vacuum coincidences across families") {
        for (int i = 0; i < 20; ++i) {
            const PhasePoint y{rand_cplx(0.8), rand_cplx(0.8), Role::Y};
            const cplx coh = characteristic_t0(CoherentState{}, y);
            REQUIRE(std::abs(characteristic_t0(NumberState{0, 0}, y) - coh) < 1e-15);
            REQUIRE(std::abs(characteristic_t0(ThermalState{0.0, 0.0}, y) - coh) < 1e-15);
        }
    }
    SECTION("product states factorize") {
        for (const InitialState st : {InitialState(CoherentState{cplx(0.4, -0.1), cplx(0.2, 0.5)}),
                                      InitialState(NumberState{2, 1}),
                                      InitialState(ThermalState{0.5, 1.1})}) {
            for (int i = 0; i < 10; ++i) {
                const cplx ba = rand_cplx(0.7), bb = rand_cplx(0.7);
                const cplx joint = characteristic_t0(st, {ba, bb, Role::Y});
                const cplx fa = characteristic_t0(st, {ba, 0.0, Role::Y});
                const cplx fb = characteristic_t0(st, {0.0, bb, Role::Y});
                REQUIRE(std::abs(joint - fa * fb) < 1e-14);
            }
        }
    }
}

TEST_CASE("wigner function at t = 0") {
    SECTION("coherent peak value") {
        const CoherentState st{cplx(0.7, -0.4), cplx(-0.3, 0.6)};
        REQUIRE(std::abs(wigner_t0(st, {st.zeta_a, st.zeta_b, Role::Z}) - 4.0) < 1e-14);
    }
    SECTION("single-photon negativity at the origin") {
        REQUIRE(std::abs(wigner_t0(NumberState{1, 0}, {0.0, 0.0, Role::Z}) + 4.0) < 1e-14);
    }
    SECTION("thermal origin value") {
        const double nbar = 0.8;
        REQUIRE(std::abs(wigner_t0(ThermalState{nbar, nbar}, {0.0, 0.0, Role::Z}) -
                         4.0 / ((1.0 + 2.0 * nbar) * (1.0 + 2.0 * nbar))) < 1e-14);
    }
    SECTION("product states factorize") {
        const NumberState st{1, 2};
        const double w00 = wigner_t0(st, {0.0, 0.0, Role::Z});
        for (int i = 0; i < 10; ++i) {
            const cplx ga = rand_cplx(0.6), gb = rand_cplx(0.6);
            const double joint = wigner_t0(st, {ga, gb, Role::Z});
            const double fa = wigner_t0(st, {ga, 0.0, Role::Z});
            const double fb = wigner_t0(st, {0.0, gb, Role::Z});
            REQUIRE(std::abs(joint * w00 - fa * fb) < 1e-12);
        }
    }
}

TEST_CASE("pullback and pushforward") {
    SECTION("identity matrix leaves points unchanged") {
        const PhasePoint x{cplx(0.4, 0.2), cplx(-0.7, 0.1), Role::X};
        const PhasePoint z = pullback(TMatrix::identity(), x);
        REQUIRE(z.role == Role::Z);
        REQUIRE(std::abs(z.c_a - x.c_a) < 1e-15);
        REQUIRE(std::abs(z.c_b - x.c_b) < 1e-15);
    }
    SECTION("resonant real-coupling map at alpha_b = 0") {
        const AmplifierConfig cfg{1.3, 0.9, cplx(0.5, 0.0), 0.0};
        const double t = 1.1;
        const cplx alpha_a(0.37, -0.22);
        const PhasePoint z = pullback(heisenberg_solution(cfg, t), {alpha_a, 0.0, Role::X});
        const cplx expect = std::exp(kI * (cfg.omega_a * t)) * std::cosh(0.5 * t) * alpha_a;
        REQUIRE(std::abs(z.c_a - expect) < 1e-13);
        const cplx expect_b = kI * std::exp(-kI * (cfg.omega_a * t)) * std::sinh(0.5 * t) *
                              std::conj(alpha_a);
        REQUIRE(std::abs(z.c_b - expect_b) < 1e-13);
    }
    SECTION("round trip") {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const TMatrix t = heisenberg_solution(kCfg, 2.5 * u(rng));
            const PhasePoint x{rand_cplx(1.0), rand_cplx(1.0), Role::X};
            const PhasePoint back = pushforward(t, pullback(t, x));
            REQUIRE(back.role == Role::X);
            REQUIRE(std::abs(back.c_a - x.c_a) + std::abs(back.c_b - x.c_b) < 1e-10);
        }
    }
    SECTION("roles are enforced") {
        REQUIRE_THROWS_AS(pullback(TMatrix::identity(), PhasePoint{0.0, 0.0, Role::Z}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(characteristic_t0(CoherentState{}, PhasePoint{0.0, 0.0, Role::G}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(wigner_t0(CoherentState{}, PhasePoint{0.0, 0.0, Role::X}),
                          std::invalid_argument);
    }
    SECTION("corrupted evolution matrices are rejected") {
        TMatrix t = heisenberg_solution(kCfg, 1.0);
        t.mu_a *= 1.2;
        REQUIRE_THROWS_AS(pullback(t, PhasePoint{0.1, 0.2, Role::X}), SingularTMatrix);
    }
    SECTION("the determinant has unit modulus") {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 30; ++i) {
            const TMatrix t = heisenberg_solution(kCfg, 3.0 * u(rng));
            REQUIRE(std::abs(std::abs(t.to_matrix().determinant()) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("wigner propagation") {
    SECTION("t = 0 reduces to the initial function") {
        const InitialState st = NumberState{1, 1};
        for (int i = 0; i < 10; ++i) {
            const PhasePoint x{rand_cplx(0.8), rand_cplx(0.8), Role::X};
            const PhasePoint z{x.c_a, x.c_b, Role::Z};
            REQUIRE(std::abs(wigner_t(st, kCfg, 0.0, x) - wigner_t0(st, z)) < 1e-14);
        }
    }
    SECTION("normalization is preserved under evolution") {
        const double t = 0.9;
        for (const InitialState st : {InitialState(CoherentState{cplx(0.4, 0.3), cplx(0.0, -0.2)}),
                                      InitialState(NumberState{1, 0})}) {
            // whiten with the Gaussian factor of the evolved function
            const TMatrix tm = heisenberg_solution(kCfg, t);
            auto gauss_exponent = [&](const Eigen::VectorXd& u) {
                const PhasePoint z =
                    pullback(tm, {cplx(u(0), u(1)), cplx(u(2), u(3)), Role::X});
                cplx za = z.c_a, zb = z.c_b;
                if (const auto* c = std::get_if<CoherentState>(&st)) {
                    za -= c->zeta_a;
                    zb -= c->zeta_b;
                }
                return 2.0 * (std::norm(za) + std::norm(zb));
            };
            const auto frame = quad::frame_from_quadratic(gauss_exponent, 4);
            auto f = [&](const Eigen::VectorXd& u) {
                return wigner_t(st, kCfg, t, {cplx(u(0), u(1)), cplx(u(2), u(3)), Role::X});
            };
            const double total =
                quad::integrate_gaussian(f, frame, 24) / (M_PI * M_PI);
            REQUIRE(std::abs(total - 1.0) < 1e-6);
        }
    }
    SECTION("matches the displaced-parity oracle") {
        const int cut = 18;
        const FockRep rep{RepKind::TwoModeBoson, cut};
        const double t = 1.0;
        const auto u = realize(factor_evolution(kCfg, t), rep);
        MatrixXcd parity = MatrixXcd::Zero(rep.dim(), rep.dim());
        for (int na = 0; na <= cut; ++na)
            for (int nb = 0; nb <= cut; ++nb)
                parity(rep.index(na, nb), rep.index(na, nb)) = ((na + nb) % 2 == 0) ? 1.0 : -1.0;
        for (const InitialState st : {InitialState(CoherentState{cplx(0.2, 0.1), cplx(-0.15, 0.1)}),
                                      InitialState(NumberState{1, 0}),
                                      InitialState(ThermalState{0.3, 0.5})}) {
            const MatrixXcd rho_t = u.mat * fock::density_matrix(st, rep) * u.mat.adjoint();
            for (int i = 0; i < 6; ++i) {
                const PhasePoint x{rand_cplx(0.4), rand_cplx(0.4), Role::X};
                const MatrixXcd d = fock::displacement(x.c_a, x.c_b, rep);
                const MatrixXcd displaced = d * parity * d.adjoint();
                const double oracle = 4.0 * fock::trace_product(displaced, rho_t).real();
                REQUIRE(std::abs(wigner_t(st, kCfg, t, x) - oracle) < 1e-5);
            }
        }
    }
}

TEST_CASE("characteristic propagation") {
    SECTION("origin stays normalized for all t") {
        for (double t : {0.0, 0.4, 1.3, 2.6})
            REQUIRE(std::abs(characteristic_t(ThermalState{0.4, 0.2}, kCfg, t,
                                              {0.0, 0.0, Role::G}) - 1.0) < 1e-14);
    }
    SECTION("t = 0 reduces to the initial function") {
        const InitialState st = CoherentState{cplx(0.5, 0.1), cplx(-0.2, -0.3)};
        for (int i = 0; i < 10; ++i) {
            const PhasePoint g{rand_cplx(0.7), rand_cplx(0.7), Role::G};
            REQUIRE(std::abs(characteristic_t(st, kCfg, 0.0, g) -
                             characteristic_t0(st, {g.c_a, g.c_b, Role::Y})) < 1e-14);
        }
    }
    SECTION("matches the displacement-trace oracle") {
        const int cut = 18;
        const FockRep rep{RepKind::TwoModeBoson, cut};
        const double t = 0.9;
        const auto u = fock::propagator(kCfg, t, rep);
        for (const InitialState st : {InitialState(CoherentState{cplx(0.3, -0.2), cplx(0.1, 0.25)}),
                                      InitialState(NumberState{1, 1}),
                                      InitialState(ThermalState{0.4, 0.7})}) {
            const MatrixXcd rho_t = u.mat * fock::density_matrix(st, rep) * u.mat.adjoint();
            for (int i = 0; i < 6; ++i) {
                const PhasePoint g{rand_cplx(0.45), rand_cplx(0.45), Role::G};
                const MatrixXcd d = fock::displacement(g.c_a, g.c_b, rep);
                const cplx oracle = fock::trace_product(d, rho_t);
                REQUIRE(std::abs(characteristic_t(st, kCfg, t, g) - oracle) < 1e-6);
            }
        }
    }
}

TEST_CASE("normally ordered moments") {
    SECTION("zeroth moment is one") {
        REQUIRE(moment(ThermalState{0.4, 0.2}, kCfg, 1.1, 0, 0, 0, 0) == cplx(1.0, 0.0));
    }
    SECTION("vacuum photon number at resonance") {
        const AmplifierConfig cfg{1.0, 1.4, cplx(0.5, 0.0), 0.0};
        for (double t : {0.3, 0.8}) {
            const cplx m = moment(CoherentState{}, cfg, t, 1, 1, 0, 0);
            const double expect = std::sinh(0.5 * t) * std::sinh(0.5 * t);
            REQUIRE(std::abs(m - expect) < 1e-6);
            const auto [na, nb] = mean_photon(cfg, t, CoherentState{});
            REQUIRE(std::abs(m.real() - na) < 1e-6);
        }
    }
    SECTION("fourth-order moments match the Fock oracle") {
        const int cut = 20;
        const FockRep rep{RepKind::TwoModeBoson, cut};
        const double t = 0.8;
        const auto u = realize(factor_evolution(kCfg, t), rep);
        const int d = cut + 1;
        const auto [am, adm] = fock::ladder_matrices(cut);
        auto lift_a = [&](const MatrixXcd& s) {
            MatrixXcd out = MatrixXcd::Zero(d * d, d * d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    out.block(i * d, j * d, d, d) = s(i, j) * MatrixXcd::Identity(d, d);
            return out;
        };
        auto lift_b = [&](const MatrixXcd& s) {
            MatrixXcd out = MatrixXcd::Zero(d * d, d * d);
            for (int i = 0; i < d; ++i) out.block(i * d, i * d, d, d) = s;
            return out;
        };
        const MatrixXcd a2 = lift_a(am), ad2 = lift_a(adm), b2 = lift_b(am), bd2 = lift_b(adm);
        for (const InitialState st : {InitialState(CoherentState{}),
                                      InitialState(ThermalState{0.4, 0.6})}) {
            const MatrixXcd rho_t = u.mat * fock::density_matrix(st, rep) * u.mat.adjoint();
            const std::array<std::array<int, 4>, 6> orders = {
                {{1, 1, 0, 0}, {1, 0, 0, 1}, {2, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 0, 0}, {2, 0, 0, 2}}};
            for (const auto& o : orders) {
                MatrixXcd op = MatrixXcd::Identity(d * d, d * d);
                for (int i = 0; i < o[0]; ++i) op = op * ad2;
                for (int i = 0; i < o[1]; ++i) op = op * a2;
                for (int i = 0; i < o[2]; ++i) op = op * bd2;
                for (int i = 0; i < o[3]; ++i) op = op * b2;
                const cplx oracle = fock::trace_product(rho_t, op);
                const cplx analytic = moment(st, kCfg, t, o[0], o[1], o[2], o[3]);
                REQUIRE(std::abs(analytic - oracle) < 1e-4 * (1.0 + std::abs(oracle)));
            }
        }
    }
    SECTION("sixth-order moment stays usable") {
        const AmplifierConfig cfg{1.0, 1.4, cplx(0.5, 0.0), 0.0};
        const double t = 0.5;
        // <a^dag^3 a^3> of a two-mode squeezed vacuum: 3! nbar^3 with
        // nbar = sinh^2(|kappa| t)  (thermal marginal statistics)
        const double nbar = std::sinh(0.5 * t) * std::sinh(0.5 * t);
        const cplx m = moment(CoherentState{}, cfg, t, 3, 3, 0, 0);
        REQUIRE(std::abs(m - 6.0 * nbar * nbar * nbar) < 1e-2 * (1.0 + 6.0 * nbar * nbar * nbar));
    }
    SECTION("unstable differentiation is detected") {
        MomentOptions opts;
        opts.richardson_tol = 1e-14;
        REQUIRE_THROWS_AS(moment(ThermalState{0.4, 0.2}, kCfg, 0.9, 2, 2, 1, 1, opts),
                          DifferentiationUnstable);
    }
    SECTION("order cap is enforced") {
        REQUIRE_THROWS_AS(moment(CoherentState{}, kCfg, 0.5, 4, 3, 0, 0), std::invalid_argument);
    }
}
