#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "su11/amplifier.hpp"
#include "su11/fock.hpp"

using namespace su11;
using fock::FockRep;
using fock::RepKind;
using Eigen::MatrixXcd;

namespace {

std::mt19937_64 rng(99);

MatrixXcd commutator(const MatrixXcd& a, const MatrixXcd& b) { return a * b - b * a; }

double interior_max(const MatrixXcd& m, const FockRep& rep, int levels) {
    const auto idx = fock::interior_indices(rep, levels);
    return fock::gather(m, idx).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("ladder matrices") {
    const auto [a, adag] = fock::ladder_matrices(10);
    REQUIRE(std::abs(a(0, 1) - 1.0) < 1e-15);             // a|1> = |0>
    const MatrixXcd n = adag * a;
    for (int k = 0; k <= 10; ++k) REQUIRE(std::abs(n(k, k) - double(k)) < 1e-14);
    const MatrixXcd comm = commutator(a, adag);
    const FockRep rep{RepKind::OneModeBoson, 10};
    REQUIRE(interior_max(comm - MatrixXcd::Identity(11, 11), rep, 10) < 1e-14);
}

TEST_CASE("su(1,1) generators") {
    SECTION("one-mode diagonal of K0") {
        const FockRep rep{RepKind::OneModeBoson, 16};
        const auto g = fock::generators(rep);
        for (int n = 0; n <= 16; ++n)
            REQUIRE(std::abs(g.k_zero(n, n) - (0.5 * n + 0.25)) < 1e-15);
    }
    SECTION("two-mode diagonal of K0") {
        const FockRep rep{RepKind::TwoModeBoson, 9};
        const auto g = fock::generators(rep);
        for (int na = 0; na <= 9; ++na)
            for (int nb = 0; nb <= 9; ++nb)
                REQUIRE(std::abs(g.k_zero(rep.index(na, nb), rep.index(na, nb)) -
                                 0.5 * (na + nb + 1)) < 1e-15);
    }
    SECTION("commutation relations on interior blocks") {
        for (const auto kind : {RepKind::OneModeBoson, RepKind::TwoModeBoson}) {
            const FockRep rep{kind, kind == RepKind::OneModeBoson ? 24 : 12};
            const auto g = fock::generators(rep);
            const int levels = rep.cutoff - 3;
            REQUIRE(interior_max(commutator(g.k_minus, g.k_plus) - 2.0 * g.k_zero, rep, levels) <
                    1e-12);
            REQUIRE(interior_max(commutator(g.k_zero, g.k_plus) - g.k_plus, rep, levels) < 1e-12);
            REQUIRE(interior_max(commutator(g.k_zero, g.k_minus) + g.k_minus, rep, levels) < 1e-12);
        }
    }
}

TEST_CASE("casimir operator") {
    SECTION("one-mode value -3/16 in both parity sectors") {
        const FockRep rep{RepKind::OneModeBoson, 20};
        const auto c = fock::casimir(rep);
        for (int n = 0; n < c.interior_levels; ++n)
            REQUIRE(std::abs(c.mat(n, n) + 3.0 / 16.0) < 1e-13);
    }
    SECTION("two-mode equal-occupation sector value -1/4") {
        const FockRep rep{RepKind::TwoModeBoson, 10};
        const auto c = fock::casimir(rep);
        for (int n = 0; n < 9; ++n)
            REQUIRE(std::abs(c.mat(rep.index(n, n), rep.index(n, n)) + 0.25) < 1e-13);
    }
    SECTION("commutes with the generators") {
        const FockRep rep{RepKind::TwoModeBoson, 10};
        const auto c = fock::casimir(rep);
        const auto g = fock::generators(rep);
        REQUIRE(interior_max(commutator(c.mat, g.k_plus), rep, 8) < 1e-12);
        REQUIRE(interior_max(commutator(c.mat, g.k_zero), rep, 8) < 1e-12);
    }
}

TEST_CASE("matrix exponential") {
    SECTION("exp(0) is the identity") {
        const MatrixXcd z = MatrixXcd::Zero(12, 12);
        REQUIRE((fock::matexp(z) - MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("diagonal matrices exponentiate elementwise") {
        MatrixXcd d = MatrixXcd::Zero(6, 6);
        for (int i = 0; i < 6; ++i) d(i, i) = cplx(0.3 * i, -0.2 * i);
        const MatrixXcd e = fock::matexp(d);
        for (int i = 0; i < 6; ++i) REQUIRE(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-14);
    }
    SECTION("exp(m) exp(-m) is the identity") {
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 5; ++trial) {
            MatrixXcd m(20, 20);
            for (int i = 0; i < 20; ++i)
                for (int j = 0; j < 20; ++j) m(i, j) = 0.25 * cplx(g(rng), g(rng));
            const MatrixXcd prod = fock::matexp(m) * fock::matexp(MatrixXcd(-m));
            REQUIRE((prod - MatrixXcd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    SECTION("block splitting agrees with the dense path") {
        // two decoupled blocks interleaved by an index shuffle
        std::normal_distribution<double> g;
        MatrixXcd m = MatrixXcd::Zero(14, 14);
        for (int i = 0; i < 14; ++i)
            for (int j = 0; j < 14; ++j)
                if ((i % 2) == (j % 2)) m(i, j) = 0.3 * cplx(g(rng), g(rng));
        const MatrixXcd blocked = fock::matexp(m);
        const MatrixXcd dense = m.exp();
        REQUIRE((blocked - dense).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("oversized norms are rejected") {
        MatrixXcd big = 400.0 * MatrixXcd::Identity(4, 4);
        REQUIRE_THROWS_AS(fock::matexp(big), OverflowError);
    }
}

TEST_CASE("exponentiate_params") {
    SECTION("identity parameters") {
        const FockRep rep{RepKind::TwoModeBoson, 8};
        const auto u = fock::exponentiate_params({}, rep);
        REQUIRE((u.mat - MatrixXcd::Identity(rep.dim(), rep.dim())).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("one-mode squeezed-vacuum amplitudes") {
        const FockRep rep{RepKind::OneModeBoson, 60};
        const double r = 0.5;
        const auto u = fock::exponentiate_params({r, 0.0, -r}, rep);
        const double ltanh = std::log(std::tanh(r));
        for (int n = 0; n <= 15; ++n) {
            const double lg = 0.5 * std::lgamma(2 * n + 1) - n * std::log(2.0) -
                              std::lgamma(n + 1) - 0.5 * std::log(std::cosh(r)) + n * ltanh;
            REQUIRE(std::abs(u.mat(2 * n, 0) - std::exp(lg)) < 1e-8);
            if (n > 0) REQUIRE(std::abs(u.mat(2 * n - 1, 0)) < 1e-14);
        }
    }
    SECTION("two-mode unitary parameters give unitary interior columns") {
        const FockRep rep{RepKind::TwoModeBoson, 25};
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 5; ++i) {
            const UnitaryParams up{0.5 * cplx(u(rng), u(rng)), 0.6 * u(rng)};
            const auto um = fock::exponentiate_params(up.to_params(), rep);
            const auto idx = fock::interior_indices(rep, 13);
            MatrixXcd cols(rep.dim(), idx.size());
            for (size_t j = 0; j < idx.size(); ++j) cols.col(j) = um.mat.col(idx[j]);
            const MatrixXcd gram = cols.adjoint() * cols;
            REQUIRE((gram - MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <
                    1e-10);
        }
    }
    SECTION("central factor zero is rejected") {
        const FockRep rep{RepKind::OneModeBoson, 8};
        REQUIRE_THROWS_AS(fock::realize_factors({0.1, 0.0, 0.1, Ordering::Normal}, rep),
                          DegenerateDecomposition);
    }
}

TEST_CASE("Bogoliubov action of the two-mode unitary") {
    // U^dag a U = [cosh(phi) + i (omega/2 phi) sinh(phi)] a
    //           + (xi/phi) sinh(phi) b^dag   with phi^2 = |xi|^2 - omega^2/4
    const FockRep rep{RepKind::TwoModeBoson, 20};
    const int d = rep.cutoff + 1;
    MatrixXcd a2 = MatrixXcd::Zero(rep.dim(), rep.dim());
    MatrixXcd bd2 = MatrixXcd::Zero(rep.dim(), rep.dim());
    for (int na = 1; na < d; ++na)
        for (int nb = 0; nb < d; ++nb)
            a2(rep.index(na - 1, nb), rep.index(na, nb)) = std::sqrt(double(na));
    for (int na = 0; na < d; ++na)
        for (int nb = 1; nb < d; ++nb)
            bd2(rep.index(na, nb), rep.index(na, nb - 1)) = std::sqrt(double(nb));
    const auto idx = fock::interior_indices(rep, 5);
    MatrixXcd basis = MatrixXcd::Zero(rep.dim(), idx.size());
    for (size_t j = 0; j < idx.size(); ++j) basis(idx[j], j) = 1.0;

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // alternate squeezing-dominated (phi^2 > 0) and rotation-dominated
        // (phi^2 < 0) regimes
        const bool hyper = trial % 2 == 0;
        const cplx xi = std::polar(hyper ? 0.3 : 0.15, M_PI * u(rng));
        const double omega = hyper ? 0.2 * u(rng) : 1.1 + 0.3 * std::abs(u(rng));
        const cplx z(std::norm(xi) - 0.25 * omega * omega, 0.0);
        REQUIRE((z.real() > 0.0) == hyper);
        const UnitaryParams up{xi, omega};
        const auto um = fock::exponentiate_params(up.to_params(), rep);
        // conjugation restricted to interior columns keeps this cheap
        const MatrixXcd x_cols = um.mat.adjoint() * (a2 * (um.mat * basis));
        const auto [c, s] = radical_functions(z);
        const cplx c1 = c + kI * (0.5 * omega) * s;
        const cplx c2 = xi * s;
        const MatrixXcd pred_cols = c1 * (a2 * basis) + c2 * (bd2 * basis);
        double worst = 0.0;
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j)
                worst = std::max(worst, std::abs(x_cols(idx[i], j) - pred_cols(idx[i], j)));
        REQUIRE(worst < 1e-8);
    }
}

TEST_CASE("brute-force propagator") {
    const FockRep rep{RepKind::TwoModeBoson, 10};
    SECTION("t = 0 gives the identity") {
        const AmplifierConfig cfg{1.0, 1.4, cplx(0.3, 0.1), 0.02};
        const auto u = fock::propagator(cfg, 0.0, rep);
        REQUIRE((u.mat - MatrixXcd::Identity(rep.dim(), rep.dim())).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("kappa = 0 gives decoupled oscillator phases") {
        const AmplifierConfig cfg{1.1, 0.7, cplx(0.0, 0.0), 0.0};
        const double t = 1.3;
        const auto u = fock::propagator(cfg, t, rep);
        for (int na = 0; na <= 10; ++na)
            for (int nb = 0; nb <= 10; ++nb) {
                const cplx expect = std::exp(-kI * ((cfg.omega_a * na + cfg.omega_b * nb) * t));
                REQUIRE(std::abs(u.mat(rep.index(na, nb), rep.index(na, nb)) - expect) < 1e-12);
            }
    }
    SECTION("matches the factored evolution on the interior block") {
        const AmplifierConfig cfg{1.0, 2.0, cplx(0.0, 0.3), 0.05};
        const double t = 2.0;
        const auto up = fock::propagator(cfg, t, rep);
        const auto uf = realize(factor_evolution(cfg, t), rep);
        const auto idx = fock::interior_indices(rep, 5);
        const MatrixXcd mp = fock::gather(up.mat, idx);
        const MatrixXcd mf = fock::gather(uf.mat, idx);
        const cplx ip = (mf.adjoint() * mp).trace();
        const cplx lambda = ip / std::abs(ip);
        REQUIRE((mp - lambda * mf).norm() / mp.norm() < 1e-6);
        // the global phase is the exp(-i delta t / 2) left out of the
        // factored form
        REQUIRE(std::abs(lambda - std::exp(-kI * (0.5 * cfg.delta * t))) < 1e-6);
    }
    SECTION("segments compose") {
        const AmplifierConfig cfg{0.9, 1.3, cplx(0.25, -0.15), 0.03};
        const auto u1 = fock::propagator(cfg, 0.8, rep);
        const auto u12 = fock::propagator_segment(cfg, 0.8, 1.7, rep);
        const auto ufull = fock::propagator(cfg, 1.7, rep);
        REQUIRE((u12.mat * u1.mat - ufull.mat).cwiseAbs().maxCoeff() < 1e-7);
    }
    SECTION("rotating-frame integration matches the direct picture") {
        const FockRep small{RepKind::TwoModeBoson, 6};
        const AmplifierConfig cfg{1.2, 0.8, cplx(0.3, 0.2), 0.04};
        const double t = 0.9;
        const auto u = fock::propagator(cfg, t, small, 1e-10);
        const MatrixXcd ud = fock::propagator_direct(cfg, t, small, 6000);
        REQUIRE((u.mat - ud).cwiseAbs().maxCoeff() < 1e-7);
    }
    SECTION("grid propagators match single-shot integration") {
        const AmplifierConfig cfg{1.0, 1.1, cplx(0.2, 0.1), 0.02};
        const auto grid = fock::propagator_grid(cfg, {0.0, 0.5, 1.2}, rep);
        REQUIRE(grid.size() == 3);
        REQUIRE((grid[0].mat - MatrixXcd::Identity(rep.dim(), rep.dim())).cwiseAbs().maxCoeff() <
                1e-12);
        const auto u05 = fock::propagator(cfg, 0.5, rep);
        const auto u12 = fock::propagator(cfg, 1.2, rep);
        REQUIRE((grid[1].mat - u05.mat).cwiseAbs().maxCoeff() < 1e-7);
        REQUIRE((grid[2].mat - u12.mat).cwiseAbs().maxCoeff() < 1e-7);
    }
    SECTION("unreachable tolerance fails loudly") {
        const AmplifierConfig cfg{1.0, 1.4, cplx(0.3, 0.1), 0.02};
        REQUIRE_THROWS_AS(fock::propagator(cfg, 1.0, rep, 1e-15, 4096), StepSizeFailure);
    }
}

TEST_CASE("states and displacement operators") {
    const FockRep rep{RepKind::TwoModeBoson, 20};
    SECTION("density matrices have unit trace") {
        for (const InitialState st : {InitialState(CoherentState{cplx(0.4, 0.2), cplx(-0.3, 0.1)}),
                                      InitialState(NumberState{2, 1}),
                                      InitialState(ThermalState{0.4, 0.8})}) {
            const MatrixXcd rho = fock::density_matrix(st, rep);
            REQUIRE(std::abs(rho.trace().real() - 1.0) < 1e-6);
            REQUIRE(std::abs(rho.trace().imag()) < 1e-12);
        }
    }
    SECTION("coherent vector reproduces Poissonian amplitudes") {
        const cplx zeta(0.5, -0.3);
        const auto v = fock::coherent_vector(zeta, 12);
        const double expect0 = std::exp(-0.5 * std::norm(zeta));
        REQUIRE(std::abs(v(0) - expect0) < 1e-14);
        REQUIRE(std::abs(v(2) - expect0 * zeta * zeta / std::sqrt(2.0)) < 1e-14);
    }
    SECTION("vacuum characteristic value of a displacement") {
        const cplx xi(0.4, 0.25);
        const MatrixXcd d = fock::displacement_single(xi, 20);
        REQUIRE(std::abs(d(0, 0) - std::exp(-0.5 * std::norm(xi))) < 1e-12);
    }
}
