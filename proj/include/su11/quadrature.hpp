#pragma once

// Gauss-Hermite quadrature and Gaussian whitening frames for integrals of
// the form  integral f(u) du  over R^d where f carries a dominant Gaussian
// factor exp(-q(u)) with q positive definite quadratic.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "su11/errors.hpp"

namespace su11::quad {

struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;           // standard weights for weight e^{-x^2}
    std::vector<double> weights_unweighted;  // w_k e^{x_k^2}, for plain dx integrals
};

/// Golub-Welsch nodes/weights for the e^{-x^2} weight on the real line.
inline GaussHermite gauss_hermite(int order) {
    if (order < 1 || order > 160) throw std::invalid_argument("gauss_hermite: order out of range");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(0.5 * k);
        j(k, k - 1) = b;
        j(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    GaussHermite gh;
    gh.nodes.resize(order);
    gh.weights.resize(order);
    gh.weights_unweighted.resize(order);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int k = 0; k < order; ++k) {
        gh.nodes[k] = es.eigenvalues()(k);
        const double w = sqrt_pi * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
        gh.weights[k] = w;
        gh.weights_unweighted[k] = w * std::exp(gh.nodes[k] * gh.nodes[k]);
    }
    return gh;
}

/// Affine map u = mean + transform * w under which the target quadratic
/// becomes |w|^2; abs_det is |det transform|.
struct GaussianFrame {
    Eigen::VectorXd mean;
    Eigen::MatrixXd transform;
    double abs_det = 1.0;
};

/// Build a frame from the (exact) quadratic exponent q: R^d -> R, probing
/// with unit steps; exact for quadratics up to roundoff.
inline GaussianFrame frame_from_quadratic(const std::function<double(const Eigen::VectorXd&)>& q,
                                          int dim) {
    const double q0 = q(Eigen::VectorXd::Zero(dim));
    Eigen::VectorXd grad(dim);
    Eigen::MatrixXd hess(dim, dim);
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(i) = 1.0;
        const double qp = q(e), qm = q(-e);
        grad(i) = 0.5 * (qp - qm);
        hess(i, i) = qp + qm - 2.0 * q0;
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
            e(i) = 1.0;
            e(j) = 1.0;
            const double qij = q(e);
            hess(i, j) = hess(j, i) =
                qij - q0 - grad(i) - grad(j) - 0.5 * (hess(i, i) + hess(j, j));
        }
    // q(u) = q0 + grad.u + u^T Q u with Q = hess/2
    const Eigen::MatrixXd qmat = 0.5 * hess;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qmat);
    GaussianFrame f;
    f.transform.resize(dim, dim);
    f.abs_det = 1.0;
    for (int i = 0; i < dim; ++i) {
        const double lam = es.eigenvalues()(i);
        if (!(lam > 0.0)) throw PositivityViolation("quadratic form is not positive definite");
        f.abs_det /= std::sqrt(lam);
    }
    f.transform = es.eigenvectors() *
                  es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
    f.mean = -0.5 * qmat.ldlt().solve(grad);
    return f;
}

/// integral of f over R^d via tensor Gauss-Hermite in the given frame.
/// Summation order is fixed, so results are bit-deterministic.
inline double integrate_gaussian(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const GaussianFrame& frame, int order) {
    const int dim = int(frame.mean.size());
    const GaussHermite gh = gauss_hermite(order);
    Eigen::VectorXd u(dim);
    double total = 0.0;
    if (dim == 2) {
        for (int i = 0; i < order; ++i) {
            double row = 0.0;
            for (int j = 0; j < order; ++j) {
                u = frame.mean + frame.transform.col(0) * gh.nodes[i] +
                    frame.transform.col(1) * gh.nodes[j];
                row += gh.weights_unweighted[j] * f(u);
            }
            total += gh.weights_unweighted[i] * row;
        }
    } else if (dim == 4) {
        std::vector<double> outer(order, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < order; ++i) {
            Eigen::VectorXd uu(dim);
            double acc_i = 0.0;
            for (int j = 0; j < order; ++j) {
                const Eigen::VectorXd base01 =
                    frame.mean + frame.transform.col(0) * gh.nodes[i] +
                    frame.transform.col(1) * gh.nodes[j];
                double acc_j = 0.0;
                for (int k = 0; k < order; ++k) {
                    const Eigen::VectorXd base012 = base01 + frame.transform.col(2) * gh.nodes[k];
                    double acc_k = 0.0;
                    for (int l = 0; l < order; ++l) {
                        uu = base012 + frame.transform.col(3) * gh.nodes[l];
                        acc_k += gh.weights_unweighted[l] * f(uu);
                    }
                    acc_j += gh.weights_unweighted[k] * acc_k;
                }
                acc_i += gh.weights_unweighted[j] * acc_j;
            }
            outer[i] = acc_i;
        }
        for (int i = 0; i < order; ++i) total += gh.weights_unweighted[i] * outer[i];
    } else {
        throw std::invalid_argument("integrate_gaussian: dim must be 2 or 4");
    }
    return total * frame.abs_det;
}

}  // namespace su11::quad
