#include "cvtel/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvtel::quad {

Rule gauss_hermite(int n_points) {
    if (n_points < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
    // Jacobi matrix for Hermite polynomials orthogonal wrt exp(-y^2):
    // zero diagonal, off-diagonal beta_k = sqrt(k/2).
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_points, n_points);
    for (int k = 1; k < n_points; ++k) {
        const double b = std::sqrt(0.5 * k);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    r.nodes = es.eigenvalues();
    r.weights.resize(n_points);
    const double mu0 = std::sqrt(std::numbers::pi);  // integral of the weight
    for (int i = 0; i < n_points; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        r.weights(i) = mu0 * v0 * v0;
    }
    return r;
}

Rule uniform_trapezoid(double extent, int n_points) {
    if (n_points < 2) throw std::invalid_argument("uniform_trapezoid: need at least two nodes");
    if (extent <= 0) throw std::invalid_argument("uniform_trapezoid: extent must be positive");
    Rule r;
    r.nodes.resize(n_points);
    r.weights.resize(n_points);
    const double h = 2.0 * extent / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        r.nodes(i) = -extent + i * h;
        r.weights(i) = (i == 0 || i == n_points - 1) ? 0.5 * h : h;
    }
    return r;
}

}  // namespace cvtel::quad
