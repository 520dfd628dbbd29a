// Quadrature rules for overlap integrals.
#pragma once

#include <Eigen/Dense>

namespace cvtel::quad {

struct Rule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Gauss-Hermite rule on (-inf, inf) with weight exp(-y^2), n_points nodes,
/// via Golub-Welsch on the Jacobi matrix.  Exact for polynomials of degree
/// <= 2 n_points - 1.
Rule gauss_hermite(int n_points);

/// Uniform nodes on [-extent, extent] with trapezoid weights (spectrally
/// accurate for smooth integrands that decay below roundoff at the ends).
Rule uniform_trapezoid(double extent, int n_points);

}  // namespace cvtel::quad
