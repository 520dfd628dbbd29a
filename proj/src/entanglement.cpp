#include "cvtel/entanglement.hpp"

#include "cvtel/fock.hpp"

#include <cmath>
#include <iostream>

namespace cvtel::entanglement {

int auto_truncation(SqueezeParam r, double tail_tol) {
    const double l2 = r.lambda() * r.lambda();
    if (l2 == 0.0) return 0;
    // lambda^{2(N+1)} / (1 - lambda^2) < tail_tol
    const double rhs = std::log(tail_tol * (1.0 - l2));
    const int n = static_cast<int>(std::ceil(rhs / std::log(l2) - 1.0));
    return std::max(n, 0);
}

double truncation_tail(SqueezeParam r, int N) {
    const double l2 = r.lambda() * r.lambda();
    if (l2 == 0.0) return 0.0;
    return std::pow(l2, N + 1) / (1.0 - l2);
}

TwoModeState squeezed_state(SqueezeParam r, const TruncationConfig& trunc) {
    const double tail = truncation_tail(r, trunc.N);
    if (tail >= 1e-12) {
        std::cerr << "cvtel: squeezed_state(r=" << r.r << ", N=" << trunc.N
                  << "): discarded tail weight " << tail
                  << " (suggest N >= " << auto_truncation(r) << ")\n";
    }
    const double lam = r.lambda();
    Matrix c = Matrix::Zero(trunc.dim(), trunc.dim());
    double amp = 1.0;
    for (int n = 0; n <= trunc.N; ++n) {
        c(n, n) = amp;
        amp *= lam;
    }
    c /= c.norm();
    return TwoModeState(std::move(c), trunc);
}

double entropy_closed_form(SqueezeParam r) {
    const double ch2 = std::cosh(r.r) * std::cosh(r.r);
    const double sh2 = std::sinh(r.r) * std::sinh(r.r);
    const double a = ch2 * std::log2(ch2);
    const double b = (sh2 > 0.0) ? sh2 * std::log2(sh2) : 0.0;  // 0 log 0 = 0
    return a - b;
}

double entropy_numeric(SqueezeParam r, const TruncationConfig& trunc) {
    const TwoModeState s = squeezed_state(r, trunc);
    const DensityMatrix rho = fock::partial_trace(s, fock::Mode::first);
    return fock::von_neumann_entropy(rho);
}

std::vector<SweepRow> entropy_sweep(double r_min, double r_max, int steps,
                                    const TruncationConfig& trunc) {
    if (steps < 2) throw std::invalid_argument("entropy_sweep: need at least 2 steps");
    if (r_min < 0.0 || r_max < r_min)
        throw std::invalid_argument("entropy_sweep: need 0 <= r_min <= r_max");
    std::vector<SweepRow> rows;
    rows.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double r = (i == steps - 1)
                             ? r_max
                             : r_min + (r_max - r_min) * double(i) / double(steps - 1);
        SqueezeParam sp(r);
        rows.push_back({r, entropy_closed_form(sp), entropy_numeric(sp, trunc)});
    }
    return rows;
}

}  // namespace cvtel::entanglement
