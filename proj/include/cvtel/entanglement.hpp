// Two-mode squeezed resource states and their entanglement entropy, computed
// along two independent routes (closed form and reduced-state eigenvalues).
#pragma once

#include "cvtel/types.hpp"

#include <vector>

namespace cvtel::entanglement {

struct SqueezeParam {
    double r;

    explicit SqueezeParam(double r_) : r(r_) {
        if (r < 0.0) throw std::invalid_argument("SqueezeParam: r must be >= 0");
    }
    double lambda() const { return std::tanh(r); }           // Schmidt ratio
    double variance_factor() const { return std::exp(-2.0 * r); }
};

/// Smallest N whose discarded Schmidt tail lambda^{2(N+1)}/(1-lambda^2) is
/// below tail_tol.
int auto_truncation(SqueezeParam r, double tail_tol = 1e-12);

/// Relative weight of the discarded tail for a given truncation.
double truncation_tail(SqueezeParam r, int N);

/// Diagonal Schmidt-form state with amplitudes proportional to tanh(r)^n,
/// renormalized over 0..N.  Warns on stderr when the discarded tail exceeds
/// 1e-12.
TwoModeState squeezed_state(SqueezeParam r, const TruncationConfig& trunc);

/// Entanglement entropy in bits:
///   E(r) = cosh^2(r) log2(cosh^2 r) - sinh^2(r) log2(sinh^2 r),
/// with E(0) = 0 and large-r slope approaching 2/ln 2.
double entropy_closed_form(SqueezeParam r);

/// Same quantity from the eigenvalues of the reduced state of squeezed_state.
double entropy_numeric(SqueezeParam r, const TruncationConfig& trunc);

struct SweepRow {
    double r;
    double E_closed_bits;
    double E_numeric_bits;
};

/// Table of E(r) over [r_min, r_max] with the endpoints included exactly.
std::vector<SweepRow> entropy_sweep(double r_min, double r_max, int steps,
                                    const TruncationConfig& trunc);

}  // namespace cvtel::entanglement
