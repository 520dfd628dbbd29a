// Foundational numerical layer: truncated ladder operators, quadrature
// observables and wavefunctions, displacement, partial trace, entropy,
// fidelity.  All functions are pure; values are immutable after construction.
#pragma once

#include "cvtel/types.hpp"

namespace cvtel::fock {

/// Annihilation operator on the working space: <n-1|a|n> = sqrt(n).
Operator annihilation(const TruncationConfig& trunc);

/// Creation operator (conjugate transpose of annihilation).
Operator creation(const TruncationConfig& trunc);

/// Quadrature pair x = (a + a^dag)/2, p = (a - a^dag)/(2i).
/// With this scaling [x, p] = i/2 and the vacuum has <x^2> = 1/4.
std::pair<Operator, Operator> quadrature_ops(const TruncationConfig& trunc);

/// Position-basis wavefunction <x|n> for the scaling above:
///   <x|n> = (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2) x) exp(-x^2),
/// evaluated by the normalized three-term recurrence (no raw Hermite
/// polynomials, so it stays finite for n up to a few hundred).
double quadrature_wavefunction(int n, double x);

/// All wavefunction values <x|0..n_max> at one point, via the same recurrence.
RealVector quadrature_wavefunction_table(int n_max, double x);

/// Displacement D(zeta) = exp(zeta a^dag - conj(zeta) a), built as a matrix
/// exponential on the working space.  Exactly unitary as a truncated matrix;
/// acts as a displacement only in the interior.  Warns on stderr when the
/// interior-block displacement residual ||D^dag a D - a - zeta|| exceeds 1e-6.
Operator displacement(cd zeta, const TruncationConfig& trunc);

enum class Mode { first, second };

/// Reduced density matrix of one mode of a pure two-mode state.
/// Unnormalized input is rejected unless allow_unnormalized; in that case the
/// output trace equals the input squared norm.
DensityMatrix partial_trace(const TwoModeState& state, Mode keep,
                            bool allow_unnormalized = false);

/// Von Neumann entropy in bits, -sum lambda_i log2 lambda_i with 0 log 0 := 0.
/// Eigenvalues in [-abs_tol, 0) are clipped to zero; anything more negative
/// is an error.
double von_neumann_entropy(const DensityMatrix& rho);

/// Squared overlap |<psi|phi>|^2 of two normalized states.
double fidelity(const FockState& psi, const FockState& phi);

}  // namespace cvtel::fock
