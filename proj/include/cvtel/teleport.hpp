// Teleportation protocol engine.
//
// Alice jointly measures the input mode (1) and her half of the resource
// (mode 2); the outcome (X0, P0) collapses Bob's mode (3) onto a conditional
// state whose amplitudes are a contraction of the eigenstate table with the
// input and resource.  Bob then applies a correction: either the discrete
// unitary sqrt(N+1) gamma(X0, P0), or a displacement driven by the outcome.
//
// Conditional states are kept unnormalized: their squared norm is the outcome
// probability density on the delta-normalized scale, and cell probabilities
// are density * dX dP / kappa.
#pragma once

#include "cvtel/epr.hpp"
#include "cvtel/types.hpp"

#include <optional>
#include <random>
#include <vector>

namespace cvtel::teleport {

using epr::GammaTable;
using epr::OutcomeGrid;

struct MeasurementOutcome {
    double X0 = 0.0;
    double P0 = 0.0;
    double density = 0.0;  // ||conditional||^2 on the delta-normalized scale
    double weight = 0.0;   // grid cell weight dX dP / kappa
};

enum class Correction { discrete, displacement };

/// Bob's collapsed (unnormalized) state for one outcome table, and its
/// density:  beta_l = sum_{m,n} conj(gamma_raw_{mn}) alpha_m R_{nl},
/// density = ||beta||^2.  For the maximally entangled resource and the (0,0)
/// table this is proportional to the input.
std::pair<FockState, double> conditional_state(const FockState& input,
                                               const TwoModeState& resource,
                                               const GammaTable& g);

/// Discrete correction U: |n> -> sqrt(N+1) sum_m gamma_mn |m>.  Warns on
/// stderr when sqrt(N+1) gamma is far from unitary (residual > 1e-6) and
/// proceeds.
FockState bob_correction_discrete(const GammaTable& g, const FockState& state);

/// Displacement correction D(zeta) with zeta = gain * (-X0 + i P0): undoes
/// the outcome-conditioned offset (x shifted by -X0, p by +P0) left on Bob's
/// mode.  Applied in the working space.
FockState bob_correction_displacement(const MeasurementOutcome& outcome, double gain,
                                      const FockState& state,
                                      const TruncationConfig& trunc);

/// Densities (and conditional states) for every cell of an outcome grid,
/// evaluated with the operator-route tables.
struct GridScan {
    OutcomeGrid grid;
    TruncationConfig trunc;
    std::vector<double> density;       // index ix * p_count + jp
    std::vector<Vector> conditionals;  // raw conditional amplitudes per cell
    double total_mass = 0.0;           // sum density * cell weight

    GridScan(OutcomeGrid g, TruncationConfig t) : grid(g), trunc(t) {}
    long index(int ix, int jp) const { return long(ix) * grid.p_count() + jp; }
};

GridScan scan_outcomes(const FockState& input, const TwoModeState& resource,
                       const TruncationConfig& trunc, const OutcomeGrid& grid);

/// Draws outcomes proportionally to cell probability.  Deterministic for a
/// fixed generator state.  Throws when the grid captures less than 99% of the
/// total probability mass.
class OutcomeSampler {
public:
    explicit OutcomeSampler(const GridScan& scan);
    MeasurementOutcome sample(std::mt19937_64& rng) const;

private:
    const GridScan& scan_;
    std::vector<double> cdf_;
};

/// Convenience single draw.
MeasurementOutcome sample_outcome(const GridScan& scan, std::mt19937_64& rng);

struct ProtocolRun {
    FockState input;
    TwoModeState resource;
    MeasurementOutcome outcome;
    FockState conditional;  // unnormalized
    FockState corrected;    // unnormalized, working space for displacement mode
    double fidelity = 0.0;
    double gamma_unitarity_residual = 0.0;
    Correction correction = Correction::displacement;
};

/// Full protocol at a forced outcome point (table built on demand).
ProtocolRun protocol_run_at(const FockState& input, const TwoModeState& resource,
                            const TruncationConfig& trunc, double X0, double P0,
                            Correction correction, double gain = 1.0);

/// Full protocol with a sampled outcome: squeezed resource of parameter r,
/// grid-cell sampling, correction, fidelity.
ProtocolRun run_protocol(const FockState& input, double r, const TruncationConfig& trunc,
                         const OutcomeGrid& grid, Correction correction, uint64_t seed,
                         double gain = 1.0);

/// Protocol with the exact maximally entangled resource and a complete
/// discrete outcome basis (clock/shift unitaries); recovers the input exactly.
ProtocolRun run_protocol_ideal(const FockState& input, const TruncationConfig& trunc,
                               uint64_t seed);

/// Repeated sampled runs sharing one grid scan.
std::vector<ProtocolRun> run_protocol_batch(const FockState& input, double r,
                                            const TruncationConfig& trunc,
                                            const OutcomeGrid& grid, Correction correction,
                                            uint64_t seed, int n_samples, double gain = 1.0);

/// Input ensemble for averaged scores: a fixed state or a list of coherent
/// amplitudes (uniform weights).
struct InputFamily {
    std::optional<FockState> fixed_state;
    std::vector<cd> coherent_alphas;

    static InputFamily fixed(FockState s);
    static InputFamily coherent(std::vector<cd> alphas);
    std::vector<FockState> realize(const TruncationConfig& trunc) const;
    double reach() const;  // amplitude scale, for grid sizing
};

struct AvgFidelityResult {
    double mean_fidelity = 0.0;  // mass-normalized expectation of F
    double raw_sum = 0.0;        // sum weight * density * F (unnormalized)
    double total_mass = 0.0;
};

/// Deterministic grid quadrature of the output fidelity over all outcomes
/// (no sampling noise).  Throws when captured mass < 0.99.
AvgFidelityResult average_fidelity(const InputFamily& family, double r,
                                   const TruncationConfig& trunc, const OutcomeGrid& grid,
                                   Correction correction, double gain = 1.0);

/// Independent cross-check of average_fidelity: tables from the quadrature
/// oracle and conditionals by explicit rank-3 tensor contraction.
AvgFidelityResult average_fidelity_oracle(const InputFamily& family, double r,
                                          const TruncationConfig& trunc,
                                          const OutcomeGrid& grid, Correction correction,
                                          double gain = 1.0);

/// Haar-distributed unitary (QR of a complex Gaussian matrix with phase fix).
Matrix random_unitary(int dim, std::mt19937_64& rng);

/// Complete orthogonal family of dim^2 clock/shift unitaries; the tables
/// U / sqrt(dim) form a maximally entangled outcome basis.
std::vector<Matrix> maximally_entangled_basis(int dim);

/// Normalized random state (complex Gaussian amplitudes).
FockState random_state(const TruncationConfig& trunc, std::mt19937_64& rng);

}  // namespace cvtel::teleport
