#include "cvtel/teleport.hpp"

#include "cvtel/entanglement.hpp"
#include "cvtel/fock.hpp"
#include "cvtel/parallel.hpp"
#include "cvtel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>

namespace cvtel::teleport {

namespace {

double uniform53(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Shared eigen-decompositions of the working-space quadratures.  Powers both
/// the grid scan (exponentials of x and p) and a fast factored displacement
///   D(a + ib) = e^{iab} exp(-2ia p) exp(2ib x),
/// which agrees with the direct matrix exponential in the interior.
class WorkspaceCache {
public:
    explicit WorkspaceCache(const TruncationConfig& trunc) : trunc_(trunc) {
        auto [x, p] = fock::quadrature_ops(trunc);
        esx_.compute(x.mat);
        esp_.compute(p.mat);
    }

    const TruncationConfig& trunc() const { return trunc_; }

    Matrix exp_ip_full(double t) const {
        return esp_.eigenvectors() * phases(esp_.eigenvalues(), t).asDiagonal() *
               esp_.eigenvectors().adjoint();
    }

    Matrix exp_ix_top(double t, int rows) const {
        return esx_.eigenvectors().topRows(rows) * phases(esx_.eigenvalues(), t).asDiagonal() *
               esx_.eigenvectors().adjoint();
    }

    Vector displace(cd zeta, Vector v) const {
        const double a = zeta.real(), b = zeta.imag();
        apply(esx_, 2.0 * b, v);
        apply(esp_, -2.0 * a, v);
        v *= std::exp(cd(0.0, a * b));
        return v;
    }

private:
    static Vector phases(const Eigen::VectorXd& lam, double t) {
        Vector ph(lam.size());
        for (int i = 0; i < lam.size(); ++i) ph(i) = std::exp(cd(0.0, t * lam(i)));
        return ph;
    }

    static void apply(const Eigen::SelfAdjointEigenSolver<Matrix>& es, double t, Vector& v) {
        if (t == 0.0) return;
        Vector w = es.eigenvectors().adjoint() * v;
        w.array() *= phases(es.eigenvalues(), t).array();
        v = es.eigenvectors() * w;
    }

    TruncationConfig trunc_;
    Eigen::SelfAdjointEigenSolver<Matrix> esx_, esp_;
};

/// Visit every grid cell with the raw operator-route table block.  X is the
/// outer loop so the mode-mixing factor is built once per column; columns run
/// in parallel, so cell_fn must be safe for concurrent calls with distinct ix.
void scan_cells(const WorkspaceCache& wc, const OutcomeGrid& grid,
                const TruncationConfig& trunc,
                const std::function<void(int, int, const Matrix&)>& cell_fn) {
    const int D = trunc.dim();
    const int W = trunc.work_dim();

    std::vector<Matrix> utops(grid.p_count());
    for (int jp = 0; jp < grid.p_count(); ++jp) {
        const double P = grid.p_at(jp);
        if (P != 0.0) utops[jp] = wc.exp_ix_top(P, D);
    }

    parallel_for(grid.x_count(), [&](int ix) {
        const double X = grid.x_at(ix);
        Matrix K;
        if (X == 0.0) {
            K = Matrix::Identity(W, W);
        } else {
            const Matrix V = wc.exp_ip_full(X);
            K.noalias() = V * V.conjugate();
        }
        Matrix tmp(W, D), c(D, D);
        for (int jp = 0; jp < grid.p_count(); ++jp) {
            const double P = grid.p_at(jp);
            if (P == 0.0) {
                c = K.topLeftCorner(D, D);
            } else {
                tmp.noalias() = K * utops[jp].transpose();
                c.noalias() = utops[jp] * tmp;
            }
            cell_fn(ix, jp, c);
        }
    });
}

/// Fidelity of an unnormalized output against a normalized input living on
/// the first input-dim amplitudes.
double score_against(const Vector& input, const Vector& output) {
    const double nrm = output.squaredNorm();
    if (nrm <= 0.0) return 0.0;
    const cd ov = input.dot(output.head(input.size()));
    return std::norm(ov) / nrm;
}

Vector embed(const Vector& v, int dim) {
    Vector out = Vector::Zero(dim);
    out.head(v.size()) = v;
    return out;
}

TwoModeState resource_for(double r, const TruncationConfig& trunc) {
    return entanglement::squeezed_state(entanglement::SqueezeParam(r), trunc);
}

struct Scorer {
    const WorkspaceCache& wc;
    Correction correction;
    double gain;

    // raw table block needed only for the discrete correction
    double operator()(const Vector& input, const Vector& beta, double X, double P,
                      const Matrix* raw_block) const {
        if (correction == Correction::displacement) {
            Vector corrected =
                wc.displace(gain * cd(-X, P), embed(beta, wc.trunc().work_dim()));
            return score_against(input, corrected);
        }
        const double raw_norm = raw_block->norm();
        if (raw_norm <= 0.0) return 0.0;
        const double scale = std::sqrt(double(raw_block->rows())) / raw_norm;
        Vector corrected = scale * (*raw_block * beta);
        return score_against(input, corrected);
    }
};

AvgFidelityResult averaged(const std::vector<FockState>& inputs,
                           const std::vector<double>& mass,
                           const std::vector<double>& fsum) {
    AvgFidelityResult out;
    for (size_t k = 0; k < inputs.size(); ++k) {
        if (mass[k] < 0.99) {
            throw std::runtime_error(
                "average_fidelity: outcome grid captures only " + std::to_string(mass[k]) +
                " of the probability mass; enlarge the grid");
        }
        out.mean_fidelity += fsum[k] / mass[k];
        out.raw_sum += fsum[k];
        out.total_mass += mass[k];
    }
    const double n = double(inputs.size());
    out.mean_fidelity /= n;
    out.raw_sum /= n;
    out.total_mass /= n;
    return out;
}

}  // namespace

std::pair<FockState, double> conditional_state(const FockState& input,
                                               const TwoModeState& resource,
                                               const GammaTable& g) {
    if (input.amps.size() != g.gamma.rows() || resource.amps.rows() != g.gamma.rows())
        throw std::invalid_argument("conditional_state: dimension mismatch");
    const Matrix raw = g.raw_frobenius * g.gamma;
    Vector beta = resource.amps.transpose() * (raw.adjoint() * input.amps);
    const double density = beta.squaredNorm();
    if (density < 1e-300)
        std::cerr << "cvtel: conditional state has vanishing norm at outcome (" << g.X
                  << ", " << g.P << ")\n";
    return {FockState(std::move(beta), input.trunc, /*normalized=*/false), density};
}

FockState bob_correction_discrete(const GammaTable& g, const FockState& state) {
    const double resid = epr::unitarity_residual(g);
    if (resid > 1e-6) {
        std::cerr << "cvtel: discrete correction at (" << g.X << ", " << g.P
                  << "): sqrt(N+1) gamma deviates from unitarity (residual " << resid
                  << "); proceeding\n";
    }
    const double s = std::sqrt(double(g.gamma.rows()));
    Vector out = s * (g.gamma * state.amps);
    return FockState(std::move(out), state.trunc, /*normalized=*/false);
}

FockState bob_correction_displacement(const MeasurementOutcome& outcome, double gain,
                                      const FockState& state,
                                      const TruncationConfig& trunc) {
    const cd zeta = gain * cd(-outcome.X0, outcome.P0);
    const Operator D = fock::displacement(zeta, trunc);
    const FockState wide = state.embedded(trunc.work_space());
    Vector out = D.mat * wide.amps;
    return FockState(std::move(out), trunc.work_space(), /*normalized=*/false);
}

GridScan scan_outcomes(const FockState& input, const TwoModeState& resource,
                       const TruncationConfig& trunc, const OutcomeGrid& grid) {
    GridScan scan(grid, trunc);
    scan.density.assign(grid.cell_count(), 0.0);
    scan.conditionals.assign(grid.cell_count(), Vector());

    const WorkspaceCache wc(trunc);
    const Matrix rt = resource.amps.transpose();
    scan_cells(wc, grid, trunc, [&](int ix, int jp, const Matrix& raw) {
        Vector beta = rt * (raw.adjoint() * input.amps);
        const long idx = scan.index(ix, jp);
        scan.density[idx] = beta.squaredNorm();
        scan.conditionals[idx] = std::move(beta);
    });

    scan.total_mass = 0.0;
    for (double d : scan.density) scan.total_mass += d;
    scan.total_mass *= grid.cell_weight();
    return scan;
}

OutcomeSampler::OutcomeSampler(const GridScan& scan) : scan_(scan) {
    if (scan.total_mass < 0.99) {
        throw std::runtime_error("sample_outcome: grid captures only " +
                                 std::to_string(scan.total_mass) +
                                 " of the probability mass; enlarge the grid");
    }
    cdf_.resize(scan.density.size());
    double acc = 0.0;
    for (size_t i = 0; i < scan.density.size(); ++i) {
        acc += scan.density[i];
        cdf_[i] = acc;
    }
}

MeasurementOutcome OutcomeSampler::sample(std::mt19937_64& rng) const {
    const double u = uniform53(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const long idx = std::min<long>(it - cdf_.begin(), long(cdf_.size()) - 1);
    const int ix = int(idx / scan_.grid.p_count());
    const int jp = int(idx % scan_.grid.p_count());
    return {scan_.grid.x_at(ix), scan_.grid.p_at(jp), scan_.density[idx],
            scan_.grid.cell_weight()};
}

MeasurementOutcome sample_outcome(const GridScan& scan, std::mt19937_64& rng) {
    return OutcomeSampler(scan).sample(rng);
}

ProtocolRun protocol_run_at(const FockState& input, const TwoModeState& resource,
                            const TruncationConfig& trunc, double X0, double P0,
                            Correction correction, double gain) {
    const GammaTable g = epr::gamma_closed_form(X0, P0, trunc);
    auto [cond, density] = conditional_state(input, resource, g);
    MeasurementOutcome outcome{X0, P0, density, 0.0};
    FockState corrected = (correction == Correction::discrete)
                              ? bob_correction_discrete(g, cond)
                              : bob_correction_displacement(outcome, gain, cond, trunc);
    ProtocolRun run{input,     resource,  outcome,
                    cond,      corrected, score_against(input.amps, corrected.amps),
                    epr::unitarity_residual(g), correction};
    return run;
}

ProtocolRun run_protocol(const FockState& input, double r, const TruncationConfig& trunc,
                         const OutcomeGrid& grid, Correction correction, uint64_t seed,
                         double gain) {
    const TwoModeState resource = resource_for(r, trunc);
    const GridScan scan = scan_outcomes(input, resource, trunc, grid);
    std::mt19937_64 rng(seed);
    const MeasurementOutcome outcome = sample_outcome(scan, rng);
    ProtocolRun run = protocol_run_at(input, resource, trunc, outcome.X0, outcome.P0,
                                      correction, gain);
    run.outcome.weight = outcome.weight;
    return run;
}

ProtocolRun run_protocol_ideal(const FockState& input, const TruncationConfig& trunc,
                               uint64_t seed) {
    const int D = trunc.dim();
    const TwoModeState resource = epr::phi00(trunc);
    const auto basis = maximally_entangled_basis(D);

    std::vector<double> density(basis.size());
    std::vector<FockState> conds;
    conds.reserve(basis.size());
    for (size_t i = 0; i < basis.size(); ++i) {
        auto [cond, d] = conditional_state(input, resource,
                                           GammaTable::from_unitary(basis[i], trunc));
        density[i] = d;
        conds.push_back(std::move(cond));
    }
    const double weight = 1.0 / double(D);

    std::mt19937_64 rng(seed);
    double total = 0.0;
    for (double d : density) total += d;
    const double u = uniform53(rng) * total;
    double acc = 0.0;
    size_t pick = basis.size() - 1;
    for (size_t i = 0; i < basis.size(); ++i) {
        acc += density[i];
        if (u < acc) {
            pick = i;
            break;
        }
    }

    const GammaTable g = GammaTable::from_unitary(basis[pick], trunc);
    FockState corrected = bob_correction_discrete(g, conds[pick]);
    // Outcome labels for the discrete basis are the (shift, clock) indices.
    MeasurementOutcome outcome{double(pick / D), double(pick % D), density[pick], weight};
    ProtocolRun run{input,        resource,  outcome,
                    conds[pick],  corrected, score_against(input.amps, corrected.amps),
                    epr::unitarity_residual(g), Correction::discrete};
    return run;
}

std::vector<ProtocolRun> run_protocol_batch(const FockState& input, double r,
                                            const TruncationConfig& trunc,
                                            const OutcomeGrid& grid, Correction correction,
                                            uint64_t seed, int n_samples, double gain) {
    const TwoModeState resource = resource_for(r, trunc);
    const GridScan scan = scan_outcomes(input, resource, trunc, grid);
    const OutcomeSampler sampler(scan);
    const WorkspaceCache wc(trunc);
    std::mt19937_64 rng(seed);

    std::vector<ProtocolRun> runs;
    runs.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const MeasurementOutcome outcome = sampler.sample(rng);
        if (correction == Correction::discrete) {
            ProtocolRun run = protocol_run_at(input, resource, trunc, outcome.X0,
                                              outcome.P0, correction, gain);
            run.outcome.weight = outcome.weight;
            runs.push_back(std::move(run));
            continue;
        }
        const int ix = int(std::lround(outcome.X0 / grid.dx)) + grid.nx;
        const int jp = int(std::lround(outcome.P0 / grid.dp)) + grid.np;
        const Vector& beta = scan.conditionals[scan.index(ix, jp)];
        Vector corrected =
            wc.displace(gain * cd(-outcome.X0, outcome.P0), embed(beta, trunc.work_dim()));
        ProtocolRun run{input,
                        resource,
                        outcome,
                        FockState(beta, trunc, false),
                        FockState(corrected, trunc.work_space(), false),
                        score_against(input.amps, corrected),
                        -1.0,
                        correction};
        runs.push_back(std::move(run));
    }
    return runs;
}

InputFamily InputFamily::fixed(FockState s) {
    InputFamily f;
    f.fixed_state.emplace(std::move(s));
    return f;
}

InputFamily InputFamily::coherent(std::vector<cd> alphas) {
    if (alphas.empty())
        throw std::invalid_argument("InputFamily::coherent: need at least one amplitude");
    InputFamily f;
    f.coherent_alphas = std::move(alphas);
    return f;
}

std::vector<FockState> InputFamily::realize(const TruncationConfig& trunc) const {
    std::vector<FockState> out;
    if (fixed_state) {
        if (fixed_state->trunc.N != trunc.N)
            throw std::invalid_argument("InputFamily: fixed state truncation mismatch");
        out.push_back(*fixed_state);
    }
    for (cd a : coherent_alphas) out.push_back(FockState::coherent(a, trunc));
    if (out.empty()) throw std::invalid_argument("InputFamily: empty family");
    return out;
}

double InputFamily::reach() const {
    double r = 0.0;
    for (cd a : coherent_alphas) r = std::max(r, std::abs(a));
    if (fixed_state) {
        double nbar = 0.0;
        for (int n = 0; n < fixed_state->amps.size(); ++n)
            nbar += n * std::norm(fixed_state->amps(n));
        r = std::max(r, std::sqrt(nbar));
    }
    return r;
}

AvgFidelityResult average_fidelity(const InputFamily& family, double r,
                                   const TruncationConfig& trunc, const OutcomeGrid& grid,
                                   Correction correction, double gain) {
    const TwoModeState resource = resource_for(r, trunc);
    const std::vector<FockState> inputs = family.realize(trunc);
    const WorkspaceCache wc(trunc);
    const Scorer scorer{wc, correction, gain};
    const Matrix rt = resource.amps.transpose();
    const double cw = grid.cell_weight();

    // Per-column partial sums keep the parallel scan race-free.
    const size_t nk = inputs.size();
    std::vector<double> mass_col(size_t(grid.x_count()) * nk, 0.0);
    std::vector<double> fsum_col(size_t(grid.x_count()) * nk, 0.0);
    scan_cells(wc, grid, trunc, [&](int ix, int jp, const Matrix& raw) {
        const double X = grid.x_at(ix);
        const double P = grid.p_at(jp);
        for (size_t k = 0; k < nk; ++k) {
            Vector beta = rt * (raw.adjoint() * inputs[k].amps);
            const double dens = beta.squaredNorm();
            mass_col[ix * nk + k] += dens * cw;
            if (dens < 1e-300) continue;
            fsum_col[ix * nk + k] += dens * cw * scorer(inputs[k].amps, beta, X, P, &raw);
        }
    });
    std::vector<double> mass(nk, 0.0), fsum(nk, 0.0);
    for (int ix = 0; ix < grid.x_count(); ++ix) {
        for (size_t k = 0; k < nk; ++k) {
            mass[k] += mass_col[ix * nk + k];
            fsum[k] += fsum_col[ix * nk + k];
        }
    }
    return averaged(inputs, mass, fsum);
}

AvgFidelityResult average_fidelity_oracle(const InputFamily& family, double r,
                                          const TruncationConfig& trunc,
                                          const OutcomeGrid& grid, Correction correction,
                                          double gain) {
    const TwoModeState resource = resource_for(r, trunc);
    const std::vector<FockState> inputs = family.realize(trunc);
    const WorkspaceCache wc(trunc);
    const Scorer scorer{wc, correction, gain};
    const int D = trunc.dim();
    const double cw = grid.cell_weight();

    // Quadrature setup shared by all cells: the first wavefunction factor
    // confines the integrand regardless of X.
    const double L = 0.5 * std::sqrt(2.0 * trunc.N + 1.0) + 4.0;
    const double bandwidth =
        std::sqrt(2.0) * std::sqrt(2.0 * trunc.N + 1.0) + 2.0 * grid.extent_p() + 4.0;
    int nodes = std::max(801, int(std::ceil(3.0 * 2.0 * L * bandwidth / 3.141592653589793)));
    nodes |= 1;
    const quad::Rule rule = quad::uniform_trapezoid(L, nodes);

    Eigen::MatrixXd phi0(D, nodes);
    for (int i = 0; i < nodes; ++i)
        phi0.col(i) = fock::quadrature_wavefunction_table(trunc.N, rule.nodes(i));

    const size_t nk = inputs.size();
    std::vector<double> mass_col(size_t(grid.x_count()) * nk, 0.0);
    std::vector<double> fsum_col(size_t(grid.x_count()) * nk, 0.0);
    parallel_for(grid.x_count(), [&](int ix) {
        const double X = grid.x_at(ix);
        Eigen::MatrixXd phis(D, nodes);
        for (int i = 0; i < nodes; ++i)
            phis.col(i) = fock::quadrature_wavefunction_table(trunc.N, rule.nodes(i) + X);
        for (int jp = 0; jp < grid.p_count(); ++jp) {
            const double P = grid.p_at(jp);
            Vector w(nodes);
            for (int i = 0; i < nodes; ++i)
                w(i) = rule.weights(i) * std::exp(cd(0.0, P * (2.0 * rule.nodes(i) + X)));
            const Matrix raw = (phi0.cast<cd>() * w.asDiagonal()) * phis.transpose().cast<cd>();

            for (size_t k = 0; k < nk; ++k) {
                // Explicit rank-3 contraction over the joint state tensor
                // alpha_j R_{nl}; deliberately index-by-index.
                Vector beta = Vector::Zero(D);
                for (int l = 0; l < D; ++l) {
                    cd acc(0.0, 0.0);
                    for (int j = 0; j < D; ++j) {
                        const cd aj = inputs[k].amps(j);
                        if (aj == cd(0.0, 0.0)) continue;
                        for (int n = 0; n < D; ++n) {
                            const cd rnl = resource.amps(n, l);
                            if (rnl == cd(0.0, 0.0)) continue;
                            acc += std::conj(raw(j, n)) * aj * rnl;
                        }
                    }
                    beta(l) = acc;
                }
                const double dens = beta.squaredNorm();
                mass_col[ix * nk + k] += dens * cw;
                if (dens < 1e-300) continue;
                fsum_col[ix * nk + k] += dens * cw * scorer(inputs[k].amps, beta, X, P, &raw);
            }
        }
    });
    std::vector<double> mass(nk, 0.0), fsum(nk, 0.0);
    for (int ix = 0; ix < grid.x_count(); ++ix) {
        for (size_t k = 0; k < nk; ++k) {
            mass[k] += mass_col[ix * nk + k];
            fsum[k] += fsum_col[ix * nk + k];
        }
    }
    return averaged(inputs, mass, fsum);
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) A(r, c) = cd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        const cd d = R(c, c);
        if (std::abs(d) > 0.0) Q.col(c) *= d / std::abs(d);
    }
    return Q;
}

std::vector<Matrix> maximally_entangled_basis(int dim) {
    const cd omega = std::exp(cd(0.0, 2.0 * 3.14159265358979323846 / dim));
    Matrix shift = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) shift((n + 1) % dim, n) = 1.0;

    std::vector<Matrix> basis;
    basis.reserve(size_t(dim) * dim);
    Matrix sa = Matrix::Identity(dim, dim);
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            Matrix u = sa;
            for (int n = 0; n < dim; ++n) u.col(n) *= std::pow(omega, double(b) * n);
            basis.push_back(std::move(u));
        }
        sa = shift * sa;
    }
    return basis;
}

FockState random_state(const TruncationConfig& trunc, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector a(trunc.dim());
    for (int n = 0; n < a.size(); ++n) a(n) = cd(gauss(rng), gauss(rng));
    FockState s(std::move(a), trunc, false);
    s.normalize();
    return s;
}

}  // namespace cvtel::teleport
