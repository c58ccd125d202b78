#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "qv/io_util.hpp"
#include "qv/rng.hpp"
#include "qv/states.hpp"

namespace qv {

// Five mutually unbiased bases for d = 4: basis 0 is computational, basis 1
// is the maximally coherent encoding alphabet.
struct MubSet {
    std::vector<std::vector<PureState>> bases;
    int dim() const { return 4; }
};

// Builds and exhaustively verifies the basis set (orthonormality within each
// basis, |<a|b>|^2 = 1/4 across every basis pair).
MubSet build_mubs_d4();

std::array<double, 4> born_probabilities(const DensityMatrix& rho,
                                         std::span<const PureState> basis);

enum class NoiseMode { Multinomial, Poisson };

struct CountRecord {
    long long shots_per_basis = 0;
    NoiseMode mode = NoiseMode::Multinomial;
    std::vector<std::array<long long, 4>> counts;  // one row per basis
};

CountRecord simulate_counts(const DensityMatrix& rho, const MubSet& mubs, long long shots_per_basis,
                            NoiseMode mode, Rng& rng);

struct MleResult {
    DensityMatrix rho;
    int iterations;
    double log_likelihood;  // natural log
    bool converged;
};

// Iterative R rho R maximum-likelihood reconstruction from MUB counts.
// Probabilities are floored at 1e-15 so empty bins cannot poison the update.
MleResult mle_reconstruct(const CountRecord& counts, const MubSet& mubs, int max_iterations = 10000,
                          double tol = 1e-10);

struct MonteCarloStats {
    double mean;
    double stddev;  // sample standard deviation over the replicas
};

// Parametric bootstrap: each replica redraws every bin from a Poisson centered
// at the observed count, reruns the reconstruction and evaluates statistic.
// Replica streams are derived from the generator's seed, one per replica.
MonteCarloStats monte_carlo_errors(const CountRecord& counts, const MubSet& mubs, int replicas,
                                   const std::function<double(const DensityMatrix&)>& statistic,
                                   Rng& rng, int max_iterations = 10000, double tol = 1e-10);

void write_counts_csv(std::ostream& os, const CountRecord& counts, const MetaBlock* meta = nullptr);
CountRecord read_counts_csv(std::istream& is);
void write_mub_csv(std::ostream& os, const MubSet& mubs, const MetaBlock* meta = nullptr);

}  // namespace qv
