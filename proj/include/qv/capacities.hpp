#pragma once

#include <span>
#include <string>
#include <vector>

#include "qv/channels.hpp"
#include "qv/states.hpp"

namespace qv {

enum class CapacityKind { Rec, EntropyExchange, Qmi, CoherentInfo, Loss };

std::string capacity_label(CapacityKind k);

// Relative entropy of coherence in the computational basis,
// S(diag(rho)) - S(rho).
double rec(const DensityMatrix& rho);

// Two independent routes to the same number; Purification evolves a purified
// joint state, WMatrix diagonalizes the Kraus overlap matrix
// W_ij = tr(E_i rho E_j^dagger).
enum class ExchangeMethod { Purification, WMatrix };

double entropy_exchange(const DensityMatrix& input, const KrausChannel& channel,
                        ExchangeMethod method = ExchangeMethod::Purification);

// S(rho) + S(Phi rho) - S_ex
double qmi(const DensityMatrix& input, const KrausChannel& channel);
// S(Phi rho) - S_ex
double coherent_info(const DensityMatrix& input, const KrausChannel& channel);
// S(rho) + S_ex - S(Phi rho)
double loss(const DensityMatrix& input, const KrausChannel& channel);

// Uniform dispatch; Rec is evaluated on the channel output.
double evaluate(CapacityKind kind, const DensityMatrix& input, const KrausChannel& channel);

struct CapacityCurve {
    CapacityKind kind;
    std::string input_label;
    std::vector<double> t;
    std::vector<double> value;
};

// points evenly spaced t values covering [0, 1]; points >= 2.
std::vector<double> uniform_grid(int points);

std::size_t argmin_index(std::span<const double> values);
std::size_t argmax_index(std::span<const double> values);

CapacityCurve sweep(const MapSchedule& schedule, const DensityMatrix& input, CapacityKind kind,
                    std::span<const double> grid, std::string input_label);

struct Extremes {
    double min_value;
    double max_value;
};

// Random search over input states at fixed t: maximally coherent pure states
// with independent phases for Rec, Hilbert-Schmidt random mixed states for
// everything else. Draws are sequential, so a longer run extends a shorter
// one with the same generator seed.
Extremes extremize_over_states(const MapSchedule& schedule, double t, int n_samples,
                               CapacityKind kind, Rng& rng);

}  // namespace qv
