#include "qv/capacities.hpp"

#include <cmath>
#include <numbers>

#include "qv/eig.hpp"

namespace qv {

std::string capacity_label(CapacityKind k) {
    switch (k) {
        case CapacityKind::Rec: return "rec";
        case CapacityKind::EntropyExchange: return "entropy_exchange";
        case CapacityKind::Qmi: return "qmi";
        case CapacityKind::CoherentInfo: return "coherent_info";
        case CapacityKind::Loss: return "loss";
    }
    return "unknown";
}

double rec(const DensityMatrix& rho) {
    const double s_diag = von_neumann_entropy(dephase(rho));
    const double s = von_neumann_entropy(rho);
    const double c = s_diag - s;
    return c < 0.0 ? 0.0 : c;
}

namespace {

double entropy_exchange_purification(const DensityMatrix& input, const KrausChannel& channel) {
    const int d = input.dim();
    const PureState joint = purify(input);
    // Joint output (Phi (x) id)|psi><psi| accumulated element by element; the
    // environment purifies it, so its entropy is the exchange entropy.
    ComplexMatrix out(d * d, d * d);
    std::vector<Complex> moved(static_cast<std::size_t>(d) * d);
    for (const KrausElement& e : channel.elements()) {
        const auto& p = e.unitary.perm;
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                moved[static_cast<std::size_t>(p[static_cast<std::size_t>(i)]) * d + k] =
                    joint[i * d + k];
        const Complex w{e.probability, 0.0};
        for (int a = 0; a < d * d; ++a)
            for (int b = 0; b < d * d; ++b)
                out(a, b) += w * moved[static_cast<std::size_t>(a)] *
                             std::conj(moved[static_cast<std::size_t>(b)]);
    }
    const EigenDecomposition ed = hermitian_eig(out);
    return entropy_from_spectrum(ed.eigenvalues);
}

double entropy_exchange_wmatrix(const DensityMatrix& input, const KrausChannel& channel) {
    const auto& elems = channel.elements();
    const int k = static_cast<int>(elems.size());
    const int d = input.dim();
    ComplexMatrix w(k, k);
    for (int a = 0; a < k; ++a) {
        const PermutationUnitary inv_a = elems[static_cast<std::size_t>(a)].unitary.inverse();
        for (int b = 0; b < k; ++b) {
            const PermutationUnitary inv_b = elems[static_cast<std::size_t>(b)].unitary.inverse();
            Complex tr{0.0, 0.0};
            for (int x = 0; x < d; ++x) tr += input.matrix()(inv_a.image(x), inv_b.image(x));
            const double scale = std::sqrt(elems[static_cast<std::size_t>(a)].probability *
                                           elems[static_cast<std::size_t>(b)].probability);
            w(a, b) = scale * tr;
        }
    }
    const EigenDecomposition ed = hermitian_eig(w);
    return entropy_from_spectrum(ed.eigenvalues);
}

}  // namespace

double entropy_exchange(const DensityMatrix& input, const KrausChannel& channel,
                        ExchangeMethod method) {
    if (input.dim() != channel.dim())
        throw DimensionMismatchError("state and channel dimensions differ");
    return method == ExchangeMethod::Purification
               ? entropy_exchange_purification(input, channel)
               : entropy_exchange_wmatrix(input, channel);
}

double qmi(const DensityMatrix& input, const KrausChannel& channel) {
    return von_neumann_entropy(input) + von_neumann_entropy(apply(channel, input)) -
           entropy_exchange(input, channel);
}

double coherent_info(const DensityMatrix& input, const KrausChannel& channel) {
    return von_neumann_entropy(apply(channel, input)) - entropy_exchange(input, channel);
}

double loss(const DensityMatrix& input, const KrausChannel& channel) {
    return von_neumann_entropy(input) + entropy_exchange(input, channel) -
           von_neumann_entropy(apply(channel, input));
}

double evaluate(CapacityKind kind, const DensityMatrix& input, const KrausChannel& channel) {
    switch (kind) {
        case CapacityKind::Rec: return rec(apply(channel, input));
        case CapacityKind::EntropyExchange: return entropy_exchange(input, channel);
        case CapacityKind::Qmi: return qmi(input, channel);
        case CapacityKind::CoherentInfo: return coherent_info(input, channel);
        case CapacityKind::Loss: return loss(input, channel);
    }
    throw Error("unhandled capacity kind");
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw InvalidStateError("grid needs at least two points");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) t[static_cast<std::size_t>(k)] = static_cast<double>(k) / (points - 1);
    t.back() = 1.0;
    return t;
}

std::size_t argmin_index(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;
    return best;
}

std::size_t argmax_index(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

CapacityCurve sweep(const MapSchedule& schedule, const DensityMatrix& input, CapacityKind kind,
                    std::span<const double> grid, std::string input_label) {
    CapacityCurve curve;
    curve.kind = kind;
    curve.input_label = std::move(input_label);
    curve.t.assign(grid.begin(), grid.end());
    curve.value.reserve(grid.size());
    for (double t : grid) curve.value.push_back(evaluate(kind, input, schedule.channel_at(t)));
    return curve;
}

Extremes extremize_over_states(const MapSchedule& schedule, double t, int n_samples,
                               CapacityKind kind, Rng& rng) {
    if (n_samples < 1) throw InvalidStateError("need at least one sample");
    const KrausChannel channel = schedule.channel_at(t);
    const int d = schedule.n();

    Extremes out{0.0, 0.0};
    for (int s = 0; s < n_samples; ++s) {
        DensityMatrix rho = [&] {
            if (kind == CapacityKind::Rec) {
                std::vector<double> phases(static_cast<std::size_t>(d));
                for (double& phi : phases) phi = 2.0 * std::numbers::pi * rng.uniform();
                return DensityMatrix::from_pure(PureState::max_coherent(phases));
            }
            return sample_random_mixed(d, rng);
        }();
        const double v = evaluate(kind, rho, channel);
        if (s == 0) {
            out.min_value = out.max_value = v;
        } else {
            out.min_value = std::min(out.min_value, v);
            out.max_value = std::max(out.max_value, v);
        }
    }
    return out;
}

}  // namespace qv
