#include "qv/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qv/eig.hpp"

namespace qv {

PermutationUnitary PermutationUnitary::from_perm(std::vector<int> perm) {
    const int n = static_cast<int>(perm.size());
    if (n == 0) throw InvalidStateError("empty permutation");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw InvalidStateError("not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
    PermutationUnitary u;
    u.matrix = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) u.matrix(perm[static_cast<std::size_t>(j)], j) = Complex{1.0, 0.0};
    u.perm = std::move(perm);
    return u;
}

PermutationUnitary PermutationUnitary::inverse() const {
    std::vector<int> inv(perm.size());
    for (int j = 0; j < dim(); ++j) inv[static_cast<std::size_t>(perm[j])] = j;
    return from_perm(std::move(inv));
}

namespace {

unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
    unsigned long long r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw DimensionOverflowError("permutation count overflows 64 bits");
    return r;
}

unsigned long long factorial_ull(int k) {
    unsigned long long f = 1;
    for (int i = 2; i <= k; ++i) f = checked_mul(f, static_cast<unsigned long long>(i));
    return f;
}

std::vector<std::vector<int>> perms_of_size(int k) {
    std::vector<int> base(static_cast<std::size_t>(k));
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

}  // namespace

unsigned long long block_permutation_count(int n, int s) {
    if (s < 1 || s > n) throw InvalidSubsetSizeError("block size must satisfy 1 <= s <= n");
    const int full = n / s;
    const int rem = n % s;
    unsigned long long count = 1;
    const unsigned long long fs = factorial_ull(s);
    for (int b = 0; b < full; ++b) count = checked_mul(count, fs);
    count = checked_mul(count, factorial_ull(rem));
    return count;
}

double p_min(int n, int s) { return 1.0 / static_cast<double>(block_permutation_count(n, s)); }

std::vector<PermutationUnitary> enumerate_block_permutations(int n, int s) {
    const unsigned long long count = block_permutation_count(n, s);
    if (count > (1ULL << 20))
        throw DimensionOverflowError("refusing to materialize over 2^20 permutations");

    // Block layout: full blocks of size s starting at 0, s, 2s, ...; whatever
    // is left over forms one final shorter block.
    struct Block {
        int start;
        std::vector<std::vector<int>> options;
    };
    std::vector<Block> blocks;
    const int full = n / s;
    for (int b = 0; b < full; ++b) blocks.push_back({b * s, perms_of_size(s)});
    if (n % s != 0) blocks.push_back({full * s, perms_of_size(n % s)});

    // Odometer with block 0 as the most significant digit; per-block options
    // are lexicographic, so the combined one-line words come out sorted too.
    std::vector<std::size_t> digit(blocks.size(), 0);
    std::vector<PermutationUnitary> out;
    out.reserve(static_cast<std::size_t>(count));
    for (;;) {
        std::vector<int> word(static_cast<std::size_t>(n));
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& local = blocks[b].options[digit[b]];
            for (std::size_t k = 0; k < local.size(); ++k)
                word[static_cast<std::size_t>(blocks[b].start) + k] = blocks[b].start + local[k];
        }
        out.push_back(PermutationUnitary::from_perm(std::move(word)));

        std::size_t b = blocks.size();
        while (b > 0) {
            --b;
            if (++digit[b] < blocks[b].options.size()) break;
            digit[b] = 0;
            if (b == 0) return out;
        }
        if (blocks.empty()) return out;
    }
}

KrausChannel KrausChannel::make(int dim, std::vector<KrausElement> elements,
                                double completeness_tol) {
    if (dim < 1) throw InvalidStateError("channel dimension must be positive");
    if (elements.empty()) throw InvalidStateError("channel needs at least one element");
    double total = 0.0;
    for (const KrausElement& e : elements) {
        if (!(e.probability >= 0.0) || e.probability > 1.0 + completeness_tol)
            throw InvalidStateError("element probability outside [0, 1]");
        if (e.unitary.dim() != dim)
            throw DimensionMismatchError("element dimension differs from channel dimension");
        total += e.probability;
    }
    if (std::abs(total - 1.0) > completeness_tol)
        throw InvalidStateError("element probabilities do not sum to one");
    return KrausChannel(dim, std::move(elements));
}

KrausChannel KrausChannel::identity(int dim) {
    std::vector<int> id(static_cast<std::size_t>(dim));
    std::iota(id.begin(), id.end(), 0);
    std::vector<KrausElement> e;
    e.push_back({1.0, 0, PermutationUnitary::from_perm(std::move(id))});
    return KrausChannel(dim, std::move(e));
}

std::string scenario_label(Scenario s) {
    switch (s) {
        case Scenario::Uniform: return "uniform";
        case Scenario::Simplified: return "simplified";
        case Scenario::Custom: return "custom";
    }
    return "unknown";
}

MapSchedule MapSchedule::uniform(int n, int s) {
    return MapSchedule(Scenario::Uniform, n, s, enumerate_block_permutations(n, s), {});
}

MapSchedule MapSchedule::simplified() {
    return MapSchedule(Scenario::Simplified, 4, 2, enumerate_block_permutations(4, 2), {});
}

MapSchedule MapSchedule::custom(int n, int s, std::vector<double> weights) {
    auto perms = enumerate_block_permutations(n, s);
    if (weights.size() + 1 != perms.size())
        throw DimensionMismatchError("need one weight per non-identity permutation");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidStateError("negative custom weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kCompletenessTol)
        throw InvalidStateError("custom weights do not sum to one");
    return MapSchedule(Scenario::Custom, n, s, std::move(perms), std::move(weights));
}

std::string MapSchedule::label() const {
    std::string base = scenario_label(scenario_);
    if (scenario_ != Scenario::Simplified)
        base += "(" + std::to_string(n_) + "," + std::to_string(s_) + ")";
    return base;
}

std::optional<double> MapSchedule::smallest_weight() const {
    switch (scenario_) {
        case Scenario::Uniform:
            return 1.0 / static_cast<double>(perms_.size());
        case Scenario::Simplified:
            return 0.5;
        case Scenario::Custom: {
            // Defined only when the nonzero weights are all equal.
            double w0 = -1.0;
            int nonzero = 0;
            for (double w : weights_) {
                if (w == 0.0) continue;
                ++nonzero;
                if (w0 < 0.0) w0 = w;
                else if (std::abs(w - w0) > 1e-12) return std::nullopt;
            }
            if (nonzero == 0) return std::nullopt;
            return 1.0 / static_cast<double>(nonzero + 1);
        }
    }
    return std::nullopt;
}

std::optional<double> MapSchedule::minimum_readability_t() const {
    const std::optional<double> w = smallest_weight();
    if (!w.has_value()) return std::nullopt;
    if (perms_.size() == 1) return std::nullopt;  // identity-only set never mixes
    return 1.0 - *w;
}

KrausChannel MapSchedule::channel_at(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw OutOfRangeTError("mixing parameter outside [0, 1]");

    const std::size_t p = perms_.size();
    std::vector<double> prob(p, 0.0);
    if (p == 1) {
        prob[0] = 1.0;
    } else {
        switch (scenario_) {
            case Scenario::Uniform: {
                prob[0] = 1.0 - t;
                const double each = t / static_cast<double>(p - 1);
                for (std::size_t k = 1; k < p; ++k) prob[k] = each;
                break;
            }
            case Scenario::Simplified:
                prob[0] = 1.0 - t;
                prob[3] = t;
                break;
            case Scenario::Custom:
                prob[0] = 1.0 - t;
                for (std::size_t k = 1; k < p; ++k) prob[k] = t * weights_[k - 1];
                break;
        }
    }

    std::vector<KrausElement> elements;
    for (std::size_t k = 0; k < p; ++k) {
        if (prob[k] <= 0.0) continue;
        elements.push_back({prob[k], static_cast<int>(k), perms_[k]});
    }
    return KrausChannel::make(n_, std::move(elements));
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
    if (channel.dim() != rho.dim())
        throw DimensionMismatchError("channel and state dimensions differ");
    const int d = rho.dim();
    ComplexMatrix out(d, d);
    for (const KrausElement& e : channel.elements()) {
        const auto& p = e.unitary.perm;
        const Complex w{e.probability, 0.0};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) +=
                    w * rho.matrix()(i, j);
    }
    return DensityMatrix::unchecked(std::move(out));
}

PureState apply_unitary(const PermutationUnitary& u, const PureState& psi) {
    if (u.dim() != psi.dim()) throw DimensionMismatchError("unitary and state dimensions differ");
    std::vector<Complex> out(static_cast<std::size_t>(psi.dim()));
    for (int j = 0; j < psi.dim(); ++j) out[static_cast<std::size_t>(u.image(j))] = psi[j];
    return PureState::make(std::move(out));
}

ComplexMatrix superoperator(const KrausChannel& channel) {
    const int d = channel.dim();
    ComplexMatrix m(d * d, d * d);
    for (const KrausElement& e : channel.elements())
        m.add_scaled(Complex{e.probability, 0.0},
                     kron(e.unitary.matrix.conjugate(), e.unitary.matrix));
    return m;
}

ComplexMatrix choi_matrix(const KrausChannel& channel) {
    const int d = channel.dim();
    ComplexMatrix c(d * d, d * d);
    for (const KrausElement& e : channel.elements()) {
        const auto& p = e.unitary.perm;
        const Complex w{e.probability, 0.0};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                c(i * d + p[static_cast<std::size_t>(i)], j * d + p[static_cast<std::size_t>(j)]) +=
                    w;
    }
    return c;
}

ComplexMatrix choi_from_superoperator(const ComplexMatrix& m) {
    if (!m.is_square()) throw NonSquareError("superoperator must be square");
    const int d2 = m.rows();
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
    if (d * d != d2) throw DimensionMismatchError("superoperator side is not a perfect square");
    ComplexMatrix c(d2, d2);
    // vec(Phi(E_ij)) is column j*d+i of the superoperator under column stacking.
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int r = 0; r < d; ++r)
                for (int col = 0; col < d; ++col)
                    c(i * d + r, j * d + col) = m(col * d + r, j * d + i);
    return c;
}

std::string verdict_label(CpVerdict v) {
    switch (v) {
        case CpVerdict::CP: return "CP";
        case CpVerdict::NotCP: return "NotCP";
        case CpVerdict::Indeterminate: return "Indeterminate";
    }
    return "unknown";
}

IntermediateMap intermediate_map(const MapSchedule& schedule, double s_time, double t_time,
                                 double rank_tol) {
    if (!(s_time >= 0.0 && s_time <= t_time && t_time <= 1.0))
        throw OutOfRangeTError("need 0 <= s_time <= t_time <= 1");

    const ComplexMatrix ms = superoperator(schedule.channel_at(s_time));
    const ComplexMatrix mt = superoperator(schedule.channel_at(t_time));

    int rank = 0;
    const ComplexMatrix ms_pinv = pseudo_inverse(ms, rank_tol, &rank);

    IntermediateMap out;
    out.superop = mt * ms_pinv;
    out.rank_s = rank;

    ComplexMatrix choi = choi_from_superoperator(out.superop);
    // The composition is real up to roundoff; symmetrize before the solve.
    const int n = choi.rows();
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (choi(i, j) + std::conj(choi(j, i)));
    const EigenDecomposition ed = hermitian_eig(h, 1e-8);
    out.min_choi_eigenvalue = ed.eigenvalues.back();

    if (rank < ms.rows())
        out.verdict = CpVerdict::Indeterminate;
    else
        out.verdict = out.min_choi_eigenvalue >= -1e-10 ? CpVerdict::CP : CpVerdict::NotCP;
    return out;
}

int sample_unitary(const KrausChannel& channel, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    const auto& elems = channel.elements();
    for (const KrausElement& e : elems) {
        acc += e.probability;
        if (u < acc) return e.perm_index;
    }
    return elems.back().perm_index;
}

}  // namespace qv
