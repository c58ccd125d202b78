#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qv/complex_matrix.hpp"
#include "qv/rng.hpp"
#include "qv/states.hpp"

namespace qv {

// U|j> = |perm[j]>, i.e. matrix(perm[j], j) = 1.
struct PermutationUnitary {
    std::vector<int> perm;
    ComplexMatrix matrix;

    static PermutationUnitary from_perm(std::vector<int> perm);
    PermutationUnitary inverse() const;
    int image(int j) const { return perm[static_cast<std::size_t>(j)]; }
    int dim() const { return static_cast<int>(perm.size()); }
};

// Permutations that fix the consecutive blocks {0..s-1}, {s..2s-1}, ... of an
// n-element set, acting freely inside each block and on the remainder block.
// Enumeration order is lexicographic in one-line notation; the identity is
// always element 0.
std::vector<PermutationUnitary> enumerate_block_permutations(int n, int s);
unsigned long long block_permutation_count(int n, int s);

// Smallest nonzero weight a full evolution can place on one permutation,
// 1 / block_permutation_count.
double p_min(int n, int s);

struct KrausElement {
    double probability;
    // Position in the owning schedule's permutation list; identifies which
    // unitary fired independently of zero-weight elements being dropped.
    int perm_index;
    PermutationUnitary unitary;
};

class KrausChannel {
public:
    static KrausChannel make(int dim, std::vector<KrausElement> elements,
                             double completeness_tol = kCompletenessTol);
    static KrausChannel identity(int dim);

    int dim() const { return dim_; }
    const std::vector<KrausElement>& elements() const { return elements_; }

private:
    KrausChannel(int dim, std::vector<KrausElement> elements)
        : dim_(dim), elements_(std::move(elements)) {}
    int dim_;
    std::vector<KrausElement> elements_;
};

enum class Scenario { Uniform, Simplified, Custom };

std::string scenario_label(Scenario s);

// A one-parameter family of permutation channels. The identity keeps weight
// 1-t and the remaining weight t is spread over the non-identity permutations
// according to the scenario. A single-permutation set (s = 1) has nowhere to
// put the mixing weight and stays the identity channel at every t.
class MapSchedule {
public:
    static MapSchedule uniform(int n, int s);
    // n=4, s=2 with all weight on the block-pair swap: (1-t, 0, 0, t).
    static MapSchedule simplified();
    // weights: distribution over the non-identity permutations, must sum to 1.
    static MapSchedule custom(int n, int s, std::vector<double> weights);

    KrausChannel channel_at(double t) const;
    const std::vector<PermutationUnitary>& permutations() const { return perms_; }

    Scenario scenario() const { return scenario_; }
    int n() const { return n_; }
    int s() const { return s_; }
    std::string label() const;

    // Identity weight at full mixing; the readability minimum sits at
    // t = 1 - p_min for the uniform and simplified scenarios.
    std::optional<double> smallest_weight() const;
    std::optional<double> minimum_readability_t() const;

private:
    MapSchedule(Scenario sc, int n, int s, std::vector<PermutationUnitary> perms,
                std::vector<double> weights)
        : scenario_(sc), n_(n), s_(s), perms_(std::move(perms)), weights_(std::move(weights)) {}

    Scenario scenario_;
    int n_;
    int s_;
    std::vector<PermutationUnitary> perms_;
    std::vector<double> weights_;  // custom scenario only, over non-identity perms
};

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);
PureState apply_unitary(const PermutationUnitary& u, const PureState& psi);

// Column-stacking superoperator, sum_k p_k conj(U_k) (x) U_k.
ComplexMatrix superoperator(const KrausChannel& channel);
ComplexMatrix choi_matrix(const KrausChannel& channel);
ComplexMatrix choi_from_superoperator(const ComplexMatrix& m);

enum class CpVerdict { CP, NotCP, Indeterminate };

std::string verdict_label(CpVerdict v);

struct IntermediateMap {
    ComplexMatrix superop;  // M_t * pinv(M_s)
    double min_choi_eigenvalue;
    int rank_s;  // numerical rank of M_s
    CpVerdict verdict;
};

// Two-point intermediate map between s_time and t_time. When M_s is rank
// deficient the pseudo-inverse branch is not unique and the verdict is
// Indeterminate.
IntermediateMap intermediate_map(const MapSchedule& schedule, double s_time, double t_time,
                                 double rank_tol = 1e-10);

// Draws the index of the permutation that fires, with the channel's weights.
// Returned indices refer to the schedule's permutation list.
int sample_unitary(const KrausChannel& channel, Rng& rng);

}  // namespace qv
