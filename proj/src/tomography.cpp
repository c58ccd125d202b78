#include "qv/tomography.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "qv/eig.hpp"
#include "qv/kernels.hpp"

namespace qv {

namespace {

constexpr double kProbFloor = 1e-15;

Complex i_power(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return Complex{1.0, 0.0};
        case 1: return Complex{0.0, 1.0};
        case 2: return Complex{-1.0, 0.0};
        default: return Complex{0.0, -1.0};
    }
}

std::vector<PureState> basis_from_exponents(const int (&table)[4][4]) {
    std::vector<PureState> states;
    states.reserve(4);
    for (int r = 0; r < 4; ++r) {
        std::vector<Complex> amp(4);
        for (int c = 0; c < 4; ++c) amp[static_cast<std::size_t>(c)] = 0.5 * i_power(table[r][c]);
        states.push_back(PureState::make(std::move(amp)));
    }
    return states;
}

}  // namespace

MubSet build_mubs_d4() {
    MubSet set;
    set.bases.reserve(5);

    std::vector<PureState> computational;
    for (int k = 0; k < 4; ++k) computational.push_back(PureState::computational(4, k));
    set.bases.push_back(std::move(computational));

    const auto& enc = encoding_basis_d4();
    set.bases.push_back({enc[0], enc[1], enc[2], enc[3]});

    // Remaining bases as powers of i over 1/2-normalized rows.
    static constexpr int b2[4][4] = {{0, 0, 0, 0}, {0, 0, 2, 2}, {0, 2, 2, 0}, {0, 2, 0, 2}};
    static constexpr int b3[4][4] = {{0, 2, 3, 3}, {0, 2, 1, 1}, {0, 0, 1, 3}, {0, 0, 3, 1}};
    static constexpr int b4[4][4] = {{0, 3, 2, 3}, {0, 3, 0, 1}, {0, 1, 0, 3}, {0, 1, 2, 1}};
    set.bases.push_back(basis_from_exponents(b2));
    set.bases.push_back(basis_from_exponents(b3));
    set.bases.push_back(basis_from_exponents(b4));

    // Exhaustive construction check; failure here is a programming error but
    // is reported through the usual channel so callers can trust the set.
    for (const auto& basis : set.bases) {
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const Complex ip = kernels::active().dotc(basis[static_cast<std::size_t>(a)].amplitudes().data(),
                                                          basis[static_cast<std::size_t>(b)].amplitudes().data(), 4);
                const double want = a == b ? 1.0 : 0.0;
                if (std::abs(std::abs(ip) - want) > 1e-12)
                    throw ConstructionFailureError("basis is not orthonormal");
            }
        }
    }
    for (std::size_t ba = 0; ba < 5; ++ba) {
        for (std::size_t bb = ba + 1; bb < 5; ++bb) {
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    const Complex ip =
                        kernels::active().dotc(set.bases[ba][static_cast<std::size_t>(a)].amplitudes().data(),
                                               set.bases[bb][static_cast<std::size_t>(b)].amplitudes().data(), 4);
                    if (std::abs(std::norm(ip) - 0.25) > 1e-10)
                        throw ConstructionFailureError("basis pair is not mutually unbiased");
                }
            }
        }
    }
    return set;
}

std::array<double, 4> born_probabilities(const DensityMatrix& rho,
                                         std::span<const PureState> basis) {
    if (basis.size() != 4 || rho.dim() != 4)
        throw DimensionMismatchError("born probabilities expect a d=4 basis");
    std::array<double, 4> p{};
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<Complex> mv(4);
        for (int i = 0; i < 4; ++i)
            mv[static_cast<std::size_t>(i)] = kernels::active().dotu(
                rho.matrix().row(i).data(), basis[k].amplitudes().data(), 4);
        const double v =
            kernels::active().dotc(basis[k].amplitudes().data(), mv.data(), 4).real();
        if (v < -1e-12) throw InvalidStateError("negative Born probability");
        p[k] = v < 0.0 ? 0.0 : v;
    }
    return p;
}

CountRecord simulate_counts(const DensityMatrix& rho, const MubSet& mubs, long long shots_per_basis,
                            NoiseMode mode, Rng& rng) {
    if (shots_per_basis < 1) throw InvalidStateError("need at least one shot per basis");
    CountRecord rec;
    rec.shots_per_basis = shots_per_basis;
    rec.mode = mode;
    rec.counts.reserve(mubs.bases.size());
    for (const auto& basis : mubs.bases) {
        const std::array<double, 4> p = born_probabilities(rho, basis);
        std::array<long long, 4> row{};
        if (mode == NoiseMode::Multinomial) {
            // Sequential binomial split keeps the row sum exact.
            long long remaining = shots_per_basis;
            double mass = 1.0;
            for (int k = 0; k < 3; ++k) {
                const double q = mass > 0.0 ? std::min(std::max(p[static_cast<std::size_t>(k)] / mass, 0.0), 1.0) : 0.0;
                const long long n = rng.binomial(remaining, q);
                row[static_cast<std::size_t>(k)] = n;
                remaining -= n;
                mass -= p[static_cast<std::size_t>(k)];
            }
            row[3] = remaining;
        } else {
            for (int k = 0; k < 4; ++k)
                row[static_cast<std::size_t>(k)] =
                    rng.poisson(static_cast<double>(shots_per_basis) * p[static_cast<std::size_t>(k)]);
        }
        rec.counts.push_back(row);
    }
    return rec;
}

MleResult mle_reconstruct(const CountRecord& counts, const MubSet& mubs, int max_iterations,
                          double tol) {
    if (counts.counts.size() != mubs.bases.size())
        throw DimensionMismatchError("count rows do not match basis count");
    double total = 0.0;
    for (const auto& row : counts.counts)
        for (long long n : row) {
            if (n < 0) throw InvalidStateError("negative count");
            total += static_cast<double>(n);
        }
    if (total <= 0.0) throw InvalidStateError("no counts to reconstruct from");

    const int d = 4;
    ComplexMatrix rho = ComplexMatrix::identity(d);
    rho *= Complex{1.0 / d, 0.0};

    double prev_ll = 0.0;
    double ll = 0.0;
    bool converged = false;
    int iterations = 0;

    for (int it = 0; it < max_iterations; ++it) {
        ll = 0.0;
        ComplexMatrix r(d, d);
        for (std::size_t b = 0; b < mubs.bases.size(); ++b) {
            for (int k = 0; k < 4; ++k) {
                const long long n = counts.counts[b][static_cast<std::size_t>(k)];
                if (n == 0) continue;
                const PureState& psi = mubs.bases[b][static_cast<std::size_t>(k)];
                std::vector<Complex> mv(4);
                for (int i = 0; i < 4; ++i)
                    mv[static_cast<std::size_t>(i)] =
                        kernels::active().dotu(rho.row(i).data(), psi.amplitudes().data(), 4);
                double p = kernels::active().dotc(psi.amplitudes().data(), mv.data(), 4).real();
                if (p < kProbFloor) p = kProbFloor;
                ll += static_cast<double>(n) * std::log(p);
                const Complex w{static_cast<double>(n) / (total * p), 0.0};
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        r(i, j) += w * psi[i] * std::conj(psi[j]);
            }
        }
        if (it > 0 && ll - prev_ll < tol) {
            converged = true;
            break;
        }
        prev_ll = ll;

        rho = r * rho * r;
        // Renormalize and fold away the product roundoff each step.
        ComplexMatrix h(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) h(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
        const double tr = h.trace().real();
        if (!(tr > 0.0)) throw InvalidStateError("reconstruction lost its trace");
        h *= Complex{1.0 / tr, 0.0};
        rho = std::move(h);
        ++iterations;
    }

    return MleResult{DensityMatrix::make(std::move(rho)), iterations, ll, converged};
}

MonteCarloStats monte_carlo_errors(const CountRecord& counts, const MubSet& mubs, int replicas,
                                   const std::function<double(const DensityMatrix&)>& statistic,
                                   Rng& rng, int max_iterations, double tol) {
    if (replicas < 2) throw InvalidStateError("need at least two bootstrap replicas");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        Rng stream = rng.child(static_cast<std::uint64_t>(r));
        CountRecord resampled = counts;
        resampled.mode = NoiseMode::Poisson;
        for (auto& row : resampled.counts)
            for (long long& n : row) n = stream.poisson(static_cast<double>(n));
        const MleResult fit = mle_reconstruct(resampled, mubs, max_iterations, tol);
        values.push_back(statistic(fit.rho));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size() - 1);
    return MonteCarloStats{mean, std::sqrt(var)};
}

void write_counts_csv(std::ostream& os, const CountRecord& counts, const MetaBlock* meta) {
    if (meta != nullptr) os << comment_block(*meta);
    os << "# shots_per_basis=" << counts.shots_per_basis << "\n";
    os << "# mode=" << (counts.mode == NoiseMode::Multinomial ? "multinomial" : "poisson") << "\n";
    os << "basis,outcome,count\n";
    for (std::size_t b = 0; b < counts.counts.size(); ++b)
        for (int k = 0; k < 4; ++k)
            os << b << "," << k << "," << counts.counts[b][static_cast<std::size_t>(k)] << "\n";
}

CountRecord read_counts_csv(std::istream& is) {
    CountRecord rec;
    rec.shots_per_basis = -1;
    std::string line;
    std::vector<std::array<long long, 4>> rows;
    std::vector<std::array<bool, 4>> seen;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (csv_skippable(line)) {
            const std::size_t eq = line.find('=');
            if (line.find("shots_per_basis") != std::string::npos && eq != std::string::npos)
                rec.shots_per_basis = std::stoll(line.substr(eq + 1));
            if (line.find("mode=poisson") != std::string::npos) rec.mode = NoiseMode::Poisson;
            continue;
        }
        const auto f = split_csv(line);
        if (!header_seen && !f.empty() && f[0] == "basis") {
            header_seen = true;
            continue;
        }
        if (f.size() != 3) throw MalformedFileError("expected basis,outcome,count");
        long long b = 0, k = 0, n = 0;
        try {
            b = std::stoll(f[0]);
            k = std::stoll(f[1]);
            n = std::stoll(f[2]);
        } catch (const std::exception&) {
            throw MalformedFileError("unparsable count row");
        }
        if (b < 0 || k < 0 || k > 3 || n < 0) throw MalformedFileError("count row out of range");
        if (static_cast<std::size_t>(b) >= rows.size()) {
            rows.resize(static_cast<std::size_t>(b) + 1, {0, 0, 0, 0});
            seen.resize(static_cast<std::size_t>(b) + 1, {false, false, false, false});
        }
        if (seen[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)])
            throw MalformedFileError("duplicate count row");
        seen[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] = true;
        rows[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] = n;
    }
    if (rows.empty()) throw MalformedFileError("empty count file");
    for (const auto& s : seen)
        for (bool present : s)
            if (!present) throw MalformedFileError("count file misses an outcome");
    rec.counts = std::move(rows);
    if (rec.shots_per_basis < 0) {
        long long sum = 0;
        for (long long n : rec.counts[0]) sum += n;
        rec.shots_per_basis = sum;
    }
    return rec;
}

void write_mub_csv(std::ostream& os, const MubSet& mubs, const MetaBlock* meta) {
    if (meta != nullptr) os << comment_block(*meta);
    os << "basis,state,component,re,im\n";
    for (std::size_t b = 0; b < mubs.bases.size(); ++b)
        for (std::size_t k = 0; k < mubs.bases[b].size(); ++k)
            for (int c = 0; c < mubs.bases[b][k].dim(); ++c)
                os << b << "," << k << "," << c << "," << format_sig(mubs.bases[b][k][c].real())
                   << "," << format_sig(mubs.bases[b][k][c].imag()) << "\n";
}

}  // namespace qv
