#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kob {

// Deterministic seeded randomness. One stream per (seed, stream_id) pair;
// replicate r of a Monte Carlo run always uses stream_id = base + r, so results
// are bit-identical regardless of how replicates are scheduled across threads.
//
// The generator is pcg64 (XSL-RR 128/64, O'Neill). stream_id selects the LCG
// increment, which is the pcg multi-stream mechanism; different increments give
// statistically independent sequences.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double uniform01();
    // Uniform on (0,1); safe as a log() argument.
    double uniform_open();
    // Standard normal via Box-Muller, second value cached.
    double normal();
    bool bernoulli(double p);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    using u128 = unsigned __int128;
    u128 state_;
    u128 inc_;
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 step; used to derive stream seeds and to hash tags into stream ids.
std::uint64_t splitmix64(std::uint64_t& state);

// 64-bit FNV-1a of a string; stable way to carve stream-id namespaces per experiment.
std::uint64_t stream_tag(const char* tag);

struct SummaryStats {
    long count = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

// Sample mean and std_error = sample standard deviation / sqrt(count).
// Requires at least two samples.
SummaryStats summarize(std::span<const double> samples);

// L >= 1 with P(L = k) = (3/4)^(k-1) * (1/4). Uses exact two-bit trials,
// no floating point.
int sample_geometric_quarter(RandomStream& rng);

// Binomial(n, p) by CDF inversion for small n*p and the BTRS transformed
// rejection of Hoermann for large; both exact samplers.
long sample_binomial(long n, double p, RandomStream& rng);

// Hypergeometric: number of successes among `draws` taken without replacement
// from `total` items of which `successes` are marked. Sequential draw-by-draw
// construction: exact, O(draws).
long sample_hypergeometric(long total, long draws, long successes, RandomStream& rng);

// Order-n Bernstein basis at y: component i = C(n,i) y^i (1-y)^(n-i).
// Degree-raising recurrence: no factorials, components sum to 1 to machine
// precision; degrees up to 1e4 supported.
std::vector<double> bernstein_basis(int n, double y);

// log C(n, k) via lgamma.
double log_choose(double n, double k);

} // namespace kob
