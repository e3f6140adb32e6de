#include "kob/random.hpp"

#include <cmath>
#include <stdexcept>

namespace kob {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_tag(const char* tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char* c = tag; *c; ++c) {
        h ^= static_cast<unsigned char>(*c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

namespace {
constexpr unsigned __int128 pcg_mult() {
    return (static_cast<unsigned __int128>(2549297995355413924ULL) << 64) |
           4865540595714422341ULL;
}
} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Expand (seed, stream_id) into a 128-bit init state and a 128-bit stream
    // selector through splitmix64 so nearby ids land far apart.
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    std::uint64_t t = stream_id ^ 0xDA3E39CB94B95BDBULL;
    std::uint64_t c = splitmix64(t);
    std::uint64_t d = splitmix64(t);
    u128 init_state = (static_cast<u128>(a) << 64) | b;
    u128 init_seq = (static_cast<u128>(c) << 64) | d;

    state_ = 0;
    inc_ = (init_seq << 1) | 1; // must be odd
    next_u64();
    state_ += init_state;
    next_u64();
}

std::uint64_t RandomStream::next_u64() {
    state_ = state_ * pcg_mult() + inc_;
    std::uint64_t xored = static_cast<std::uint64_t>(state_ >> 64) ^
                          static_cast<std::uint64_t>(state_);
    unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((-rot) & 63u));
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform_open();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

bool RandomStream::bernoulli(double p) {
    return uniform01() < p;
}

SummaryStats summarize(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("summarize requires at least 2 samples");
    const long n = static_cast<long>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {n, mean, sd / std::sqrt(static_cast<double>(n))};
}

int sample_geometric_quarter(RandomStream& rng) {
    // Each disjoint bit pair of a draw is an exact 1/4-probability trial.
    int k = 1;
    for (;;) {
        std::uint64_t w = rng.next_u64();
        for (int i = 0; i < 32; ++i) {
            if (((w >> (2 * i)) & 3u) == 0) return k;
            ++k;
        }
    }
}

namespace {

// CDF inversion; exact for the regime n * min(p,1-p) modest where (1-p)^n
// does not underflow.
long binomial_inversion(long n, double p, RandomStream& rng) {
    const double q = 1.0 - p;
    double pmf = std::pow(q, static_cast<double>(n));
    double cdf = pmf;
    const double u = rng.uniform01();
    long j = 0;
    const double ratio = p / q;
    while (u > cdf && j < n) {
        pmf *= static_cast<double>(n - j) / static_cast<double>(j + 1) * ratio;
        cdf += pmf;
        ++j;
    }
    return j;
}

// BTRS transformed rejection (Hoermann 1993), exact accept test via lgamma.
// Requires p <= 1/2 and n*p >= 10.
long binomial_btrs(long n, double p, RandomStream& rng) {
    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    const double spq = std::sqrt(nd * p * q);
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = nd * p + 0.5;
    const double vr = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(p / q);
    const long m = static_cast<long>(std::floor((nd + 1.0) * p));
    const double h = std::lgamma(static_cast<double>(m) + 1.0) +
                     std::lgamma(static_cast<double>(n - m) + 1.0);
    for (;;) {
        double u = rng.uniform01() - 0.5;
        double v = rng.uniform01();
        double us = 0.5 - std::fabs(u);
        long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + c));
        if (us >= 0.07 && v <= vr) {
            if (k >= 0 && k <= n) return k;
            continue;
        }
        if (k < 0 || k > n) continue;
        v = std::log(v * alpha / (a / (us * us) + b));
        double accept = h - std::lgamma(static_cast<double>(k) + 1.0) -
                        std::lgamma(static_cast<double>(n - k) + 1.0) +
                        (static_cast<double>(k - m)) * lpq;
        if (v <= accept) return k;
    }
}

} // namespace

long sample_binomial(long n, double p, RandomStream& rng) {
    if (n < 0 || p < 0.0 || p > 1.0)
        throw std::invalid_argument("sample_binomial: need n >= 0 and p in [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
    if (static_cast<double>(n) * p < 10.0) return binomial_inversion(n, p, rng);
    return binomial_btrs(n, p, rng);
}

long sample_hypergeometric(long total, long draws, long successes, RandomStream& rng) {
    if (draws > total || successes > total || draws < 0 || successes < 0)
        throw std::invalid_argument("sample_hypergeometric: invalid parameters");
    long hits = 0;
    long remaining = total;
    long marked = successes;
    for (long i = 0; i < draws; ++i) {
        if (rng.uniform01() * static_cast<double>(remaining) < static_cast<double>(marked)) {
            ++hits;
            --marked;
        }
        --remaining;
    }
    return hits;
}

std::vector<double> bernstein_basis(int n, double y) {
    if (n < 0) throw std::invalid_argument("bernstein_basis: negative degree");
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[0] = 1.0;
    const double z = 1.0 - y;
    for (int m = 1; m <= n; ++m) {
        b[static_cast<std::size_t>(m)] = y * b[static_cast<std::size_t>(m - 1)];
        for (int i = m - 1; i >= 1; --i)
            b[static_cast<std::size_t>(i)] =
                y * b[static_cast<std::size_t>(i - 1)] + z * b[static_cast<std::size_t>(i)];
        b[0] *= z;
    }
    return b;
}

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace kob
