#pragma once

// Test-side oracles kept independent of the library implementation paths:
// combinatorics via Pascal's triangle, pmfs by direct formula, exact rational
// arithmetic for level recursions, and a chi-square helper.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

inline double choose(long n, long k) {
    if (k < 0 || k > n) return 0.0;
    std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
    row[0] = 1.0;
    for (long i = 1; i <= n; ++i)
        for (long j = i; j >= 1; --j)
            row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    return row[static_cast<std::size_t>(k)];
}

inline double binomial_pmf(long n, long k, double p) {
    if (k < 0 || k > n) return 0.0;
    return choose(n, k) * std::pow(p, static_cast<double>(k)) *
           std::pow(1.0 - p, static_cast<double>(n - k));
}

// P(X = k) for k successes among `draws` taken without replacement from
// `total` items containing `successes` marked ones.
inline double hypergeometric_pmf(long total, long draws, long successes, long k) {
    if (k < 0 || k > draws || k > successes) return 0.0;
    if (draws - k > total - successes) return 0.0;
    return choose(successes, k) * choose(total - successes, draws - k) / choose(total, draws);
}

// Pearson chi-square statistic against expected probabilities; cells with
// expected count below 5 must be merged by the caller.
inline double chi_square_stat(const std::vector<long>& counts,
                              const std::vector<double>& probs, long n) {
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expct = probs[i] * static_cast<double>(n);
        const double d = static_cast<double>(counts[i]) - expct;
        stat += d * d / expct;
    }
    return stat;
}

inline double chi_square_critical(int df, double significance) {
    return boost::math::quantile(boost::math::chi_squared(df), 1.0 - significance);
}

// Exact rational arithmetic over 64-bit numerator/denominator with gcd
// reduction; throws on overflow risk. Enough for small-eta level recursions.
struct Fraction {
    long long num = 0;
    long long den = 1;

    Fraction() = default;
    Fraction(long long n, long long d = 1) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw std::invalid_argument("zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static long long checked_mul(long long a, long long b) {
        long long out = 0;
        if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("fraction overflow");
        return out;
    }

    Fraction operator+(const Fraction& o) const {
        return Fraction(checked_mul(num, o.den) + checked_mul(o.num, den),
                        checked_mul(den, o.den));
    }
    Fraction operator-(const Fraction& o) const {
        return Fraction(checked_mul(num, o.den) - checked_mul(o.num, den),
                        checked_mul(den, o.den));
    }
    Fraction operator*(const Fraction& o) const {
        return Fraction(checked_mul(num, o.num), checked_mul(den, o.den));
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator>=(const Fraction& o) const {
        return checked_mul(num, o.den) >= checked_mul(o.num, den);
    }
};

inline Fraction fraction_pow(Fraction base, long e) {
    Fraction out(1);
    for (long i = 0; i < e; ++i) out = out * base;
    return out;
}

} // namespace oracle
