#include "kob/factory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace kob {

namespace {

// Inclusive indicator ties at exactly 1/2, with this much slack toward inclusion.
constexpr double kTieTolerance = 1e-12;
constexpr double kEndpointEps = 1e-12;

// P(Bin(eta, p) >= j) through the regularized incomplete beta function.
double binomial_upper_tail(long eta, long j, double p) {
    if (j <= 0) return 1.0;
    if (j > eta) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return boost::math::ibeta(static_cast<double>(j), static_cast<double>(eta - j + 1), p);
}

// f_k(p) from the target and the stored tables of levels < k:
//   f_1 = f,   f_{m+1} = (4/3) (f_m - (1/4) P(f_m(mean of eta_m coins) >= 1/2)).
double level_value(const TargetFunction& f, const std::vector<FactoryLevel>& levels,
                   int k, double p) {
    double v = f(p);
    for (int m = 1; m < k; ++m)
        v = (4.0 / 3.0) * (v - 0.25 * indicator_polynomial(levels[static_cast<std::size_t>(m - 1)], p));
    return v;
}

struct Candidate {
    bool ok = false;
    std::vector<std::uint8_t> indicator;
    std::vector<std::pair<long, long>> blocks;
};

class Builder {
public:
    Builder(const TargetFunction& f, const EtaSearchConfig& cfg) : f_(f), cfg_(cfg) {
        if (cfg.grid_points < 3)
            throw std::invalid_argument("build_table: grid_points must be >= 3");
        if (cfg.tolerance < 0.0)
            throw std::invalid_argument("build_table: tolerance must be >= 0");
        const int n = cfg.grid_points;
        grid_.resize(static_cast<std::size_t>(n));
        fk_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            grid_[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
            fk_[static_cast<std::size_t>(i)] = f(grid_[static_cast<std::size_t>(i)]);
        }
        delta_ = 1.0 / (n - 1);
        lip_ = f.lipschitz_bound;
    }

    bool degenerate_constant(int& which) const {
        bool all0 = true, all1 = true;
        for (double v : fk_) {
            all0 = all0 && v == 0.0;
            all1 = all1 && v == 1.0;
        }
        which = all0 ? 0 : 1;
        return all0 || all1;
    }

    FactoryTable build() {
        for (int k = 1; k <= cfg_.level_cap; ++k) {
            check_range(k);
            long tried = 0;
            auto [eta, cand] = search_eta(k, tried);
            FactoryLevel lvl;
            lvl.index = k;
            lvl.eta = eta;
            lvl.indicator = std::move(cand.indicator);
            lvl.one_blocks = std::move(cand.blocks);
            lvl.lipschitz = lip_;
            advance_grid(lvl);
            levels_.push_back(std::move(lvl));
            notes_.push_back({k, cfg_.mode == CertMode::certified, tried});
            lip_ = (4.0 / 3.0) * (lip_ + static_cast<double>(eta) / 4.0);
        }
        return FactoryTable::from_parts(f_, cfg_, std::move(levels_), -1, std::move(notes_));
    }

private:
    void check_range(int k) {
        for (std::size_t i = 0; i < fk_.size(); ++i) {
            const double v = fk_[i];
            if (v < -cfg_.tolerance || v > 1.0 + cfg_.tolerance)
                throw LevelRangeViolation(k, v, grid_[i]);
        }
    }

    void advance_grid(const FactoryLevel& lvl) {
        for (std::size_t i = 0; i < fk_.size(); ++i)
            fk_[i] = (4.0 / 3.0) * (fk_[i] - 0.25 * indicator_polynomial(lvl, grid_[i]));
    }

    std::pair<long, Candidate> search_eta(int k, long& tried) {
        long fail_below = 0;
        long pass_eta = 0;
        Candidate pass;
        for (long eta = 1; eta <= cfg_.eta_max; eta *= 2) {
            ++tried;
            Candidate c = certify(k, eta);
            if (c.ok) {
                pass_eta = eta;
                pass = std::move(c);
                break;
            }
            fail_below = eta;
            if (eta > cfg_.eta_max / 2) break;
        }
        if (pass_eta == 0) throw EtaSearchExhausted(k, cfg_.eta_max);
        long lo = fail_below, hi = pass_eta;
        while (lo + 1 < hi) {
            const long mid = lo + (hi - lo) / 2;
            ++tried;
            Candidate c = certify(k, mid);
            if (c.ok) {
                hi = mid;
                pass = std::move(c);
            } else {
                lo = mid;
            }
        }
        return {hi, std::move(pass)};
    }

    Candidate certify(int k, long eta) const {
        Candidate c;
        c.indicator.resize(static_cast<std::size_t>(eta) + 1);
        for (long j = 0; j <= eta; ++j) {
            const double v = level_value(f_, levels_, k,
                                         static_cast<double>(j) / static_cast<double>(eta));
            c.indicator[static_cast<std::size_t>(j)] = v >= 0.5 - kTieTolerance ? 1 : 0;
        }
        c.blocks = indicator_blocks(c.indicator);

        FactoryLevel probe;
        probe.index = k;
        probe.eta = eta;
        probe.indicator = c.indicator;
        probe.one_blocks = c.blocks;

        // Endpoints are exact: the mixture reduces to the first/last bit.
        const double g0 = fk_.front() - 0.25 * c.indicator.front();
        const double g1 = fk_.back() - 0.25 * c.indicator.back();
        if (g0 < -kEndpointEps || g0 > 0.75 + kEndpointEps) return c;
        if (g1 < -kEndpointEps || g1 > 0.75 + kEndpointEps) return c;

        const double tol = cfg_.tolerance;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double g = fk_[i] - 0.25 * indicator_polynomial(probe, grid_[i]);
            if (g < -tol || g > 0.75 + tol) return c;
        }
        if (cfg_.mode == CertMode::heuristic) {
            c.ok = true;
            return c;
        }

        // Certified mode: interior Lipschitz margins. The mixture has derivative
        // bounded by eta, so Lip(g) <= L_k + eta/4.
        const double margin = (lip_ + static_cast<double>(eta) / 4.0) * delta_ / 2.0;
        if (margin >= 0.375) return c;
        const double window = 16.0 * delta_;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double p = grid_[i];
            if (p < window || p > 1.0 - window) continue;
            const double g = fk_[i] - 0.25 * indicator_polynomial(probe, p);
            if (g < margin || g > 0.75 - margin) return c;
        }
        if (!check_window(k, probe, true) || !check_window(k, probe, false)) return c;
        c.ok = true;
        return c;
    }

    // Refined end-window check: raw bracket plus the leading-term tail bounds.
    // Near p = 0 the mixture is dominated by its lowest set bit j0 and the
    // complement mixture by its lowest zero bit z0; near p = 1 the mirrored
    // statements hold with exponents counted from the top.
    bool check_window(int k, const FactoryLevel& probe, bool at_zero) const {
        const double tol = cfg_.tolerance;
        const long eta = probe.eta;
        long first_one = -1, last_one = -1, first_zero = -1, last_zero = -1;
        for (long j = 0; j <= eta; ++j) {
            if (probe.indicator[static_cast<std::size_t>(j)]) {
                if (first_one < 0) first_one = j;
                last_one = j;
            } else {
                if (first_zero < 0) first_zero = j;
                last_zero = j;
            }
        }
        const double step = delta_ / 8.0;
        const int nsteps = 128; // covers (0, 16*delta)
        for (int s = 1; s <= nsteps; ++s) {
            const double x = static_cast<double>(s) * step;
            const double p = at_zero ? x : 1.0 - x;
            const double fk = level_value(f_, levels_, k, p);
            const double g = fk - 0.25 * indicator_polynomial(probe, p);
            if (g < -tol || g > 0.75 + tol) return false;
            if (at_zero) {
                if (first_one >= 0) {
                    const double lead = 0.25 * std::exp(log_choose(static_cast<double>(eta),
                                                                   static_cast<double>(first_one)) +
                                                        static_cast<double>(first_one) * std::log(p));
                    if (lead > fk + tol) return false;
                }
                if (first_zero >= 0) {
                    const double lead = 0.25 * std::exp(log_choose(static_cast<double>(eta),
                                                                   static_cast<double>(first_zero)) +
                                                        static_cast<double>(first_zero) * std::log(p));
                    if (lead > 1.0 - fk + tol) return false;
                }
            } else {
                if (last_one >= 0) {
                    const double m1 = static_cast<double>(eta - last_one);
                    const double lead = 0.25 * std::exp(log_choose(static_cast<double>(eta), m1) +
                                                        m1 * std::log(x));
                    if (lead > fk + tol) return false;
                }
                if (last_zero >= 0) {
                    const double m0 = static_cast<double>(eta - last_zero);
                    const double lead = 0.25 * std::exp(log_choose(static_cast<double>(eta), m0) +
                                                        m0 * std::log(x));
                    if (lead > 1.0 - fk + tol) return false;
                }
            }
        }
        return true;
    }

    const TargetFunction& f_;
    EtaSearchConfig cfg_;
    std::vector<double> grid_;
    std::vector<double> fk_;
    std::vector<FactoryLevel> levels_;
    std::vector<FactoryTable::LevelNote> notes_;
    double delta_ = 0.0;
    double lip_ = 0.0;
};

} // namespace

std::vector<std::pair<long, long>> indicator_blocks(const std::vector<std::uint8_t>& bits) {
    std::vector<std::pair<long, long>> blocks;
    const long n = static_cast<long>(bits.size());
    long i = 0;
    while (i < n) {
        if (bits[static_cast<std::size_t>(i)]) {
            long j = i;
            while (j + 1 < n && bits[static_cast<std::size_t>(j + 1)]) ++j;
            blocks.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return blocks;
}

double indicator_polynomial(const FactoryLevel& level, double p) {
    double s = 0.0;
    for (const auto& [a, b] : level.one_blocks)
        s += binomial_upper_tail(level.eta, a, p) - binomial_upper_tail(level.eta, b + 1, p);
    return s;
}

PolyBoundOutcome check_poly_bound(const TargetFunction& f, int n_max, int grid_points) {
    if (n_max < 1) throw std::invalid_argument("check_poly_bound: n_max must be >= 1");
    if (grid_points < 3) throw std::invalid_argument("check_poly_bound: grid too small");
    std::vector<double> minf(static_cast<std::size_t>(grid_points));
    std::vector<double> minp(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        const double p = static_cast<double>(i) / (grid_points - 1);
        const double v = f(p);
        minf[static_cast<std::size_t>(i)] = std::min(v, 1.0 - v);
        minp[static_cast<std::size_t>(i)] = std::min(p, 1.0 - p);
    }
    for (int n = 1; n <= n_max; ++n) {
        bool ok = true;
        for (int i = 0; i < grid_points && ok; ++i)
            ok = minf[static_cast<std::size_t>(i)] + kEndpointEps >=
                 std::pow(minp[static_cast<std::size_t>(i)], n);
        if (ok)
            return PolyBoundCertificate{n, grid_points, PolyBoundCertificate::Mode::certified_grid};
    }
    // Report the worst violation of the weakest (n = n_max) condition.
    double worst = 0.0;
    double witness = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double gap = minf[static_cast<std::size_t>(i)] -
                           std::pow(minp[static_cast<std::size_t>(i)], n_max);
        if (gap < worst) {
            worst = gap;
            witness = static_cast<double>(i) / (grid_points - 1);
        }
    }
    return PolyBoundRejection{witness, worst};
}

void validate_target(const TargetFunction& f, int grid_points, double tol) {
    double prev = 0.0;
    const double delta = 1.0 / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) {
        const double p = static_cast<double>(i) / (grid_points - 1);
        const double v = f(p);
        if (v < -tol || v > 1.0 + tol)
            throw std::invalid_argument("target '" + f.name + "' leaves [0,1] at p = " +
                                        std::to_string(p));
        if (i > 0 && std::fabs(v - prev) > f.lipschitz_bound * delta + 1e-9)
            throw std::invalid_argument("target '" + f.name +
                                        "' violates its Lipschitz bound near p = " +
                                        std::to_string(p));
        prev = v;
    }
}

double FactoryTable::eval_level(int k, double p) const {
    if (degenerate_ >= 0) return static_cast<double>(degenerate_);
    if (k < 1 || k > level_count())
        throw std::invalid_argument("eval_level: level out of range");
    return level_value(target_, levels_, k, p);
}

CoinRequest FactoryTable::announce_then_decide(RandomStream& rng) const {
    if (degenerate_ >= 0) {
        CoinRequest req;
        req.constant = degenerate_;
        return req;
    }
    const int level = sample_geometric_quarter(rng);
    if (level > level_count()) throw LevelCapExceeded(level, level_count());
    const FactoryLevel& lvl = levels_[static_cast<std::size_t>(level - 1)];
    CoinRequest req;
    req.coin_count = lvl.eta;
    req.level = level;
    req.table_level = &lvl;
    return req;
}

int FactoryTable::sample(const CoinSource& coin, RandomStream& rng) const {
    const CoinRequest req = announce_then_decide(rng);
    long ones = 0;
    for (long i = 0; i < req.coin_count; ++i) ones += coin() != 0;
    return req.decide(ones);
}

SeriesValue FactoryTable::series_eval(double p, int K) const {
    if (degenerate_ >= 0) return {static_cast<double>(degenerate_), 0.0};
    if (K < 0 || K > level_count())
        throw std::invalid_argument("series_eval: truncation level out of range");
    double weight = 0.25;
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
        sum += weight * indicator_polynomial(levels_[static_cast<std::size_t>(k - 1)], p);
        weight *= 0.75;
    }
    return {sum, std::pow(0.75, K)};
}

std::uint64_t FactoryTable::hash() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001B3ULL;
        }
    };
    mix(target_.name.data(), target_.name.size());
    const int deg = degenerate_;
    mix(&deg, sizeof deg);
    for (const auto& lvl : levels_) {
        mix(&lvl.eta, sizeof lvl.eta);
        mix(&lvl.lipschitz, sizeof lvl.lipschitz);
        mix(lvl.indicator.data(), lvl.indicator.size());
    }
    return h;
}

FactoryTable FactoryTable::from_parts(TargetFunction target, EtaSearchConfig config,
                                      std::vector<FactoryLevel> levels, int degenerate,
                                      std::vector<LevelNote> notes) {
    FactoryTable t;
    t.target_ = std::move(target);
    t.config_ = config;
    t.levels_ = std::move(levels);
    t.notes_ = std::move(notes);
    t.degenerate_ = degenerate;
    return t;
}

FactoryTable build_table(const TargetFunction& f, const PolyBoundCertificate& cert,
                         const EtaSearchConfig& cfg) {
    (void)cert; // acceptance of the certificate is the caller's precondition
    validate_target(f, cfg.grid_points, cfg.tolerance);
    Builder builder(f, cfg);
    int which = 0;
    if (builder.degenerate_constant(which))
        return FactoryTable::from_parts(f, cfg, {}, which, {});
    return builder.build();
}

} // namespace kob
