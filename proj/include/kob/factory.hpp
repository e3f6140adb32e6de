#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kob/errors.hpp"
#include "kob/random.hpp"

namespace kob {

// A continuous map [0,1] -> [0,1] with the metadata the level construction
// needs. lipschitz_bound must dominate |f(p)-f(q)|/|p-q|; it seeds the
// propagated per-level bounds.
struct TargetFunction {
    std::function<double(double)> eval;
    double lipschitz_bound = 0.0;
    std::string name;

    double operator()(double p) const { return eval(p); }
};

struct PolyBoundCertificate {
    enum class Mode { certified_grid, heuristic };
    int exponent = 0;         // smallest n with min{f,1-f} >= min{p,1-p}^n on the grid
    int verified_grid_size = 0;
    Mode mode = Mode::certified_grid;
};

struct PolyBoundRejection {
    double witness_p = 0.0;
    double margin = 0.0;      // min{f,1-f} - min{p,1-p}^n_max at the witness; negative
};

using PolyBoundOutcome = std::variant<PolyBoundCertificate, PolyBoundRejection>;

// Searches the smallest exponent n <= n_max such that
//   min{f(p), 1-f(p)} >= min{p, 1-p}^n
// holds at every point of a uniform grid. Functions with an interior zero of
// f or 1-f cannot pass for any n and are rejected with a witness point.
PolyBoundOutcome check_poly_bound(const TargetFunction& f, int n_max, int grid_points);

enum class CertMode { certified, heuristic };

struct EtaSearchConfig {
    int grid_points = 4097;   // uniform certification grid on [0,1]
    long eta_max = 65536;
    int level_cap = 40;       // number of levels built; residual mass (3/4)^level_cap
    double tolerance = 1e-9;  // bracket slack for grid checks
    CertMode mode = CertMode::certified;
};

// One level of the construction: coin count eta, the bit table
// indicator[j] = 1{f_k(j/eta) >= 1/2}, and the propagated Lipschitz bound
// for f_k. one_blocks caches the maximal runs of ones for O(#blocks)
// evaluation of the indicator polynomial through the incomplete beta function.
struct FactoryLevel {
    int index = 0;            // 1-based
    long eta = 0;
    std::vector<std::uint8_t> indicator;
    std::vector<std::pair<long, long>> one_blocks;
    double lipschitz = 0.0;
};

// Maximal inclusive runs of ones in a 0/1 table.
std::vector<std::pair<long, long>> indicator_blocks(const std::vector<std::uint8_t>& bits);

// P(Bin(eta, p) in any one-block), i.e. sum_j indicator[j] C(eta,j) p^j (1-p)^(eta-j).
double indicator_polynomial(const FactoryLevel& level, double p);

// Source of i.i.d. p-coins with p unknown to the factory.
using CoinSource = std::function<int()>;

// The number of coins and the pure decision rule for one sampling round,
// produced before any coin is flipped. For a degenerate target (identically
// 0 or 1) coin_count is 0 and the decision is the constant.
struct CoinRequest {
    long coin_count = 0;
    int level = 0;
    const FactoryLevel* table_level = nullptr;
    int constant = -1;

    int decide(long ones) const {
        if (constant >= 0) return constant;
        return table_level->indicator[static_cast<std::size_t>(ones)];
    }
};

struct SeriesValue {
    double value = 0.0;       // partial sum through level K
    double tail_bound = 0.0;  // (3/4)^K; |value - f(p)| <= tail_bound + o(tolerance)
};

class FactoryTable {
public:
    // Per-level certification outcome kept for the run manifest.
    struct LevelNote {
        int level = 0;
        bool margin_certified = false; // interior margins + endpoint tail bounds held
        long eta_candidates_tried = 0;
    };

    const std::string& function_name() const { return target_.name; }
    const TargetFunction& target() const { return target_; }
    const EtaSearchConfig& config() const { return config_; }
    const std::vector<FactoryLevel>& levels() const { return levels_; }
    const std::vector<LevelNote>& level_notes() const { return notes_; }
    int level_count() const { return static_cast<int>(levels_.size()); }

    // -1: not degenerate; 0/1: target identically 0/1, table bypassed.
    int degenerate() const { return degenerate_; }

    // f_k(p) recomputed downward from the target through the stored
    // indicator tables of levels < k. k in [1, level_count()].
    double eval_level(int k, double p) const;

    // Draws the level, announces the coin count, and returns the decision
    // rule. Throws LevelCapExceeded with probability (3/4)^level_count.
    CoinRequest announce_then_decide(RandomStream& rng) const;

    // One f(p)-coin from a p-coin source. Flips exactly the announced number
    // of coins.
    int sample(const CoinSource& coin, RandomStream& rng) const;

    // Partial series through level K with the geometric tail bound.
    SeriesValue series_eval(double p, int K) const;

    // 64-bit content hash over the level data; stable across runs.
    std::uint64_t hash() const;

    static FactoryTable from_parts(TargetFunction target, EtaSearchConfig config,
                                   std::vector<FactoryLevel> levels, int degenerate,
                                   std::vector<LevelNote> notes);

private:
    friend FactoryTable build_table(const TargetFunction&, const PolyBoundCertificate&,
                                    const EtaSearchConfig&);
    TargetFunction target_;
    EtaSearchConfig config_;
    std::vector<FactoryLevel> levels_;
    std::vector<LevelNote> notes_;
    int degenerate_ = -1;
};

// Builds level_cap levels. Per level the coin count is searched over
// eta = 1, 2, 4, ... then bisected to the smallest candidate passing the
// bracket certification
//   g_k(p) = f_k(p) - (1/4) P(f_k(sample mean of eta p-coins) >= 1/2) in [0, 3/4].
// Certified mode adds Lipschitz safety margins on the interior grid and
// leading-term tail bounds on refined end windows; heuristic mode checks raw
// grid values only. Throws EtaSearchExhausted / LevelRangeViolation.
FactoryTable build_table(const TargetFunction& f, const PolyBoundCertificate& cert,
                         const EtaSearchConfig& cfg);

// Range and Lipschitz spot checks for a target on a uniform grid; throws
// std::invalid_argument on violation.
void validate_target(const TargetFunction& f, int grid_points, double tol);

} // namespace kob
