#pragma once

#include <stdexcept>
#include <string>

namespace kob {

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometric level draw exceeded the number of built factory levels.
// Probability (3/4)^k_max per draw; always surfaced, never truncated.
struct LevelCapExceeded : SimulationError {
    int level_drawn;
    int level_cap;
    LevelCapExceeded(int drawn, int cap)
        : SimulationError("factory level draw " + std::to_string(drawn) +
                          " exceeds built level cap " + std::to_string(cap)),
          level_drawn(drawn), level_cap(cap) {}
};

// Bernstein coefficient vector (or lineage count) grew past the explosion guard.
struct DimensionCapExceeded : SimulationError {
    long dimension;
    long cap;
    DimensionCapExceeded(long dim, long c)
        : SimulationError("dual process dimension " + std::to_string(dim) +
                          " exceeds cap " + std::to_string(c)),
          dimension(dim), cap(c) {}
};

// Branching tree grew past the node guard.
struct NodeCapExceeded : SimulationError {
    long nodes;
    long cap;
    NodeCapExceeded(long n, long c)
        : SimulationError("particle tree node count " + std::to_string(n) +
                          " exceeds cap " + std::to_string(c)),
          nodes(n), cap(c) {}
};

// No coin count up to eta_max certified the bracket condition at this level.
struct EtaSearchExhausted : SimulationError {
    int level;
    long eta_max;
    EtaSearchExhausted(int lvl, long emax)
        : SimulationError("eta search exhausted at level " + std::to_string(lvl) +
                          " (eta_max " + std::to_string(emax) + ")"),
          level(lvl), eta_max(emax) {}
};

// A level function left [ -tol, 1 + tol ] on the verification grid.
struct LevelRangeViolation : SimulationError {
    int level;
    double value;
    double at_p;
    LevelRangeViolation(int lvl, double v, double p)
        : SimulationError("level " + std::to_string(lvl) + " value " +
                          std::to_string(v) + " out of range at p = " + std::to_string(p)),
          level(lvl), value(v), at_p(p) {}
};

// More than the allowed fraction of Monte Carlo replicates hit a cap.
struct CapExclusionError : SimulationError {
    long excluded;
    long total;
    CapExclusionError(long ex, long tot)
        : SimulationError("cap exclusions " + std::to_string(ex) + " of " +
                          std::to_string(tot) + " replicates exceed tolerated fraction"),
          excluded(ex), total(tot) {}
};

} // namespace kob
