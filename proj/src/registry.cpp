#include "kob/registry.hpp"

#include <algorithm>
#include <cmath>

namespace kob {

namespace {

// Ternary voting nonlinearity in Bernstein form, tie weight
// theta = 2*nu*eps / (3 + 3*nu*eps) at eps = nu = 1/2.
constexpr double kCubicTheta = 2.0 * 0.25 / (3.0 + 3.0 * 0.25); // 2/15

double cubic_vote(double u) {
    const double v = 1.0 - u;
    return u * u * u + 3.0 * u * u * v + kCubicTheta * 3.0 * u * v * v;
}

std::vector<FunctionRegistryEntry> make_registry() {
    std::vector<FunctionRegistryEntry> out;
    out.push_back({"half", "f(p) = 1/2",
                   {[](double) { return 0.5; }, 0.0, "half"}, 1});
    out.push_back({"linear13", "f(p) = (1+p)/3",
                   {[](double p) { return (1.0 + p) / 3.0; }, 1.0 / 3.0, "linear13"}, 2});
    out.push_back({"selection", "f(p) = 2p/(1+p), classical selection with s = 1",
                   {[](double p) { return 2.0 * p / (1.0 + p); }, 2.0, "selection"}, 2});
    // Lipschitz bound: degree * max adjacent Bernstein coefficient gap,
    // coefficients (0, 2/15, 1, 1).
    out.push_back({"cubicvote",
                   "f(u) = u^3 + 3u^2(1-u) + (2/15) 3u(1-u)^2, ternary voting at eps = nu = 1/2",
                   {cubic_vote, 3.0 * (1.0 - kCubicTheta), "cubicvote"}, 2});
    out.push_back({"identity", "f(p) = p",
                   {[](double p) { return p; }, 1.0, "identity"}, 1});
    out.push_back({"clamp2p", "f(p) = min(2p, 1); not polynomially bounded",
                   {[](double p) { return std::min(2.0 * p, 1.0); }, 2.0, "clamp2p"}, 0});
    return out;
}

} // namespace

const std::vector<FunctionRegistryEntry>& registry() {
    static const std::vector<FunctionRegistryEntry> entries = make_registry();
    return entries;
}

const FunctionRegistryEntry* find_function(std::string_view name) {
    for (const auto& e : registry())
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace kob
