#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kob/factory.hpp"

namespace kob {

struct FunctionRegistryEntry {
    std::string name;
    std::string description;        // closed form
    TargetFunction fn;
    int expected_poly_exponent = 0; // 0 marks the deliberate negative case
};

// Built-in targets. All pass check_poly_bound except `clamp2p`, which has an
// interior zero of 1 - f and is the designed rejection case.
const std::vector<FunctionRegistryEntry>& registry();

// nullptr when the name is unknown.
const FunctionRegistryEntry* find_function(std::string_view name);

} // namespace kob
