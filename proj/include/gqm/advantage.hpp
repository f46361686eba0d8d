#pragma once

#include <span>

#include "gqm/group_types.hpp"

namespace gqm {

struct GroupDiagnostics {
    double mean_reward = 0.0;
    // Population standard deviation (divide by G, not G-1).
    double reward_std = 0.0;
    // Fraction of rewards sitting at the ceiling value.
    double saturation_rate = 0.0;
    // True when every reward in the group is identical, i.e. the group
    // carries no learning signal and both advantage variants return zeros.
    bool vanished = false;
};

// Group-standardized advantages: (r - mean) / std with the population std.
// A degenerate group (all rewards equal) maps to all zeros rather than 0/0.
// Throws GroupTooSmall for fewer than 2 rewards.
AdvantageVector grpo_advantage(std::span<const double> rewards);

// Mean-only variant: r - mean, no std division. Degenerate groups again map
// to exact zeros.
AdvantageVector dr_grpo_advantage(std::span<const double> rewards);

// Summary statistics for one reward group (any size >= 1). `ceiling` is the
// largest value the reward scheme can emit; rewards >= ceiling count as
// saturated. Throws EmptyInput.
GroupDiagnostics group_diagnostics(std::span<const double> rewards, double ceiling);

}  // namespace gqm
