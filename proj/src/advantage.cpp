#include "gqm/advantage.hpp"

#include <algorithm>
#include <cmath>

#include "gqm/error.hpp"

namespace gqm {

namespace {

void check_size(std::size_t n) {
    if (n < 2)
        throw Error(ErrorCode::GroupTooSmall,
                    "advantages need at least 2 rewards, got " + std::to_string(n));
}

bool all_equal(std::span<const double> rewards) {
    const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
    return *lo == *hi;
}

double mean_of(std::span<const double> rewards) {
    double total = 0.0;
    for (double r : rewards) total += r;
    return total / static_cast<double>(rewards.size());
}

}  // namespace

AdvantageVector grpo_advantage(std::span<const double> rewards) {
    check_size(rewards.size());
    AdvantageVector out;
    if (all_equal(rewards)) {
        out.values.assign(rewards.size(), 0.0);
        return out;
    }
    const double mean = mean_of(rewards);
    double var = 0.0;
    for (double r : rewards) var += (r - mean) * (r - mean);
    const double std_dev = std::sqrt(var / static_cast<double>(rewards.size()));
    out.values.reserve(rewards.size());
    for (double r : rewards) out.values.push_back((r - mean) / std_dev);
    return out;
}

AdvantageVector dr_grpo_advantage(std::span<const double> rewards) {
    check_size(rewards.size());
    AdvantageVector out;
    if (all_equal(rewards)) {
        out.values.assign(rewards.size(), 0.0);
        return out;
    }
    const double mean = mean_of(rewards);
    out.values.reserve(rewards.size());
    for (double r : rewards) out.values.push_back(r - mean);
    return out;
}

GroupDiagnostics group_diagnostics(std::span<const double> rewards, double ceiling) {
    if (rewards.empty())
        throw Error(ErrorCode::EmptyInput, "diagnostics need at least 1 reward");
    GroupDiagnostics d;
    d.mean_reward = mean_of(rewards);
    double var = 0.0;
    int saturated = 0;
    for (double r : rewards) {
        var += (r - d.mean_reward) * (r - d.mean_reward);
        if (r >= ceiling) ++saturated;
    }
    d.vanished = all_equal(rewards);
    d.reward_std = d.vanished ? 0.0 : std::sqrt(var / static_cast<double>(rewards.size()));
    d.saturation_rate = static_cast<double>(saturated) / static_cast<double>(rewards.size());
    return d;
}

}  // namespace gqm
