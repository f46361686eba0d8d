#pragma once

#include <span>
#include <vector>

#include "gqm/group_types.hpp"

namespace gqm {

struct RewardConfig {
    // Ground-truth differences with magnitude <= tie_epsilon count as ties.
    // Predicted scores are never snapped; they tie only when exactly equal.
    double tie_epsilon = 0.0;
    // Top of the integer score scale used by judges.
    int score_ceiling = 10;
    // Upper end of the range rewards are scaled into before optimization.
    double scale_target_max = 0.1;

    void validate() const;
};

// 1 when the predicted pair ordering matches the ground-truth pair ordering
// (ties included), 0 otherwise.
int pairwise_agreement(double q_i, double q_j, double r_i, double r_j, double tie_epsilon);

// Fraction of unordered candidate pairs whose predicted ordering agrees with
// the ground truth. Throws LengthMismatch and GroupTooSmall (size < 2).
double ranking_accuracy(std::span<const double> ground_truth, std::span<const double> predicted,
                        double tie_epsilon);

// Discrete closeness kernel on an absolute score-difference error:
// 0 -> 1.0, 1 -> 0.6, 2 -> 0.2, anything larger -> 0.0.
double margin_kernel(int delta);

// Mean kernel value over unordered pairs, where each pair's error is
// |(s_i - s_j) - (q_i - q_j)| rounded half away from zero.
double score_consistency(std::span<const double> ground_truth, std::span<const int> predicted);

// Gated group reward: consistency gate times (ranking accuracy + score
// consistency). A judgment whose ranking contradicts its own scores earns
// exactly zero. Ground truth is aligned with the judgment's labels in
// alphabetical order; throws LengthMismatch when the counts differ.
double total_reward(const Judgment& judgment, std::span<const double> ground_truth,
                    const RewardConfig& config);

// Single-candidate scoring reward: kernel of |predicted - q| rounded half
// away from zero. Throws ScoreOutOfRange when predicted is outside
// [0, score_ceiling].
double sqm_kernel_reward(int predicted, double ground_truth_score, const RewardConfig& config);

// Linear map from [0, raw_max] onto [0, scale_target_max]. Throws
// RewardOutOfDeclaredRange when an input falls outside [0, raw_max].
// raw_max defaults to 2, the largest gated group reward.
std::vector<double> scale_rewards(std::span<const double> rewards, const RewardConfig& config,
                                  double raw_max = 2.0);

}  // namespace gqm
