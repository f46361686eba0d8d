#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gqm/group_types.hpp"
#include "gqm/rng.hpp"

namespace gqm {

enum class RatioMode { Token, Sequence };
enum class AdvantageMode { Standardized, MeanOnly };
enum class RewardProviderKind { Gqm, SaturatingSqm };

// Tabular categorical policy: one independent softmax distribution per
// position. Stands in for the trained model in the synthetic experiments.
struct ToyPolicy {
    int positions = 0;
    int vocab = 0;
    std::vector<double> logits;  // row-major, positions x vocab

    static ToyPolicy zeros(int positions, int vocab);

    double logit(int position, int token) const { return logits[position * vocab + token]; }
    double& logit(int position, int token) { return logits[position * vocab + token]; }

    std::vector<double> probs(int position) const;
    std::vector<double> log_probs(int position) const;
    double log_prob(int position, int token) const;

    // One full sequence, one categorical draw per position.
    std::vector<int> sample_sequence(Rng& rng) const;
};

// One sampled rollout with the behavior policy's per-token log
// probabilities and the group-relative statistics attached later.
struct Trajectory {
    std::vector<int> tokens;
    std::vector<double> old_logprobs;
    double reward = 0.0;
    double advantage = 0.0;
};

using TrajectoryGroup = std::vector<Trajectory>;

// Documented full-scale default for the overlong buffer; the toy loop
// scales it down to 20% of max_len instead (see resolved_overlong_buffer).
inline constexpr int kFullScaleOverlongBuffer = 2048;

struct TrainConfig {
    double clip_epsilon = 0.2;
    // Weight of the advantage-gated SFT term. Presets: 0.1 (reasoning),
    // 0.2 (cross-lingual alignment), 1.0 (non-reasoning).
    double gamma = 0.1;
    int group_size = 4;
    double learning_rate = 0.6;
    int steps = 300;
    RatioMode ratio_mode = RatioMode::Token;
    AdvantageMode advantage_mode = AdvantageMode::Standardized;
    bool kl_enabled = false;
    // Only read when kl_enabled; extension beyond the default recipe.
    double kl_coef = 0.01;
    int max_len = 16;
    // Negative means "auto": 20% of max_len, the toy-scale stand-in for the
    // 2048-token full-scale buffer.
    int overlong_buffer = -1;
    std::uint64_t seed = 0;
    // Toy task dimensions: fixed random target per source.
    int num_sources = 16;
    int seq_len = 4;
    int vocab_size = 8;

    int resolved_overlong_buffer() const {
        return overlong_buffer >= 0 ? overlong_buffer : max_len / 5;
    }

    void validate() const;
};

struct StepRecord {
    int step = 0;
    double mean_reward = 0.0;
    double vanished_fraction = 0.0;
    double task_quality = 0.0;
    double objective = 0.0;
};

struct TrainCurve {
    std::vector<StepRecord> records;
};

// exp(new - old), the per-token importance ratio.
double importance_ratio_token(double new_logprob, double old_logprob);

// Length-normalized sequence ratio: exp of the mean per-token log ratio.
// Throws LengthMismatch and EmptySequence.
double importance_ratio_sequence(std::span<const double> new_logprobs,
                                 std::span<const double> old_logprobs);

// min(ratio * A, clip(ratio, 1-eps, 1+eps) * A).
double clip_objective(double ratio, double advantage, double epsilon);

// max(0, advantage) * logprob: the SFT anchor, active only on
// positive-advantage trajectories.
double sft_term(double advantage, double logprob);

struct ObjectiveEval {
    double value = 0.0;
    // dvalue/dlogits, same layout as ToyPolicy::logits.
    std::vector<double> gradient;
};

// The full training objective: mean over groups of
// (1/G) sum_i (1/|y_i|) sum_t [clip + gamma * sft], evaluated at `policy`
// against the trajectories' recorded old log probabilities. With
// ratio_mode = Sequence, a single sequence-level ratio replaces the
// per-token ratios. The gradient is the exact analytic derivative with
// respect to the policy's logits. When cfg.kl_enabled and a reference
// policy is supplied, a forward-KL penalty (weight cfg.kl_coef, mean over
// positions) is subtracted.
// Throws EmptyBatch, GroupTooSmall, LengthMismatch.
ObjectiveEval stable_grpo_objective(const ToyPolicy& policy,
                                    const std::vector<TrajectoryGroup>& groups,
                                    const TrainConfig& cfg,
                                    const ToyPolicy* kl_reference = nullptr);

// Reward multiplier in [0, 1]: 1 up to max_len - buffer, then a linear ramp
// down to 0 at max_len, 0 beyond. Requires max_len > buffer >= 0, else
// InvalidBufferConfig.
double length_penalty(int length, int max_len, int buffer);

// Fraction of positions where candidate matches target. Throws
// LengthMismatch.
double oracle_quality(std::span<const int> target, std::span<const int> candidate);

// Group-level oracle: within-group ranks of oracle_quality (ties share the
// average rank), mapped linearly onto [0, 1]. Distinct qualities always map
// to distinct rewards. Throws GroupTooSmall.
RewardVector reward_provider_gqm(const std::vector<std::vector<int>>& candidates,
                                 std::span<const int> target);

// Pointwise oracle with a hard ceiling: min(1, quality + 0.4). Every
// candidate at quality >= 0.6 earns the maximum, mimicking a judge whose
// scores saturate.
double reward_provider_saturating_sqm(std::span<const int> candidate,
                                      std::span<const int> target);

// The seeded saturation experiment: per-source tabular policies, G rollouts
// per source per step, provider rewards, group-relative advantages, one
// gradient ascent step per source per step. Deterministic given (cfg,
// provider).
TrainCurve run_simulation(const TrainConfig& cfg, RewardProviderKind provider);

}  // namespace gqm
