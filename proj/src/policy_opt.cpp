#include "gqm/policy_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gqm/advantage.hpp"
#include "gqm/error.hpp"

namespace gqm {

ToyPolicy ToyPolicy::zeros(int positions, int vocab) {
    if (positions < 1 || vocab < 2)
        throw Error(ErrorCode::ConfigError,
                    "policy needs positions >= 1 and vocab >= 2");
    ToyPolicy p;
    p.positions = positions;
    p.vocab = vocab;
    p.logits.assign(static_cast<std::size_t>(positions) * vocab, 0.0);
    return p;
}

std::vector<double> ToyPolicy::log_probs(int position) const {
    const double* row = logits.data() + static_cast<std::size_t>(position) * vocab;
    const double max_logit = *std::max_element(row, row + vocab);
    double total = 0.0;
    for (int v = 0; v < vocab; ++v) total += std::exp(row[v] - max_logit);
    const double log_norm = max_logit + std::log(total);
    std::vector<double> out(vocab);
    for (int v = 0; v < vocab; ++v) out[v] = row[v] - log_norm;
    return out;
}

std::vector<double> ToyPolicy::probs(int position) const {
    std::vector<double> out = log_probs(position);
    for (double& x : out) x = std::exp(x);
    return out;
}

double ToyPolicy::log_prob(int position, int token) const {
    return log_probs(position)[token];
}

std::vector<int> ToyPolicy::sample_sequence(Rng& rng) const {
    std::vector<int> tokens(positions);
    for (int p = 0; p < positions; ++p)
        tokens[p] = static_cast<int>(rng.categorical(probs(p)));
    return tokens;
}

void TrainConfig::validate() const {
    if (!(clip_epsilon > 0.0)) throw Error(ErrorCode::ConfigError, "clip_epsilon must be > 0");
    if (!(gamma >= 0.0)) throw Error(ErrorCode::ConfigError, "gamma must be >= 0");
    if (group_size < 2) throw Error(ErrorCode::ConfigError, "group_size must be >= 2");
    if (!(learning_rate > 0.0)) throw Error(ErrorCode::ConfigError, "learning_rate must be > 0");
    if (steps < 0) throw Error(ErrorCode::ConfigError, "steps must be >= 0");
    if (kl_enabled && !(kl_coef >= 0.0))
        throw Error(ErrorCode::ConfigError, "kl_coef must be >= 0");
    const int buffer = resolved_overlong_buffer();
    if (buffer < 0 || max_len <= buffer)
        throw Error(ErrorCode::InvalidBufferConfig,
                    "need max_len > overlong_buffer >= 0");
    if (num_sources < 1) throw Error(ErrorCode::ConfigError, "num_sources must be >= 1");
    if (seq_len < 1) throw Error(ErrorCode::ConfigError, "seq_len must be >= 1");
    if (vocab_size < 2) throw Error(ErrorCode::ConfigError, "vocab_size must be >= 2");
}

double importance_ratio_token(double new_logprob, double old_logprob) {
    return std::exp(new_logprob - old_logprob);
}

double importance_ratio_sequence(std::span<const double> new_logprobs,
                                 std::span<const double> old_logprobs) {
    if (new_logprobs.size() != old_logprobs.size())
        throw Error(ErrorCode::LengthMismatch,
                    "sequence ratio needs equal-length logprob lists");
    if (new_logprobs.empty())
        throw Error(ErrorCode::EmptySequence, "sequence ratio of an empty sequence");
    double total = 0.0;
    for (std::size_t t = 0; t < new_logprobs.size(); ++t)
        total += new_logprobs[t] - old_logprobs[t];
    return std::exp(total / static_cast<double>(new_logprobs.size()));
}

double clip_objective(double ratio, double advantage, double epsilon) {
    const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
    return std::min(ratio * advantage, clipped * advantage);
}

double sft_term(double advantage, double logprob) {
    return std::max(0.0, advantage) * logprob;
}

ObjectiveEval stable_grpo_objective(const ToyPolicy& policy,
                                    const std::vector<TrajectoryGroup>& groups,
                                    const TrainConfig& cfg,
                                    const ToyPolicy* kl_reference) {
    if (groups.empty()) throw Error(ErrorCode::EmptyBatch, "objective over an empty batch");

    ObjectiveEval eval;
    eval.gradient.assign(policy.logits.size(), 0.0);

    // Per-position softmax tables, shared across trajectories.
    std::vector<std::vector<double>> lp_rows(policy.positions);
    std::vector<std::vector<double>> p_rows(policy.positions);
    for (int pos = 0; pos < policy.positions; ++pos) {
        lp_rows[pos] = policy.log_probs(pos);
        p_rows[pos].resize(policy.vocab);
        for (int v = 0; v < policy.vocab; ++v) p_rows[pos][v] = std::exp(lp_rows[pos][v]);
    }

    const double inv_groups = 1.0 / static_cast<double>(groups.size());
    const double lo = 1.0 - cfg.clip_epsilon;
    const double hi = 1.0 + cfg.clip_epsilon;

    for (const TrajectoryGroup& group : groups) {
        if (group.size() < 2)
            throw Error(ErrorCode::GroupTooSmall,
                        "trajectory group has fewer than 2 members");
        const double inv_g = inv_groups / static_cast<double>(group.size());
        for (const Trajectory& traj : group) {
            const std::size_t len = traj.tokens.size();
            if (len == 0) throw Error(ErrorCode::EmptySequence, "empty trajectory");
            if (traj.old_logprobs.size() != len)
                throw Error(ErrorCode::LengthMismatch,
                            "trajectory tokens and old_logprobs lengths differ");
            if (static_cast<int>(len) > policy.positions)
                throw Error(ErrorCode::LengthMismatch,
                            "trajectory longer than the policy's position count");

            std::vector<double> new_lps(len);
            for (std::size_t t = 0; t < len; ++t) {
                const int tok = traj.tokens[t];
                if (tok < 0 || tok >= policy.vocab)
                    throw Error(ErrorCode::ConfigError, "token outside policy vocabulary");
                new_lps[t] = lp_rows[t][tok];
            }

            double seq_ratio = 1.0;
            if (cfg.ratio_mode == RatioMode::Sequence)
                seq_ratio = importance_ratio_sequence(new_lps, traj.old_logprobs);

            const double a = traj.advantage;
            const double sft_coef = cfg.gamma * std::max(0.0, a);
            const double scale = inv_g / static_cast<double>(len);

            for (std::size_t t = 0; t < len; ++t) {
                const double w = cfg.ratio_mode == RatioMode::Token
                                     ? importance_ratio_token(new_lps[t], traj.old_logprobs[t])
                                     : seq_ratio;
                const double unclipped = w * a;
                const double clipped = std::clamp(w, lo, hi) * a;
                // d(min)/d(logprob): the unclipped branch differentiates to
                // w*a (dw/dlp = w); the clipped branch is flat outside the
                // band. For the sequence ratio the d(mean)/dlp_t factor 1/L
                // cancels against the L identical per-token terms.
                double clip_grad;
                double term;
                if (unclipped <= clipped) {
                    term = unclipped;
                    clip_grad = w * a;
                } else {
                    term = clipped;
                    clip_grad = (w > lo && w < hi) ? w * a : 0.0;
                }
                eval.value += scale * (term + sft_coef * new_lps[t]);
                const double coeff = scale * (clip_grad + sft_coef);
                // d new_lp/d logit[t][v] = [v == tok] - softmax[t][v]
                double* grow = eval.gradient.data() + t * policy.vocab;
                const double* probs = p_rows[t].data();
                for (int v = 0; v < policy.vocab; ++v) grow[v] -= coeff * probs[v];
                grow[traj.tokens[t]] += coeff;
            }
        }
    }

    if (cfg.kl_enabled && kl_reference != nullptr) {
        // Forward KL(pi || ref), averaged over positions.
        const double kl_scale = cfg.kl_coef / static_cast<double>(policy.positions);
        for (int pos = 0; pos < policy.positions; ++pos) {
            const std::vector<double> ref_lps = kl_reference->log_probs(pos);
            double kl = 0.0;
            for (int v = 0; v < policy.vocab; ++v)
                kl += p_rows[pos][v] * (lp_rows[pos][v] - ref_lps[v]);
            eval.value -= kl_scale * kl;
            double* grow = eval.gradient.data() + static_cast<std::size_t>(pos) * policy.vocab;
            for (int v = 0; v < policy.vocab; ++v)
                grow[v] -= kl_scale * p_rows[pos][v] * ((lp_rows[pos][v] - ref_lps[v]) - kl);
        }
    }

    return eval;
}

double length_penalty(int length, int max_len, int buffer) {
    if (buffer < 0 || max_len <= buffer)
        throw Error(ErrorCode::InvalidBufferConfig, "need max_len > buffer >= 0");
    const int threshold = max_len - buffer;
    if (length <= threshold) return 1.0;
    if (length >= max_len) return 0.0;
    return static_cast<double>(max_len - length) / static_cast<double>(buffer);
}

double oracle_quality(std::span<const int> target, std::span<const int> candidate) {
    if (target.size() != candidate.size())
        throw Error(ErrorCode::LengthMismatch, "target and candidate lengths differ");
    if (target.empty()) throw Error(ErrorCode::EmptySequence, "empty target sequence");
    int matches = 0;
    for (std::size_t i = 0; i < target.size(); ++i)
        if (target[i] == candidate[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(target.size());
}

RewardVector reward_provider_gqm(const std::vector<std::vector<int>>& candidates,
                                 std::span<const int> target) {
    const std::size_t g = candidates.size();
    if (g < 2)
        throw Error(ErrorCode::GroupTooSmall,
                    "group reward needs at least 2 candidates");
    std::vector<double> quality(g);
    for (std::size_t i = 0; i < g; ++i) quality[i] = oracle_quality(target, candidates[i]);

    // Average ranks (0-based, ties share the mean of their rank span),
    // normalized by g - 1 so rewards span [0, 1].
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return quality[a] < quality[b]; });
    RewardVector out;
    out.values.assign(g, 0.0);
    std::size_t i = 0;
    while (i < g) {
        std::size_t j = i;
        while (j + 1 < g && quality[order[j + 1]] == quality[order[i]]) ++j;
        const double shared_rank = static_cast<double>(i + j) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            out.values[order[k]] = shared_rank / static_cast<double>(g - 1);
        i = j + 1;
    }
    return out;
}

double reward_provider_saturating_sqm(std::span<const int> candidate,
                                      std::span<const int> target) {
    constexpr double kSaturationBias = 0.4;
    return std::min(1.0, oracle_quality(target, candidate) + kSaturationBias);
}

TrainCurve run_simulation(const TrainConfig& cfg, RewardProviderKind provider) {
    cfg.validate();
    Rng rng(cfg.seed);

    const int sources = cfg.num_sources;
    const int len = cfg.seq_len;
    const int vocab = cfg.vocab_size;
    const int g = cfg.group_size;
    const int buffer = cfg.resolved_overlong_buffer();

    std::vector<std::vector<int>> targets(sources, std::vector<int>(len));
    for (auto& target : targets)
        for (int& tok : target) tok = static_cast<int>(rng.uniform_int(0, vocab - 1));

    std::vector<ToyPolicy> policies(sources, ToyPolicy::zeros(len, vocab));
    std::vector<ToyPolicy> references;
    if (cfg.kl_enabled) references = policies;

    TrainCurve curve;
    curve.records.reserve(cfg.steps);

    for (int step = 0; step < cfg.steps; ++step) {
        StepRecord record;
        record.step = step;
        int vanished_groups = 0;

        for (int s = 0; s < sources; ++s) {
            ToyPolicy& policy = policies[s];
            const std::vector<int>& target = targets[s];

            TrajectoryGroup group(g);
            std::vector<std::vector<int>> sequences(g);
            for (int i = 0; i < g; ++i) {
                Trajectory& traj = group[i];
                traj.tokens = policy.sample_sequence(rng);
                traj.old_logprobs.resize(len);
                for (int t = 0; t < len; ++t)
                    traj.old_logprobs[t] = policy.log_prob(t, traj.tokens[t]);
                sequences[i] = traj.tokens;
                record.task_quality += oracle_quality(target, traj.tokens);
            }

            std::vector<double> rewards(g);
            if (provider == RewardProviderKind::Gqm) {
                rewards = reward_provider_gqm(sequences, target).values;
            } else {
                for (int i = 0; i < g; ++i)
                    rewards[i] = reward_provider_saturating_sqm(sequences[i], target);
            }
            for (int i = 0; i < g; ++i)
                rewards[i] *= length_penalty(static_cast<int>(sequences[i].size()), cfg.max_len,
                                             buffer);

            const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
            if (*lo == *hi) ++vanished_groups;

            const AdvantageVector advantages = cfg.advantage_mode == AdvantageMode::Standardized
                                                   ? grpo_advantage(rewards)
                                                   : dr_grpo_advantage(rewards);
            for (int i = 0; i < g; ++i) {
                group[i].reward = rewards[i];
                group[i].advantage = advantages.values[i];
                record.mean_reward += rewards[i];
            }

            const ObjectiveEval eval = stable_grpo_objective(
                policy, {group}, cfg, cfg.kl_enabled ? &references[s] : nullptr);
            record.objective += eval.value;
            for (std::size_t k = 0; k < policy.logits.size(); ++k)
                policy.logits[k] += cfg.learning_rate * eval.gradient[k];
        }

        const double rollouts = static_cast<double>(sources) * g;
        record.mean_reward /= rollouts;
        record.task_quality /= rollouts;
        record.vanished_fraction = static_cast<double>(vanished_groups) / sources;
        record.objective /= static_cast<double>(sources);
        curve.records.push_back(record);
    }
    return curve;
}

}  // namespace gqm
