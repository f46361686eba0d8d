#include "gqm/rewards.hpp"

#include <cmath>
#include <cstdlib>

#include "gqm/error.hpp"
#include "gqm/ranking_io.hpp"

namespace gqm {

void RewardConfig::validate() const {
    if (!(tie_epsilon >= 0.0))
        throw Error(ErrorCode::ConfigError, "tie_epsilon must be >= 0");
    if (score_ceiling < 1)
        throw Error(ErrorCode::ConfigError, "score_ceiling must be >= 1");
    if (!(scale_target_max > 0.0))
        throw Error(ErrorCode::ConfigError, "scale_target_max must be > 0");
}

namespace {

int sign_with_epsilon(double a, double b, double eps) {
    const double d = a - b;
    if (std::abs(d) <= eps) return 0;
    return d > 0.0 ? 1 : -1;
}

void check_pair_input(std::size_t q_size, std::size_t r_size) {
    if (q_size != r_size)
        throw Error(ErrorCode::LengthMismatch,
                    "ground truth has " + std::to_string(q_size) + " entries, predictions " +
                        std::to_string(r_size));
    if (q_size < 2)
        throw Error(ErrorCode::GroupTooSmall,
                    "pairwise metrics need at least 2 candidates, got " + std::to_string(q_size));
}

}  // namespace

int pairwise_agreement(double q_i, double q_j, double r_i, double r_j, double tie_epsilon) {
    const int truth = sign_with_epsilon(q_i, q_j, tie_epsilon);
    const int predicted = sign_with_epsilon(r_i, r_j, 0.0);
    return truth == predicted ? 1 : 0;
}

double ranking_accuracy(std::span<const double> ground_truth, std::span<const double> predicted,
                        double tie_epsilon) {
    check_pair_input(ground_truth.size(), predicted.size());
    const std::size_t n = ground_truth.size();
    int agreements = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            agreements += pairwise_agreement(ground_truth[i], ground_truth[j], predicted[i],
                                             predicted[j], tie_epsilon);
            ++pairs;
        }
    return static_cast<double>(agreements) / static_cast<double>(pairs);
}

double margin_kernel(int delta) {
    switch (std::abs(delta)) {
        case 0: return 1.0;
        case 1: return 0.6;
        case 2: return 0.2;
        default: return 0.0;
    }
}

namespace {

// Half-away-from-zero rounding of a pairwise score error.
int rounded_error(double delta) { return static_cast<int>(std::lround(std::abs(delta))); }

}  // namespace

double score_consistency(std::span<const double> ground_truth, std::span<const int> predicted) {
    check_pair_input(ground_truth.size(), predicted.size());
    const std::size_t n = ground_truth.size();
    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double predicted_gap = static_cast<double>(predicted[i] - predicted[j]);
            const double truth_gap = ground_truth[i] - ground_truth[j];
            total += margin_kernel(rounded_error(predicted_gap - truth_gap));
            ++pairs;
        }
    return total / static_cast<double>(pairs);
}

double total_reward(const Judgment& judgment, std::span<const double> ground_truth,
                    const RewardConfig& config) {
    config.validate();
    if (judgment.scores.size() != ground_truth.size())
        throw Error(ErrorCode::LengthMismatch,
                    "judgment covers " + std::to_string(judgment.scores.size()) +
                        " labels, ground truth " + std::to_string(ground_truth.size()));
    std::vector<int> predicted;
    predicted.reserve(judgment.scores.size());
    for (const auto& [label, score] : judgment.scores) predicted.push_back(score);
    if (!consistency_gate(judgment.ranking, judgment.scores)) return 0.0;
    std::vector<double> predicted_real(predicted.begin(), predicted.end());
    return ranking_accuracy(ground_truth, predicted_real, config.tie_epsilon) +
           score_consistency(ground_truth, predicted);
}

double sqm_kernel_reward(int predicted, double ground_truth_score, const RewardConfig& config) {
    config.validate();
    if (predicted < 0 || predicted > config.score_ceiling)
        throw Error(ErrorCode::ScoreOutOfRange,
                    "predicted score " + std::to_string(predicted) + " outside [0, " +
                        std::to_string(config.score_ceiling) + "]");
    return margin_kernel(rounded_error(static_cast<double>(predicted) - ground_truth_score));
}

std::vector<double> scale_rewards(std::span<const double> rewards, const RewardConfig& config,
                                  double raw_max) {
    config.validate();
    if (!(raw_max > 0.0)) throw Error(ErrorCode::ConfigError, "raw_max must be > 0");
    std::vector<double> out;
    out.reserve(rewards.size());
    for (double r : rewards) {
        if (!(r >= 0.0) || !(r <= raw_max))
            throw Error(ErrorCode::RewardOutOfDeclaredRange,
                        "reward " + std::to_string(r) + " outside [0, " + std::to_string(raw_max) +
                            "]");
        out.push_back(r * (config.scale_target_max / raw_max));
    }
    return out;
}

}  // namespace gqm
