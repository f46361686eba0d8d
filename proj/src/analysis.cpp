#include "gqm/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gqm/error.hpp"
#include "gqm/ranking_io.hpp"

namespace gqm {

DatasetReport dataset_ranking_accuracy(const std::vector<EvalPair>& pairs,
                                       const RewardConfig& config, bool pool_pairs) {
    config.validate();
    if (pairs.empty()) throw Error(ErrorCode::EmptyDataset, "no evaluation pairs");

    DatasetReport report;
    double accuracy_sum = 0.0;
    long matched_pairs = 0;
    long total_pairs = 0;
    int gate_failures = 0;
    long score_count = 0;
    long saturated = 0;
    double score_sum = 0.0;

    for (const auto& [judgment, ground_truth] : pairs) {
        if (judgment.scores.size() != ground_truth.size() || ground_truth.size() < 2) {
            ++report.n_errors;
            continue;
        }
        std::vector<double> predicted;
        predicted.reserve(judgment.scores.size());
        for (const auto& [label, score] : judgment.scores) {
            predicted.push_back(static_cast<double>(score));
            score_sum += score;
            if (score >= config.score_ceiling) ++saturated;
            ++score_count;
        }
        const double accuracy = ranking_accuracy(ground_truth, predicted, config.tie_epsilon);
        accuracy_sum += accuracy;
        const long pair_count =
            static_cast<long>(ground_truth.size()) * (static_cast<long>(ground_truth.size()) - 1) / 2;
        matched_pairs += std::lround(accuracy * static_cast<double>(pair_count));
        total_pairs += pair_count;
        if (!consistency_gate(judgment.ranking, judgment.scores)) ++gate_failures;
        ++report.n_groups;
    }

    if (report.n_groups == 0)
        throw Error(ErrorCode::EmptyDataset, "no valid evaluation pair in dataset");
    report.mean_ranking_accuracy =
        pool_pairs ? static_cast<double>(matched_pairs) / static_cast<double>(total_pairs)
                   : accuracy_sum / report.n_groups;
    report.mean_score = score_sum / static_cast<double>(score_count);
    report.saturation_rate = static_cast<double>(saturated) / static_cast<double>(score_count);
    report.gate_failure_rate = static_cast<double>(gate_failures) / report.n_groups;
    return report;
}

double random_baseline(const std::vector<std::vector<double>>& ground_truths, int score_lo,
                       int score_hi, int trials, Rng& rng, double tie_epsilon) {
    if (ground_truths.empty()) throw Error(ErrorCode::EmptyDataset, "no ground truths");
    if (trials < 1) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
    if (score_lo > score_hi) throw Error(ErrorCode::ConfigError, "empty score range");

    double total = 0.0;
    std::vector<double> predicted;
    for (int t = 0; t < trials; ++t) {
        const std::vector<double>& truth = ground_truths[t % ground_truths.size()];
        predicted.resize(truth.size());
        for (double& s : predicted)
            s = static_cast<double>(rng.uniform_int(score_lo, score_hi));
        total += ranking_accuracy(truth, predicted, tie_epsilon);
    }
    return total / static_cast<double>(trials);
}

DatasetReport saturation_report(const std::vector<std::vector<int>>& score_sets, int ceiling) {
    if (score_sets.empty()) throw Error(ErrorCode::EmptyDataset, "no score sets");
    DatasetReport report;
    long count = 0;
    long saturated = 0;
    double sum = 0.0;
    for (const auto& scores : score_sets) {
        ++report.n_groups;
        for (int s : scores) {
            sum += s;
            if (s >= ceiling) ++saturated;
            ++count;
        }
    }
    if (count == 0) throw Error(ErrorCode::EmptyDataset, "score sets are all empty");
    report.mean_score = sum / static_cast<double>(count);
    report.saturation_rate = static_cast<double>(saturated) / static_cast<double>(count);
    return report;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
    if (window < 1) throw Error(ErrorCode::InvalidWindow, "window must be >= 1");
    std::vector<double> out;
    out.reserve(series.size());
    double running = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        running += series[i];
        if (i >= static_cast<std::size_t>(window)) running -= series[i - window];
        const auto span = static_cast<double>(std::min<std::size_t>(i + 1, window));
        out.push_back(running / span);
    }
    return out;
}

char rerank_select(const CandidateGroup& group, const Judgment& judgment) {
    if (judgment.labels() != group.labels())
        throw Error(ErrorCode::LabelSetMismatch,
                    "judgment labels do not cover the group's labels");
    char best = 0;
    int best_score = -1;
    // std::map iterates labels alphabetically, so the first maximum is the
    // documented tie-break.
    for (const auto& [label, score] : judgment.scores) {
        if (score > best_score) {
            best = label;
            best_score = score;
        }
    }
    return best;
}

char best_of_n_select(const CandidateGroup& group, std::span<const double> mean_logprobs) {
    if (static_cast<std::size_t>(group.size()) != mean_logprobs.size())
        throw Error(ErrorCode::LengthMismatch,
                    "one mean logprob per candidate required");
    std::size_t best = 0;
    for (std::size_t i = 1; i < mean_logprobs.size(); ++i)
        if (mean_logprobs[i] > mean_logprobs[best]) best = i;
    return group.candidates[best].label;
}

}  // namespace gqm
