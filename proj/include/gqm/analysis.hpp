#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gqm/group_types.hpp"
#include "gqm/rewards.hpp"
#include "gqm/rng.hpp"

namespace gqm {

struct DatasetReport {
    int n_groups = 0;
    double mean_ranking_accuracy = 0.0;
    // Pooled over all candidates in all groups.
    double mean_score = 0.0;
    double saturation_rate = 0.0;
    // Fraction of judgments whose stated ranking contradicts their scores.
    // Accuracy ignores the gate (it measures ordering only); this is
    // reported beside it for diagnostics.
    double gate_failure_rate = 0.0;
    int n_errors = 0;
};

// Evaluation pair: a parsed judgment and the aligned ground-truth scores
// (alphabetical label order).
using EvalPair = std::pair<Judgment, std::vector<double>>;

// Mean per-group ranking accuracy over the dataset (pairs pooled across
// groups instead when pool_pairs is set). Judgments whose label count does
// not match their ground truth are counted in n_errors and skipped. Throws
// EmptyDataset when no valid pair remains.
DatasetReport dataset_ranking_accuracy(const std::vector<EvalPair>& pairs,
                                       const RewardConfig& config, bool pool_pairs = false);

// Monte-Carlo ranking accuracy of a scorer that draws uniform integer
// scores in [score_lo, score_hi] for every candidate. Trial i uses ground
// truth i mod n. Throws EmptyDataset and ConfigError (trials < 1 or an
// empty score range).
double random_baseline(const std::vector<std::vector<double>>& ground_truths, int score_lo,
                       int score_hi, int trials, Rng& rng, double tie_epsilon = 0.0);

// Pooled mean score and fraction of scores at the ceiling, across every
// candidate of every set. Throws EmptyDataset.
DatasetReport saturation_report(const std::vector<std::vector<int>>& score_sets, int ceiling);

// Trailing moving average with partial windows during warm-up: output i is
// the mean of the last min(i+1, window) inputs. Output length equals input
// length. Throws InvalidWindow (window < 1).
std::vector<double> moving_average(std::span<const double> series, int window);

// Judge-guided selection: label with the highest judgment score, ties going
// to the alphabetically earliest label. Throws LabelSetMismatch when the
// judgment does not cover exactly the group's labels.
char rerank_select(const CandidateGroup& group, const Judgment& judgment);

// Policy-likelihood baseline: label whose candidate has the highest mean
// token log probability, ties alphabetical. Throws LengthMismatch.
char best_of_n_select(const CandidateGroup& group, std::span<const double> mean_logprobs);

}  // namespace gqm
