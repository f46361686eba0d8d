#include "gqm/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "gqm/error.hpp"

namespace gqm {

int sample_group_size(Rng& rng) {
    const double u = rng.uniform_real();
    if (u < 0.2) return 2;
    if (u < 0.4) return 3;
    return 4;
}

namespace {

// Rebuilds a group from (text, score) rows, assigning fresh positional
// labels.
CandidateGroup rebuild(std::string source, const std::vector<std::pair<std::string, double>>& rows,
                       bool with_scores) {
    std::vector<std::string> texts;
    std::vector<double> scores;
    texts.reserve(rows.size());
    scores.reserve(rows.size());
    for (const auto& [text, score] : rows) {
        texts.push_back(text);
        scores.push_back(score);
    }
    if (with_scores) return make_group(std::move(source), std::move(texts), std::move(scores));
    return make_group(std::move(source), std::move(texts));
}

}  // namespace

CandidateGroup inject_reference(const CandidateGroup& group, const std::string& reference,
                                Rng& rng) {
    validate_group(group);
    if (rng.uniform_real() >= 0.5) return group;
    const auto slot =
        static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(group.size()) - 1));
    CandidateGroup out = group;
    out.candidates[slot].text = reference;
    // The replaced candidate's human score no longer applies; the group
    // needs re-annotation before scored use.
    out.ground_truth.reset();
    return out;
}

CandidateGroup shuffle_augment(const CandidateGroup& group, Rng& rng) {
    validate_group(group);
    if (!group.ground_truth)
        throw Error(ErrorCode::MissingGroundTruth, "shuffle needs annotated groups");
    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(group.candidates.size());
    for (int i = 0; i < group.size(); ++i)
        rows.emplace_back(group.candidates[i].text, (*group.ground_truth)[i]);
    rng.shuffle(rows);
    return rebuild(group.source, rows, true);
}

CandidateGroup subsample_group(const CandidateGroup& group, int k, Rng& rng) {
    validate_group(group);
    if (!group.ground_truth)
        throw Error(ErrorCode::MissingGroundTruth, "subsampling needs annotated groups");
    if (k < kMinGroupSize || k > group.size())
        throw Error(ErrorCode::InvalidSubsampleSize,
                    "subsample size " + std::to_string(k) + " outside [2, " +
                        std::to_string(group.size()) + "]");
    std::vector<std::size_t> picked =
        rng.sample_without_replacement(static_cast<std::size_t>(group.size()),
                                       static_cast<std::size_t>(k));
    std::sort(picked.begin(), picked.end());
    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(picked.size());
    for (std::size_t idx : picked)
        rows.emplace_back(group.candidates[idx].text, (*group.ground_truth)[idx]);
    return rebuild(group.source, rows, true);
}

CandidateGroup build_eval_groups(const SystemOutputs& pool, Rng& rng, bool* degenerate_out) {
    const std::size_t n = pool.outputs.size();
    if (n < 2)
        throw Error(ErrorCode::PoolTooSmall,
                    "pool '" + pool.source + "' has " + std::to_string(n) + " outputs, need >= 2");
    for (const SystemOutput& o : pool.outputs)
        if (!std::isfinite(o.human_score))
            throw Error(ErrorCode::SchemaViolation,
                        "pool '" + pool.source + "' has a non-finite human score");

    const int drawn = sample_group_size(rng);
    const std::size_t size = std::min<std::size_t>(static_cast<std::size_t>(drawn), n);

    double min_score = pool.outputs[0].human_score;
    double max_score = pool.outputs[0].human_score;
    for (const SystemOutput& o : pool.outputs) {
        min_score = std::min(min_score, o.human_score);
        max_score = std::max(max_score, o.human_score);
    }
    const bool degenerate = min_score == max_score;
    if (degenerate_out) *degenerate_out = degenerate;

    std::vector<std::size_t> min_ties;
    std::vector<std::size_t> max_ties;
    for (std::size_t i = 0; i < n; ++i) {
        if (pool.outputs[i].human_score == min_score) min_ties.push_back(i);
        if (pool.outputs[i].human_score == max_score) max_ties.push_back(i);
    }

    // Anchor slots: one minimum attainer, one maximum attainer (any two
    // distinct candidates when the pool is flat), ties broken uniformly.
    const std::size_t min_idx =
        min_ties[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(min_ties.size()) - 1))];
    std::vector<std::size_t> max_pool;
    for (std::size_t i : max_ties)
        if (i != min_idx) max_pool.push_back(i);
    const std::size_t max_idx =
        max_pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_pool.size()) - 1))];

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
        if (i != min_idx && i != max_idx) rest.push_back(i);
    std::vector<std::size_t> chosen = {min_idx, max_idx};
    if (size > 2) {
        // Partial Fisher-Yates over the leftover indices.
        for (std::size_t i = 0; i + 2 < size; ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(
                static_cast<std::int64_t>(i), static_cast<std::int64_t>(rest.size()) - 1));
            std::swap(rest[i], rest[j]);
            chosen.push_back(rest[i]);
        }
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(chosen.size());
    for (std::size_t idx : chosen)
        rows.emplace_back(pool.outputs[idx].candidate, pool.outputs[idx].human_score);
    return rebuild(pool.source, rows, true);
}

}  // namespace gqm
