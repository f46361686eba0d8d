#pragma once

#include <string>
#include <vector>

#include "gqm/group_types.hpp"
#include "gqm/rng.hpp"

namespace gqm {

// Raw per-source pool: every system's output with its averaged human score.
struct SystemOutput {
    std::string system_id;
    std::string candidate;
    double human_score = 0.0;
};

struct SystemOutputs {
    std::string source;
    std::vector<SystemOutput> outputs;
};

// Group size in {2, 3, 4} with probabilities (0.2, 0.2, 0.6), the 1:1:3
// frequency ratio.
int sample_group_size(Rng& rng);

// With probability 0.5 replaces a uniformly chosen candidate's text with
// the reference translation (group size unchanged); otherwise returns the
// group as-is. An injected group loses its ground_truth: the replaced slot
// would need fresh annotation.
CandidateGroup inject_reference(const CandidateGroup& group, const std::string& reference,
                                Rng& rng);

// Uniform random permutation of the candidates with the aligned ground
// truth following; labels re-canonicalized to A, B, ... in the new order.
// Throws MissingGroundTruth.
CandidateGroup shuffle_augment(const CandidateGroup& group, Rng& rng);

// Uniform k-subset without replacement (original relative order kept),
// ground truth following, labels re-canonicalized. Requires 2 <= k <= G,
// else InvalidSubsampleSize. Throws MissingGroundTruth.
CandidateGroup subsample_group(const CandidateGroup& group, int k, Rng& rng);

// One evaluation group from a pool: size via sample_group_size (capped at
// the pool size), always containing a minimum-score and a maximum-score
// candidate (ties broken uniformly), the rest drawn uniformly without
// replacement. Candidates keep the pool's relative order; ground_truth is
// set from the human scores. Throws PoolTooSmall below 2 outputs.
// `degenerate_out`, when non-null, is set when the pool has min == max and
// the inclusion constraint is vacuous.
CandidateGroup build_eval_groups(const SystemOutputs& pool, Rng& rng,
                                 bool* degenerate_out = nullptr);

}  // namespace gqm
