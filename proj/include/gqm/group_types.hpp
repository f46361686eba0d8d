#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gqm {

// Candidate labels are positional: candidate 0 is 'A', candidate 1 is 'B',
// and so on. Groups are capped at 26 members so single letters always
// suffice.
inline constexpr int kMinGroupSize = 2;
inline constexpr int kMaxGroupSize = 26;

char label_for(int index);
int index_for(char label);

struct Candidate {
    char label = 'A';
    std::string text;
};

// One translation group: a shared source, G candidate outputs, and
// (optionally) a human quality score per candidate, aligned by position.
struct CandidateGroup {
    std::string source;
    std::vector<Candidate> candidates;
    std::optional<std::vector<double>> ground_truth;

    int size() const { return static_cast<int>(candidates.size()); }
    std::vector<char> labels() const;
};

// Validating constructor. Throws SizeOutOfRange unless 2 <= G <= 26,
// GroundTruthLengthMismatch when the score vector does not align.
CandidateGroup make_group(std::string source, std::vector<std::string> candidate_texts,
                          std::optional<std::vector<double>> ground_truth = std::nullopt);

// Re-checks the make_group invariants on an already-built value (used by the
// codecs after deserialization).
void validate_group(const CandidateGroup& group);

// Tie-aware ranking: an ordered list of tiers, best tier first. Labels
// within a tier are equal in quality. Canonical form keeps every tier
// sorted alphabetically.
struct Preorder {
    std::vector<std::vector<char>> tiers;

    std::vector<char> labels() const;
    bool operator==(const Preorder& other) const = default;
};

// Validates tier structure: no empty tiers, no duplicate labels, labels in
// A..Z. Tiers are sorted into canonical form.
Preorder make_preorder(std::vector<std::vector<char>> tiers);

// Parsed judge output: free-form analysis, a ranking over the group's
// labels, and an integer score per label.
struct Judgment {
    std::string analysis;
    Preorder ranking;
    std::map<char, int> scores;

    std::vector<char> labels() const;
};

// Throws LabelSetMismatch unless the ranking and the score map cover exactly
// the same labels.
Judgment make_judgment(std::string analysis, Preorder ranking, std::map<char, int> scores);

// Per-candidate rewards, aligned with the group's candidate order.
struct RewardVector {
    std::vector<double> values;

    bool operator==(const RewardVector& other) const = default;
};

// Per-candidate advantages, aligned likewise.
struct AdvantageVector {
    std::vector<double> values;

    bool operator==(const AdvantageVector& other) const = default;
};

}  // namespace gqm
