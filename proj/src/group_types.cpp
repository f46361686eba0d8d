#include "gqm/group_types.hpp"

#include <algorithm>
#include <set>

#include "gqm/error.hpp"

namespace gqm {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
        case ErrorCode::GroundTruthLengthMismatch: return "GroundTruthLengthMismatch";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::LabelSetMismatch: return "LabelSetMismatch";
        case ErrorCode::MissingRanking: return "MissingRanking";
        case ErrorCode::MissingScores: return "MissingScores";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::GroupTooSmall: return "GroupTooSmall";
        case ErrorCode::RewardOutOfDeclaredRange: return "RewardOutOfDeclaredRange";
        case ErrorCode::EmptyBatch: return "EmptyBatch";
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::InvalidBufferConfig: return "InvalidBufferConfig";
        case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
        case ErrorCode::InvalidSubsampleSize: return "InvalidSubsampleSize";
        case ErrorCode::PoolTooSmall: return "PoolTooSmall";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::InvalidWindow: return "InvalidWindow";
        case ErrorCode::JsonSyntax: return "JsonSyntax";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::MissingPair: return "MissingPair";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

char label_for(int index) {
    if (index < 0 || index >= kMaxGroupSize)
        throw Error(ErrorCode::SizeOutOfRange,
                    "candidate index " + std::to_string(index) + " outside A..Z");
    return static_cast<char>('A' + index);
}

int index_for(char label) {
    if (label < 'A' || label > 'Z')
        throw Error(ErrorCode::SyntaxError, std::string("invalid label '") + label + "'");
    return label - 'A';
}

std::vector<char> CandidateGroup::labels() const {
    std::vector<char> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.label);
    return out;
}

CandidateGroup make_group(std::string source, std::vector<std::string> candidate_texts,
                          std::optional<std::vector<double>> ground_truth) {
    CandidateGroup group;
    group.source = std::move(source);
    group.candidates.reserve(candidate_texts.size());
    for (std::size_t i = 0; i < candidate_texts.size(); ++i) {
        Candidate c;
        c.label = static_cast<char>('A' + i);
        c.text = std::move(candidate_texts[i]);
        group.candidates.push_back(std::move(c));
    }
    group.ground_truth = std::move(ground_truth);
    validate_group(group);
    return group;
}

void validate_group(const CandidateGroup& group) {
    const int g = group.size();
    if (g < kMinGroupSize || g > kMaxGroupSize)
        throw Error(ErrorCode::SizeOutOfRange,
                    "group size " + std::to_string(g) + " outside [" +
                        std::to_string(kMinGroupSize) + ", " + std::to_string(kMaxGroupSize) + "]");
    for (int i = 0; i < g; ++i) {
        if (group.candidates[i].label != label_for(i))
            throw Error(ErrorCode::SizeOutOfRange,
                        std::string("candidate ") + std::to_string(i) + " labeled '" +
                            group.candidates[i].label + "', expected '" + label_for(i) + "'");
    }
    if (group.ground_truth && static_cast<int>(group.ground_truth->size()) != g)
        throw Error(ErrorCode::GroundTruthLengthMismatch,
                    "ground truth has " + std::to_string(group.ground_truth->size()) +
                        " scores for " + std::to_string(g) + " candidates");
}

std::vector<char> Preorder::labels() const {
    std::vector<char> out;
    for (const auto& tier : tiers)
        for (char l : tier) out.push_back(l);
    std::sort(out.begin(), out.end());
    return out;
}

Preorder make_preorder(std::vector<std::vector<char>> tiers) {
    std::set<char> seen;
    for (auto& tier : tiers) {
        if (tier.empty()) throw Error(ErrorCode::EmptyInput, "empty ranking tier");
        std::sort(tier.begin(), tier.end());
        for (char l : tier) {
            index_for(l);
            if (!seen.insert(l).second)
                throw Error(ErrorCode::DuplicateLabel,
                            std::string("label '") + l + "' appears twice in ranking");
        }
    }
    if (seen.empty()) throw Error(ErrorCode::EmptyInput, "ranking has no labels");
    Preorder p;
    p.tiers = std::move(tiers);
    return p;
}

std::vector<char> Judgment::labels() const {
    std::vector<char> out;
    out.reserve(scores.size());
    for (const auto& [label, score] : scores) out.push_back(label);
    return out;
}

Judgment make_judgment(std::string analysis, Preorder ranking, std::map<char, int> scores) {
    std::vector<char> ranked = ranking.labels();
    std::vector<char> scored;
    scored.reserve(scores.size());
    for (const auto& [label, score] : scores) scored.push_back(label);
    if (ranked != scored)
        throw Error(ErrorCode::LabelSetMismatch,
                    "ranking labels and score-map labels differ");
    Judgment j;
    j.analysis = std::move(analysis);
    j.ranking = std::move(ranking);
    j.scores = std::move(scores);
    return j;
}

}  // namespace gqm
