#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gqm/datagen.hpp"
#include "gqm/group_types.hpp"
#include "gqm/policy_opt.hpp"

namespace gqm {

// JSONL wire formats. One record per line, keys in schema order, UTF-8
// text unescaped. write(read(write(x))) == write(x) byte for byte; all
// decode errors carry a 1-based line number.
//
//   group:    {"source": s, "candidates": [{"label": "A", "text": t}, ...],
//              "ground_truth": [q, ...]}        (ground_truth optional)
//   judgment: {"group_id": id, "analysis": a, "ranking": "A > B",
//              "scores": {"A": 6, ...}}
//   pool:     {"source": s, "outputs": [{"system_id": i, "candidate": c,
//              "human_score": q}, ...]}

struct JudgmentRecord {
    std::string group_id;
    Judgment judgment;
};

std::vector<CandidateGroup> read_groups(std::istream& in);
void write_groups(std::span<const CandidateGroup> groups, std::ostream& out);

std::vector<JudgmentRecord> read_judgments(std::istream& in);
void write_judgments(std::span<const JudgmentRecord> records, std::ostream& out);

std::vector<SystemOutputs> read_pools(std::istream& in);
void write_pools(std::span<const SystemOutputs> pools, std::ostream& out);

// Training curves travel as CSV with this exact header.
inline constexpr const char* kCurveHeader =
    "step,mean_reward,vanished_fraction,task_quality,objective";

TrainCurve read_curve(std::istream& in);
void write_curve(const TrainCurve& curve, std::ostream& out);

// key=value config file ('#' starts a comment). Unknown keys are errors.
TrainConfig parse_train_config(std::istream& in);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace gqm
