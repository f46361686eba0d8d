// Command-line front door: reward scoring, ranking evaluation, saturation
// reports, the saturation-stall simulation, eval-group construction, and
// judge-guided reranking, all wired through the JSONL/CSV codecs.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gqm/advantage.hpp"
#include "gqm/analysis.hpp"
#include "gqm/datagen.hpp"
#include "gqm/error.hpp"
#include "gqm/io_formats.hpp"
#include "gqm/policy_opt.hpp"
#include "gqm/ranking_io.hpp"
#include "gqm/rewards.hpp"

namespace {

using nlohmann::ordered_json;

// Exit codes: 0 success, 2 input/schema error, 3 alignment error, 1 internal.
constexpr int kExitInputError = 2;
constexpr int kExitAlignmentError = 3;
constexpr int kExitInternalError = 1;

struct OutputSink {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputSink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path, std::ios::binary);
        if (!file)
            throw gqm::Error(gqm::ErrorCode::ConfigError, "cannot open output file '" + path + "'");
        stream = &file;
    }
    std::ostream& out() { return *stream; }
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw gqm::Error(gqm::ErrorCode::ConfigError, "cannot open input file '" + path + "'");
    return in;
}

// Groups are addressed by their 1-based record ordinal; judgment records
// carry that ordinal in group_id.
std::vector<std::pair<gqm::CandidateGroup, gqm::JudgmentRecord>> pair_by_id(
    std::vector<gqm::CandidateGroup> groups, std::vector<gqm::JudgmentRecord> judgments) {
    std::map<std::string, gqm::JudgmentRecord> by_id;
    std::vector<std::string> problems;
    for (auto& j : judgments) {
        const std::string id = j.group_id;
        if (by_id.contains(id)) {
            problems.push_back("duplicate judgment for group id '" + id + "'");
            continue;
        }
        by_id.emplace(id, std::move(j));
    }
    std::vector<std::pair<gqm::CandidateGroup, gqm::JudgmentRecord>> pairs;
    pairs.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const std::string id = std::to_string(i + 1);
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            problems.push_back("group id '" + id + "' has no judgment");
            continue;
        }
        pairs.emplace_back(std::move(groups[i]), std::move(it->second));
        by_id.erase(it);
    }
    for (const auto& [id, j] : by_id)
        problems.push_back("judgment for unknown group id '" + id + "'");
    if (!problems.empty()) {
        std::string message;
        for (const auto& p : problems) {
            if (!message.empty()) message += "; ";
            message += p;
        }
        throw gqm::Error(gqm::ErrorCode::MissingPair, message);
    }
    return pairs;
}

const std::vector<double>& require_ground_truth(const gqm::CandidateGroup& group,
                                                const std::string& id) {
    if (!group.ground_truth)
        throw gqm::Error(gqm::ErrorCode::MissingGroundTruth,
                         "group id '" + id + "' has no ground_truth");
    return *group.ground_truth;
}

struct RewardArgs {
    std::string groups_path;
    std::string judgments_path;
    double tie_epsilon = 0.0;
    double raw_max = 2.0;
};

int cmd_reward(const RewardArgs& args, OutputSink& sink) {
    auto groups_in = open_input(args.groups_path);
    auto groups = gqm::read_groups(groups_in);
    auto judgments_in = open_input(args.judgments_path);
    auto judgments = gqm::read_judgments(judgments_in);
    auto pairs = pair_by_id(std::move(groups), std::move(judgments));

    gqm::RewardConfig cfg;
    cfg.tie_epsilon = args.tie_epsilon;
    for (const auto& [group, record] : pairs) {
        const auto& truth = require_ground_truth(group, record.group_id);
        const gqm::Judgment& judgment = record.judgment;
        if (judgment.scores.size() != truth.size())
            throw gqm::Error(gqm::ErrorCode::LengthMismatch,
                             "group id '" + record.group_id + "': judgment covers " +
                                 std::to_string(judgment.scores.size()) + " labels for " +
                                 std::to_string(truth.size()) + " candidates");
        std::vector<double> predicted;
        std::vector<int> predicted_int;
        for (const auto& [label, score] : judgment.scores) {
            predicted.push_back(static_cast<double>(score));
            predicted_int.push_back(score);
        }
        const bool gate = gqm::consistency_gate(judgment.ranking, judgment.scores);
        const double r_acc = gqm::ranking_accuracy(truth, predicted, cfg.tie_epsilon);
        const double r_score = gqm::score_consistency(truth, predicted_int);
        const double r_total = gqm::total_reward(judgment, truth, cfg);
        const std::vector<double> raw{r_total};
        const double scaled = gqm::scale_rewards(raw, cfg, args.raw_max)[0];

        ordered_json out;
        out["group_id"] = record.group_id;
        out["r_acc"] = r_acc;
        out["r_score"] = r_score;
        out["gate"] = gate;
        out["r_total"] = r_total;
        out["scaled"] = scaled;
        sink.out() << out.dump(-1, ' ', false) << '\n';
    }
    return 0;
}

void write_report(const gqm::DatasetReport& report, const std::vector<std::string>& columns,
                  const std::string& format, std::ostream& out) {
    auto value_of = [&](const std::string& column) -> std::string {
        if (column == "n_groups") return std::to_string(report.n_groups);
        if (column == "mean_ranking_accuracy") return gqm::format_double(report.mean_ranking_accuracy);
        if (column == "mean_score") return gqm::format_double(report.mean_score);
        if (column == "saturation_rate") return gqm::format_double(report.saturation_rate);
        if (column == "gate_failure_rate") return gqm::format_double(report.gate_failure_rate);
        return std::to_string(report.n_errors);
    };
    if (format == "csv") {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << value_of(columns[i]);
        out << '\n';
        return;
    }
    std::size_t width = 0;
    for (const auto& c : columns) width = std::max(width, c.size());
    for (const auto& c : columns)
        out << c << std::string(width - c.size() + 2, ' ') << value_of(c) << '\n';
}

struct EvalArgs {
    std::string groups_path;
    std::string judgments_path;
    double tie_epsilon = 0.0;
    bool pool_pairs = false;
    std::string format = "text";
};

int cmd_eval_ranking(const EvalArgs& args, OutputSink& sink) {
    auto groups_in = open_input(args.groups_path);
    auto groups = gqm::read_groups(groups_in);
    auto judgments_in = open_input(args.judgments_path);
    auto judgments = gqm::read_judgments(judgments_in);
    auto paired = pair_by_id(std::move(groups), std::move(judgments));

    std::vector<gqm::EvalPair> pairs;
    pairs.reserve(paired.size());
    for (auto& [group, record] : paired)
        pairs.emplace_back(std::move(record.judgment),
                           require_ground_truth(group, record.group_id));

    gqm::RewardConfig cfg;
    cfg.tie_epsilon = args.tie_epsilon;
    const gqm::DatasetReport report = gqm::dataset_ranking_accuracy(pairs, cfg, args.pool_pairs);
    write_report(report,
                 {"n_groups", "mean_ranking_accuracy", "mean_score", "saturation_rate",
                  "gate_failure_rate", "n_errors"},
                 args.format, sink.out());
    return 0;
}

struct SaturationArgs {
    std::string judgments_path;
    int ceiling = 10;
    std::string format = "text";
};

int cmd_analyze_saturation(const SaturationArgs& args, OutputSink& sink) {
    auto judgments_in = open_input(args.judgments_path);
    auto judgments = gqm::read_judgments(judgments_in);
    std::vector<std::vector<int>> score_sets;
    score_sets.reserve(judgments.size());
    for (const auto& record : judgments) {
        std::vector<int> scores;
        for (const auto& [label, score] : record.judgment.scores) scores.push_back(score);
        score_sets.push_back(std::move(scores));
    }
    const gqm::DatasetReport report = gqm::saturation_report(score_sets, args.ceiling);
    write_report(report, {"n_groups", "mean_score", "saturation_rate"}, args.format, sink.out());
    return 0;
}

struct SimulateArgs {
    std::string config_path;
    std::string provider;
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
};

int cmd_simulate_grpo(const SimulateArgs& args, OutputSink& sink) {
    gqm::TrainConfig cfg;
    if (!args.config_path.empty()) {
        auto in = open_input(args.config_path);
        cfg = gqm::parse_train_config(in);
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.steps) cfg.steps = *args.steps;
    cfg.validate();

    const gqm::RewardProviderKind provider = args.provider == "gqm"
                                                 ? gqm::RewardProviderKind::Gqm
                                                 : gqm::RewardProviderKind::SaturatingSqm;
    const gqm::TrainCurve curve = gqm::run_simulation(cfg, provider);
    gqm::write_curve(curve, sink.out());

    if (curve.records.empty()) {
        std::cerr << "final: no steps\n";
    } else {
        const gqm::StepRecord& r = curve.records.back();
        std::cerr << "final: step=" << r.step << " mean_reward=" << gqm::format_double(r.mean_reward)
                  << " vanished_fraction=" << gqm::format_double(r.vanished_fraction)
                  << " task_quality=" << gqm::format_double(r.task_quality)
                  << " objective=" << gqm::format_double(r.objective) << '\n';
    }
    return 0;
}

struct MakeGroupsArgs {
    std::string pools_path;
    std::uint64_t seed = 0;
};

int cmd_make_groups(const MakeGroupsArgs& args, OutputSink& sink) {
    auto pools_in = open_input(args.pools_path);
    auto pools = gqm::read_pools(pools_in);
    std::vector<gqm::CandidateGroup> groups;
    groups.reserve(pools.size());
    for (std::size_t i = 0; i < pools.size(); ++i) {
        // Seed-splitting: pool i draws from its own stream, so pools can be
        // processed independently without changing output.
        gqm::Rng rng(args.seed + i);
        bool degenerate = false;
        groups.push_back(gqm::build_eval_groups(pools[i], rng, &degenerate));
        if (degenerate)
            std::cerr << "note: pool " << (i + 1) << " ('" << pools[i].source
                      << "') is flat (min == max); inclusion constraint vacuous\n";
    }
    gqm::write_groups(groups, sink.out());
    return 0;
}

struct RerankArgs {
    std::string groups_path;
    std::string judgments_path;
    std::string logprobs_path;  // switches to the best-of-n baseline
};

int cmd_rerank(const RerankArgs& args, OutputSink& sink) {
    auto groups_in = open_input(args.groups_path);
    auto groups = gqm::read_groups(groups_in);

    if (!args.logprobs_path.empty()) {
        // Best-of-n wants {"group_id", "mean_logprobs": [...]} per line.
        auto in = open_input(args.logprobs_path);
        std::map<std::string, std::vector<double>> by_id;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            ordered_json record;
            try {
                record = ordered_json::parse(line);
            } catch (const ordered_json::parse_error& e) {
                throw gqm::Error(gqm::ErrorCode::JsonSyntax, e.what(), line_no);
            }
            if (!record.is_object() || !record.contains("group_id") ||
                !record.contains("mean_logprobs") || !record["mean_logprobs"].is_array())
                throw gqm::Error(gqm::ErrorCode::SchemaViolation,
                                 "expected {\"group_id\", \"mean_logprobs\"}", line_no);
            std::vector<double> lps;
            for (const auto& v : record["mean_logprobs"]) {
                if (!v.is_number())
                    throw gqm::Error(gqm::ErrorCode::SchemaViolation,
                                     "mean_logprobs entries must be numbers", line_no);
                lps.push_back(v.get<double>());
            }
            by_id[record["group_id"].get<std::string>()] = std::move(lps);
        }
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const std::string id = std::to_string(i + 1);
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw gqm::Error(gqm::ErrorCode::MissingPair,
                                 "group id '" + id + "' has no logprob record");
            const char selected = gqm::best_of_n_select(groups[i], it->second);
            ordered_json out;
            out["group_id"] = id;
            out["selected"] = std::string(1, selected);
            sink.out() << out.dump(-1, ' ', false) << '\n';
        }
        return 0;
    }

    auto judgments_in = open_input(args.judgments_path);
    auto judgments = gqm::read_judgments(judgments_in);
    auto pairs = pair_by_id(std::move(groups), std::move(judgments));
    for (const auto& [group, record] : pairs) {
        const char selected = gqm::rerank_select(group, record.judgment);
        ordered_json out;
        out["group_id"] = record.group_id;
        out["selected"] = std::string(1, selected);
        sink.out() << out.dump(-1, ' ', false) << '\n';
    }
    return 0;
}

int exit_code_for(const gqm::Error& e) {
    return e.code() == gqm::ErrorCode::MissingPair ? kExitAlignmentError : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-quality reward modeling toolkit"};
    app.require_subcommand(1);

    std::string output_path;
    std::uint64_t global_seed = 0;
    bool seed_given = false;
    std::string config_path;
    app.add_option("--output", output_path, "Output path (default stdout)");
    app.add_option("--seed", global_seed, "Seed for randomized subcommands")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--config", config_path, "Config file (simulate-grpo)");

    RewardArgs reward_args;
    auto* reward = app.add_subcommand("reward", "Score judgments against annotated groups");
    reward->add_option("--groups", reward_args.groups_path, "Annotated groups JSONL")->required();
    reward->add_option("--judgments", reward_args.judgments_path, "Judgments JSONL")->required();
    reward->add_option("--tie-epsilon", reward_args.tie_epsilon, "Ground-truth tie band");
    reward->add_option("--raw-max", reward_args.raw_max, "Raw reward ceiling for scaling");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval-ranking", "Dataset mean ranking accuracy");
    eval->add_option("--groups", eval_args.groups_path, "Annotated groups JSONL")->required();
    eval->add_option("--judgments", eval_args.judgments_path, "Judgments JSONL")->required();
    eval->add_option("--tie-epsilon", eval_args.tie_epsilon, "Ground-truth tie band");
    eval->add_flag("--pool-pairs", eval_args.pool_pairs, "Pool pairs across groups");
    eval->add_option("--format", eval_args.format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    SaturationArgs sat_args;
    auto* sat = app.add_subcommand("analyze-saturation", "Score saturation report");
    sat->add_option("--judgments", sat_args.judgments_path, "Judgments JSONL")->required();
    sat->add_option("--ceiling", sat_args.ceiling, "Maximum allowed score");
    sat->add_option("--format", sat_args.format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    SimulateArgs sim_args;
    std::uint64_t sim_seed = 0;
    int sim_steps = 0;
    auto* sim = app.add_subcommand("simulate-grpo", "Saturation-stall training simulation");
    sim->add_option("--provider", sim_args.provider, "Reward provider")
        ->required()
        ->check(CLI::IsMember({"gqm", "sqm"}));
    auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "Simulation seed");
    auto* sim_steps_opt = sim->add_option("--steps", sim_steps, "Override step count");

    MakeGroupsArgs make_args;
    auto* make = app.add_subcommand("make-groups", "Build evaluation groups from system pools");
    make->add_option("--pools", make_args.pools_path, "System outputs JSONL")->required();

    RerankArgs rerank_args;
    auto* rerank = app.add_subcommand("rerank", "Select the best candidate per group");
    rerank->add_option("--groups", rerank_args.groups_path, "Groups JSONL")->required();
    auto* rr_judgments =
        rerank->add_option("--judgments", rerank_args.judgments_path, "Judgments JSONL");
    auto* rr_logprobs = rerank->add_option("--logprobs", rerank_args.logprobs_path,
                                           "Mean-logprob JSONL (best-of-n baseline)");
    rr_judgments->excludes(rr_logprobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        OutputSink sink(output_path);
        if (reward->parsed()) return cmd_reward(reward_args, sink);
        if (eval->parsed()) return cmd_eval_ranking(eval_args, sink);
        if (sat->parsed()) return cmd_analyze_saturation(sat_args, sink);
        if (sim->parsed()) {
            sim_args.config_path = config_path;
            if (sim_seed_opt->count() > 0) sim_args.seed = sim_seed;
            else if (seed_given) sim_args.seed = global_seed;
            if (sim_steps_opt->count() > 0) sim_args.steps = sim_steps;
            return cmd_simulate_grpo(sim_args, sink);
        }
        if (make->parsed()) {
            make_args.seed = global_seed;
            return cmd_make_groups(make_args, sink);
        }
        if (rerank->parsed()) {
            if (rerank_args.judgments_path.empty() && rerank_args.logprobs_path.empty())
                throw gqm::Error(gqm::ErrorCode::ConfigError,
                                 "rerank needs --judgments or --logprobs");
            return cmd_rerank(rerank_args, sink);
        }
        return kExitInternalError;
    } catch (const gqm::Error& e) {
        std::cerr << "error [" << gqm::error_code_name(e.code()) << "]: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternalError;
    }
}
