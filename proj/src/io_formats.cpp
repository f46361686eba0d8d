#include "gqm/io_formats.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <system_error>

#include "json.hpp"

#include "gqm/error.hpp"
#include "gqm/ranking_io.hpp"

namespace gqm {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error(ErrorCode::SchemaViolation, "unformattable double");
    return std::string(buf, ptr);
}

namespace {

[[noreturn]] void schema_error(int line, const std::string& what) {
    throw Error(ErrorCode::SchemaViolation, what, line);
}

// Reads non-blank lines, parsing each as one JSON record.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
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
            throw Error(ErrorCode::JsonSyntax, e.what(), line_no);
        }
        fn(record, line_no);
    }
}

void require_keys(const ordered_json& record, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, int line) {
    if (!record.is_object()) schema_error(line, "record is not a JSON object");
    for (const char* key : required)
        if (!record.contains(key)) schema_error(line, std::string("missing field '") + key + "'");
    for (const auto& [key, value] : record.items()) {
        bool known = false;
        for (const char* k : required) known |= key == k;
        for (const char* k : optional) known |= key == k;
        if (!known) schema_error(line, "unknown field '" + key + "'");
    }
}

std::string get_string(const ordered_json& j, const char* field, int line) {
    if (!j.is_string()) schema_error(line, std::string("field '") + field + "' must be a string");
    return j.get<std::string>();
}

double get_finite(const ordered_json& j, const char* field, int line) {
    if (!j.is_number()) schema_error(line, std::string("field '") + field + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_error(line, std::string("field '") + field + "' is not finite");
    return v;
}

char get_label(const std::string& s, int line) {
    if (s.size() != 1 || s[0] < 'A' || s[0] > 'Z')
        schema_error(line, "label '" + s + "' is not a single letter A..Z");
    return s[0];
}

}  // namespace

std::vector<CandidateGroup> read_groups(std::istream& in) {
    std::vector<CandidateGroup> groups;
    for_each_record(in, [&](const ordered_json& record, int line) {
        require_keys(record, {"source", "candidates"}, {"ground_truth"}, line);
        CandidateGroup group;
        group.source = get_string(record["source"], "source", line);
        if (!record["candidates"].is_array())
            schema_error(line, "field 'candidates' must be an array");
        for (const ordered_json& cj : record["candidates"]) {
            require_keys(cj, {"label", "text"}, {}, line);
            Candidate c;
            c.label = get_label(get_string(cj["label"], "label", line), line);
            c.text = get_string(cj["text"], "text", line);
            group.candidates.push_back(std::move(c));
        }
        if (record.contains("ground_truth")) {
            if (!record["ground_truth"].is_array())
                schema_error(line, "field 'ground_truth' must be an array");
            std::vector<double> scores;
            for (const ordered_json& sj : record["ground_truth"])
                scores.push_back(get_finite(sj, "ground_truth", line));
            group.ground_truth = std::move(scores);
        }
        try {
            validate_group(group);
        } catch (const Error& e) {
            schema_error(line, e.what());
        }
        groups.push_back(std::move(group));
    });
    return groups;
}

void write_groups(std::span<const CandidateGroup> groups, std::ostream& out) {
    for (const CandidateGroup& group : groups) {
        validate_group(group);
        ordered_json record;
        record["source"] = group.source;
        ordered_json candidates = ordered_json::array();
        for (const Candidate& c : group.candidates) {
            ordered_json cj;
            cj["label"] = std::string(1, c.label);
            cj["text"] = c.text;
            candidates.push_back(std::move(cj));
        }
        record["candidates"] = std::move(candidates);
        if (group.ground_truth) {
            for (double v : *group.ground_truth)
                if (!std::isfinite(v))
                    throw Error(ErrorCode::SchemaViolation, "non-finite ground truth score");
            record["ground_truth"] = *group.ground_truth;
        }
        out << record.dump(-1, ' ', false) << '\n';
    }
}

std::vector<JudgmentRecord> read_judgments(std::istream& in) {
    std::vector<JudgmentRecord> records;
    for_each_record(in, [&](const ordered_json& record, int line) {
        require_keys(record, {"group_id", "analysis", "ranking", "scores"}, {}, line);
        JudgmentRecord out;
        out.group_id = get_string(record["group_id"], "group_id", line);
        std::string analysis = get_string(record["analysis"], "analysis", line);
        Preorder ranking;
        try {
            ranking = parse_ranking_string(get_string(record["ranking"], "ranking", line));
        } catch (const Error& e) {
            schema_error(line, std::string("field 'ranking': ") + e.what());
        }
        if (!record["scores"].is_object())
            schema_error(line, "field 'scores' must be an object");
        std::map<char, int> scores;
        for (const auto& [key, value] : record["scores"].items()) {
            const char label = get_label(key, line);
            if (!value.is_number_integer())
                schema_error(line, "score for '" + key + "' must be an integer");
            const int score = value.get<int>();
            if (score < 0 || score > 10)
                schema_error(line, "score for '" + key + "' outside [0, 10]");
            if (!scores.emplace(label, score).second)
                schema_error(line, "duplicate score label '" + key + "'");
        }
        try {
            out.judgment = make_judgment(std::move(analysis), std::move(ranking), std::move(scores));
        } catch (const Error& e) {
            schema_error(line, e.what());
        }
        records.push_back(std::move(out));
    });
    return records;
}

void write_judgments(std::span<const JudgmentRecord> records, std::ostream& out) {
    for (const JudgmentRecord& r : records) {
        ordered_json record;
        record["group_id"] = r.group_id;
        record["analysis"] = r.judgment.analysis;
        record["ranking"] = format_ranking(r.judgment.ranking);
        ordered_json scores = ordered_json::object();
        for (const auto& [label, score] : r.judgment.scores)
            scores[std::string(1, label)] = score;
        record["scores"] = std::move(scores);
        out << record.dump(-1, ' ', false) << '\n';
    }
}

std::vector<SystemOutputs> read_pools(std::istream& in) {
    std::vector<SystemOutputs> pools;
    for_each_record(in, [&](const ordered_json& record, int line) {
        require_keys(record, {"source", "outputs"}, {}, line);
        SystemOutputs pool;
        pool.source = get_string(record["source"], "source", line);
        if (!record["outputs"].is_array())
            schema_error(line, "field 'outputs' must be an array");
        for (const ordered_json& oj : record["outputs"]) {
            require_keys(oj, {"system_id", "candidate", "human_score"}, {}, line);
            SystemOutput o;
            o.system_id = get_string(oj["system_id"], "system_id", line);
            o.candidate = get_string(oj["candidate"], "candidate", line);
            o.human_score = get_finite(oj["human_score"], "human_score", line);
            pool.outputs.push_back(std::move(o));
        }
        if (pool.outputs.size() < 2)
            schema_error(line, "pool needs at least 2 outputs");
        pools.push_back(std::move(pool));
    });
    return pools;
}

void write_pools(std::span<const SystemOutputs> pools, std::ostream& out) {
    for (const SystemOutputs& pool : pools) {
        ordered_json record;
        record["source"] = pool.source;
        ordered_json outputs = ordered_json::array();
        for (const SystemOutput& o : pool.outputs) {
            if (!std::isfinite(o.human_score))
                throw Error(ErrorCode::SchemaViolation, "non-finite human score");
            ordered_json oj;
            oj["system_id"] = o.system_id;
            oj["candidate"] = o.candidate;
            oj["human_score"] = o.human_score;
            outputs.push_back(std::move(oj));
        }
        record["outputs"] = std::move(outputs);
        out << record.dump(-1, ' ', false) << '\n';
    }
}

namespace {

double parse_csv_double(const std::string& field, int line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        schema_error(line, "bad numeric field '" + field + "'");
    return value;
}

}  // namespace

TrainCurve read_curve(std::istream& in) {
    TrainCurve curve;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kCurveHeader)
                schema_error(line_no, std::string("expected header '") + kCurveHeader + "'");
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 5) schema_error(line_no, "expected 5 comma-separated fields");
        StepRecord r;
        int step = 0;
        const auto [ptr, ec] =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), step);
        if (ec != std::errc() || ptr != fields[0].data() + fields[0].size())
            schema_error(line_no, "bad step field '" + fields[0] + "'");
        r.step = step;
        r.mean_reward = parse_csv_double(fields[1], line_no);
        r.vanished_fraction = parse_csv_double(fields[2], line_no);
        r.task_quality = parse_csv_double(fields[3], line_no);
        r.objective = parse_csv_double(fields[4], line_no);
        curve.records.push_back(r);
    }
    if (!saw_header) throw Error(ErrorCode::SchemaViolation, "missing CSV header", 1);
    return curve;
}

void write_curve(const TrainCurve& curve, std::ostream& out) {
    out << kCurveHeader << '\n';
    for (const StepRecord& r : curve.records) {
        out << r.step << ',' << format_double(r.mean_reward) << ','
            << format_double(r.vanished_fraction) << ',' << format_double(r.task_quality) << ','
            << format_double(r.objective) << '\n';
    }
}

TrainConfig parse_train_config(std::istream& in) {
    TrainConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError, "expected key=value", line_no);
        auto trim = [](std::string s) {
            const std::size_t a = s.find_first_not_of(" \t\r");
            const std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw Error(ErrorCode::ConfigError, "empty value for key '" + key + "'", line_no);

        auto as_double = [&](const std::string& v) {
            double out_value = 0.0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out_value);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw Error(ErrorCode::ConfigError, "bad number '" + v + "'", line_no);
            return out_value;
        };
        auto as_int = [&](const std::string& v) {
            int out_value = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out_value);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw Error(ErrorCode::ConfigError, "bad integer '" + v + "'", line_no);
            return out_value;
        };
        auto as_seed = [&](const std::string& v) {
            std::uint64_t out_value = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out_value);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw Error(ErrorCode::ConfigError, "bad seed '" + v + "'", line_no);
            return out_value;
        };
        auto as_bool = [&](const std::string& v) {
            if (v == "true" || v == "1") return true;
            if (v == "false" || v == "0") return false;
            throw Error(ErrorCode::ConfigError, "bad boolean '" + v + "'", line_no);
        };

        if (key == "clip_epsilon") cfg.clip_epsilon = as_double(value);
        else if (key == "gamma") cfg.gamma = as_double(value);
        else if (key == "group_size") cfg.group_size = as_int(value);
        else if (key == "learning_rate") cfg.learning_rate = as_double(value);
        else if (key == "steps") cfg.steps = as_int(value);
        else if (key == "ratio_mode") {
            if (value == "token") cfg.ratio_mode = RatioMode::Token;
            else if (value == "sequence") cfg.ratio_mode = RatioMode::Sequence;
            else throw Error(ErrorCode::ConfigError, "ratio_mode must be token|sequence", line_no);
        } else if (key == "advantage_mode") {
            if (value == "standardized") cfg.advantage_mode = AdvantageMode::Standardized;
            else if (value == "mean_only") cfg.advantage_mode = AdvantageMode::MeanOnly;
            else
                throw Error(ErrorCode::ConfigError,
                            "advantage_mode must be standardized|mean_only", line_no);
        } else if (key == "kl_enabled") cfg.kl_enabled = as_bool(value);
        else if (key == "kl_coef") cfg.kl_coef = as_double(value);
        else if (key == "max_len") cfg.max_len = as_int(value);
        else if (key == "overlong_buffer") cfg.overlong_buffer = as_int(value);
        else if (key == "seed") cfg.seed = as_seed(value);
        else if (key == "num_sources") cfg.num_sources = as_int(value);
        else if (key == "seq_len") cfg.seq_len = as_int(value);
        else if (key == "vocab_size") cfg.vocab_size = as_int(value);
        else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'", line_no);
    }
    cfg.validate();
    return cfg;
}

}  // namespace gqm
