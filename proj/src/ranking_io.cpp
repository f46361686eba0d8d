#include "gqm/ranking_io.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <vector>

#include "gqm/error.hpp"

namespace gqm {

namespace {

constexpr int kScoreFloor = 0;
constexpr int kScoreCeiling = 10;

std::size_t skip_ws(const std::string& s, std::size_t pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos;
}

bool is_label(char c) { return c >= 'A' && c <= 'Z'; }

[[noreturn]] void syntax_error(const std::string& what, std::size_t pos) {
    throw Error(ErrorCode::SyntaxError, what + " at offset " + std::to_string(pos));
}

}  // namespace

Preorder parse_ranking_string(const std::string& text) {
    std::vector<std::vector<char>> tiers;
    std::set<char> seen;
    std::size_t pos = skip_ws(text, 0);
    if (pos >= text.size() || !is_label(text[pos]))
        syntax_error("expected label", pos);

    tiers.push_back({text[pos]});
    seen.insert(text[pos]);
    ++pos;
    while (true) {
        pos = skip_ws(text, pos);
        if (pos >= text.size()) break;
        const char op = text[pos];
        if (op != '>' && op != '=') syntax_error("expected '>' or '='", pos);
        pos = skip_ws(text, pos + 1);
        if (pos >= text.size() || !is_label(text[pos]))
            syntax_error("expected label", pos);
        const char label = text[pos];
        if (!seen.insert(label).second)
            throw Error(ErrorCode::DuplicateLabel,
                        std::string("label '") + label + "' appears twice in ranking");
        if (op == '>')
            tiers.push_back({label});
        else
            tiers.back().push_back(label);
        ++pos;
    }
    return make_preorder(std::move(tiers));
}

std::string format_ranking(const Preorder& ranking) {
    std::string out;
    for (std::size_t t = 0; t < ranking.tiers.size(); ++t) {
        if (t > 0) out += " > ";
        const auto& tier = ranking.tiers[t];
        for (std::size_t i = 0; i < tier.size(); ++i) {
            if (i > 0) out += " = ";
            out += tier[i];
        }
    }
    return out;
}

std::map<char, int> parse_score_map(const std::string& text) {
    std::map<char, int> scores;
    std::size_t pos = skip_ws(text, 0);
    if (pos >= text.size() || text[pos] != '{') syntax_error("expected '{'", pos);
    pos = skip_ws(text, pos + 1);
    while (true) {
        if (pos >= text.size() || !is_label(text[pos]))
            syntax_error("expected label", pos);
        const char label = text[pos];
        pos = skip_ws(text, pos + 1);
        if (pos >= text.size() || text[pos] != ':') syntax_error("expected ':'", pos);
        pos = skip_ws(text, pos + 1);
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            syntax_error("expected integer score", pos);
        int value = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            value = value * 10 + (text[pos] - '0');
            if (value > 1000) break;  // enough to diagnose the range error
            ++pos;
        }
        if (value < kScoreFloor || value > kScoreCeiling)
            throw Error(ErrorCode::ScoreOutOfRange,
                        "score " + std::to_string(value) + " outside [" +
                            std::to_string(kScoreFloor) + ", " + std::to_string(kScoreCeiling) +
                            "]");
        if (!scores.emplace(label, value).second)
            throw Error(ErrorCode::DuplicateLabel,
                        std::string("label '") + label + "' appears twice in score map");
        pos = skip_ws(text, pos);
        if (pos < text.size() && text[pos] == ',') {
            pos = skip_ws(text, pos + 1);
            continue;
        }
        break;
    }
    if (pos >= text.size() || text[pos] != '}') syntax_error("expected '}'", pos);
    pos = skip_ws(text, pos + 1);
    if (pos != text.size()) syntax_error("trailing characters after '}'", pos);
    return scores;
}

std::string format_score_map(const std::map<char, int>& scores) {
    std::string out = "{";
    bool first = true;
    for (const auto& [label, value] : scores) {
        if (!first) out += ", ";
        first = false;
        out += label;
        out += ": ";
        out += std::to_string(value);
    }
    out += "}";
    return out;
}

Preorder induced_preorder(const std::map<char, int>& scores) {
    if (scores.empty()) throw Error(ErrorCode::EmptyInput, "empty score map");
    // Bucket labels by score, highest score first.
    std::map<int, std::vector<char>, std::greater<int>> buckets;
    for (const auto& [label, value] : scores) buckets[value].push_back(label);
    std::vector<std::vector<char>> tiers;
    tiers.reserve(buckets.size());
    for (auto& [value, labels] : buckets) tiers.push_back(std::move(labels));
    return make_preorder(std::move(tiers));
}

bool consistency_gate(const Preorder& ranking, const std::map<char, int>& scores) {
    std::vector<char> ranked = ranking.labels();
    std::vector<char> scored;
    scored.reserve(scores.size());
    for (const auto& [label, value] : scores) scored.push_back(label);
    if (ranked != scored)
        throw Error(ErrorCode::LabelSetMismatch,
                    "ranking labels and score-map labels differ");
    return ranking == induced_preorder(scores);
}

namespace {

// Attempts a strict parse, swallowing only grammar-level failures. Range and
// duplicate errors also disqualify the candidate substring.
std::optional<Preorder> try_parse_ranking(const std::string& text) {
    try {
        return parse_ranking_string(text);
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::optional<std::map<char, int>> try_parse_score_map(const std::string& text) {
    try {
        return parse_score_map(text);
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Strips an optional leading "Ranking:" tag (after leading whitespace).
std::string strip_ranking_tag(const std::string& line) {
    static const std::string kTag = "Ranking:";
    const std::size_t start = skip_ws(line, 0);
    if (line.compare(start, kTag.size(), kTag) == 0)
        return line.substr(start + kTag.size());
    return line;
}

}  // namespace

Judgment parse_judgment(const std::string& text) {
    // Locate the last line that parses as a ranking.
    std::optional<Preorder> ranking;
    std::size_t ranking_line_start = 0;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string::npos) line_end = text.size();
        const std::string line = text.substr(line_start, line_end - line_start);
        if (auto parsed = try_parse_ranking(strip_ranking_tag(line))) {
            ranking = std::move(parsed);
            ranking_line_start = line_start;
        }
        if (line_end == text.size()) break;
        line_start = line_end + 1;
    }
    if (!ranking) throw Error(ErrorCode::MissingRanking, "no ranking line found");

    // Locate the last {...} substring that parses as a score map. Score maps
    // contain no nested braces, so the next '}' closes the candidate.
    std::optional<std::map<char, int>> scores;
    for (std::size_t open = text.find('{'); open != std::string::npos;
         open = text.find('{', open + 1)) {
        const std::size_t close = text.find('}', open);
        if (close == std::string::npos) break;
        if (auto parsed = try_parse_score_map(text.substr(open, close - open + 1)))
            scores = std::move(parsed);
    }
    if (!scores) throw Error(ErrorCode::MissingScores, "no score map found");

    std::string analysis = text.substr(0, ranking_line_start);
    if (!analysis.empty() && analysis.back() == '\n') analysis.pop_back();
    return make_judgment(std::move(analysis), std::move(*ranking), std::move(*scores));
}

std::string format_judgment(const Judgment& judgment) {
    std::string out;
    if (!judgment.analysis.empty()) {
        out += judgment.analysis;
        out += '\n';
    }
    out += "Ranking: ";
    out += format_ranking(judgment.ranking);
    out += "\nScores: ";
    out += format_score_map(judgment.scores);
    out += '\n';
    return out;
}

}  // namespace gqm
