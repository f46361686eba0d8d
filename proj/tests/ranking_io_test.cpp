#include "gqm/ranking_io.hpp"

#include <gtest/gtest.h>

#include "gqm/error.hpp"
#include "gqm/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using gqm::ErrorCode;
using testutil::throws_code;

namespace {

using Tiers = std::vector<std::vector<char>>;

// ── ranking strings ──────────────────────────────────────────────────────

TEST(ParseRanking, HandlesTiesAndStrictOrder) {
    EXPECT_EQ(gqm::parse_ranking_string("A > B = C").tiers, (Tiers{{'A'}, {'B', 'C'}}));
    EXPECT_EQ(gqm::parse_ranking_string("A").tiers, (Tiers{{'A'}}));
    EXPECT_EQ(gqm::parse_ranking_string("A = B = C").tiers, (Tiers{{'A', 'B', 'C'}}));
    EXPECT_EQ(gqm::parse_ranking_string("B>A").tiers, (Tiers{{'B'}, {'A'}}));
}

TEST(ParseRanking, IsWhitespaceInsensitive) {
    const auto spaced = gqm::parse_ranking_string("  A\t>  B   =\tC ");
    EXPECT_EQ(spaced, gqm::parse_ranking_string("A>B=C"));
}

TEST(ParseRanking, RejectsMalformedInput) {
    EXPECT_TRUE(throws_code([] { gqm::parse_ranking_string("A > A"); }, ErrorCode::DuplicateLabel));
    EXPECT_TRUE(throws_code([] { gqm::parse_ranking_string(""); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_ranking_string("a > b"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_ranking_string("A >"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_ranking_string("A < B"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_ranking_string("A > B extra"); },
                            ErrorCode::SyntaxError));
}

TEST(FormatRanking, RoundTripsCanonicalForm) {
    const auto p = gqm::make_preorder({{'A'}, {'C', 'B'}});
    EXPECT_EQ(gqm::format_ranking(p), "A > B = C");
    EXPECT_EQ(gqm::parse_ranking_string(gqm::format_ranking(p)), p);
}

// ── score maps ───────────────────────────────────────────────────────────

TEST(ParseScoreMap, AcceptsExhibitedForms) {
    const std::map<char, int> expected{{'A', 6}, {'B', 5}, {'C', 5}};
    EXPECT_EQ(gqm::parse_score_map("{A: 6, B: 5, C: 5}"), expected);
    const std::map<char, int> fig{{'A', 10}, {'B', 9}, {'C', 8}};
    EXPECT_EQ(gqm::parse_score_map("{A: 10, B: 9, C: 8}"), fig);
    EXPECT_EQ(gqm::parse_score_map("{A:0}"), (std::map<char, int>{{'A', 0}}));
}

TEST(ParseScoreMap, EnforcesRangeAndShape) {
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("{A: 11}"); }, ErrorCode::ScoreOutOfRange));
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("{A: 6, A: 5}"); },
                            ErrorCode::DuplicateLabel));
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("{A: -1}"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("A: 6"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("{A 6}"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("{}"); }, ErrorCode::SyntaxError));
    EXPECT_TRUE(throws_code([] { gqm::parse_score_map("{A: 6} trailing"); },
                            ErrorCode::SyntaxError));
}

// ── induced preorder and the gate ────────────────────────────────────────

TEST(InducedPreorder, SortsByDescendingScore) {
    EXPECT_EQ(gqm::induced_preorder({{'A', 6}, {'B', 5}, {'C', 5}}).tiers,
              (Tiers{{'A'}, {'B', 'C'}}));
    EXPECT_EQ(gqm::induced_preorder({{'A', 7}, {'B', 7}}).tiers, (Tiers{{'A', 'B'}}));
    EXPECT_EQ(gqm::induced_preorder({{'A', 1}, {'B', 10}}).tiers, (Tiers{{'B'}, {'A'}}));
    EXPECT_TRUE(throws_code([] { gqm::induced_preorder({}); }, ErrorCode::EmptyInput));
}

TEST(ConsistencyGate, ComparesTierLists) {
    const std::map<char, int> scores{{'A', 6}, {'B', 5}, {'C', 5}};
    EXPECT_TRUE(gqm::consistency_gate(gqm::make_preorder({{'A'}, {'B', 'C'}}), scores));
    EXPECT_FALSE(gqm::consistency_gate(gqm::make_preorder({{'A'}, {'B'}, {'C'}}), scores));
    EXPECT_TRUE(throws_code(
        [] { gqm::consistency_gate(gqm::make_preorder({{'A'}}), {{'B', 5}}); },
        ErrorCode::LabelSetMismatch));
}

// Exhaustive gate soundness: every preorder vs. every score map, G <= 3,
// scores in [0, 3].
TEST(ConsistencyGate, SoundnessExhaustive) {
    for (int g = 1; g <= 3; ++g) {
        // Enumerate preorders as ordered set partitions via tier-assignment
        // sequences, then all score maps via base-4 counting.
        std::vector<gqm::Preorder> preorders;
        const int assignments = g == 1 ? 1 : (g == 2 ? 2 : 6);  // permutations of labels
        std::vector<char> labels;
        for (int i = 0; i < g; ++i) labels.push_back(static_cast<char>('A' + i));
        std::sort(labels.begin(), labels.end());
        std::vector<char> perm = labels;
        do {
            // Each permutation plus a break mask gives an ordered partition;
            // dedupe through canonical make_preorder equality later.
            for (int mask = 0; mask < (1 << (g - 1)); ++mask) {
                Tiers tiers{{perm[0]}};
                for (int i = 1; i < g; ++i) {
                    if (mask & (1 << (i - 1))) tiers.push_back({perm[i]});
                    else tiers.back().push_back(perm[i]);
                }
                const auto candidate = gqm::make_preorder(tiers);
                bool seen = false;
                for (const auto& p : preorders) seen |= p == candidate;
                if (!seen) preorders.push_back(candidate);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        ASSERT_EQ(static_cast<int>(preorders.size()), g == 1 ? 1 : (g == 2 ? 3 : 13));
        (void)assignments;

        int total_scores = 1;
        for (int i = 0; i < g; ++i) total_scores *= 4;
        for (int code = 0; code < total_scores; ++code) {
            std::map<char, int> scores;
            int c = code;
            for (int i = 0; i < g; ++i) {
                scores[static_cast<char>('A' + i)] = c % 4;
                c /= 4;
            }
            const auto induced = gqm::induced_preorder(scores);
            for (const auto& p : preorders)
                ASSERT_EQ(gqm::consistency_gate(p, scores), p == induced);
        }
    }
}

// ── judgment extraction ──────────────────────────────────────────────────

TEST(ParseJudgment, CanonicalLayout) {
    const auto j = gqm::parse_judgment("the analysis\nRanking: A > B\nScores: {A: 9, B: 7}");
    EXPECT_EQ(j.analysis, "the analysis");
    EXPECT_EQ(j.ranking.tiers, (Tiers{{'A'}, {'B'}}));
    EXPECT_EQ(j.scores, (std::map<char, int>{{'A', 9}, {'B', 7}}));
}

TEST(ParseJudgment, TakesLastRankingLineAndLastScoreMap) {
    const auto j = gqm::parse_judgment(
        "B > A\n"
        "we first thought {A: 1, B: 9} but revised\n"
        "Ranking: A > B\n"
        "Scores: {A: 9, B: 7}");
    EXPECT_EQ(j.ranking.tiers, (Tiers{{'A'}, {'B'}}));
    EXPECT_EQ(j.scores, (std::map<char, int>{{'A', 9}, {'B', 7}}));
    EXPECT_EQ(j.analysis, "B > A\nwe first thought {A: 1, B: 9} but revised");
}

TEST(ParseJudgment, WorksWithoutTagAndWithoutAnalysis) {
    const auto j = gqm::parse_judgment("A = B\n{A: 4, B: 4}\n");
    EXPECT_EQ(j.analysis, "");
    EXPECT_EQ(j.ranking.tiers, (Tiers{{'A', 'B'}}));
}

TEST(ParseJudgment, ReportsMissingParts) {
    EXPECT_TRUE(throws_code([] { gqm::parse_judgment("prose only, no structure"); },
                            ErrorCode::MissingRanking));
    EXPECT_TRUE(throws_code([] { gqm::parse_judgment("Ranking: A > B\nno scores here"); },
                            ErrorCode::MissingScores));
    EXPECT_TRUE(throws_code(
        [] { gqm::parse_judgment("Ranking: A > B\nScores: {A: 9, C: 7}"); },
        ErrorCode::LabelSetMismatch));
}

TEST(FormatJudgment, EmitsCanonicalText) {
    const auto j = gqm::make_judgment("a", gqm::make_preorder({{'A'}, {'B', 'C'}}),
                                      {{'A', 6}, {'B', 5}, {'C', 5}});
    EXPECT_EQ(gqm::format_judgment(j), "a\nRanking: A > B = C\nScores: {A: 6, B: 5, C: 5}\n");
    const auto no_analysis =
        gqm::make_judgment("", gqm::make_preorder({{'A'}, {'B'}}), {{'A', 9}, {'B', 7}});
    EXPECT_EQ(gqm::format_judgment(no_analysis), "Ranking: A > B\nScores: {A: 9, B: 7}\n");
}

TEST(FormatJudgment, RoundTripsRandomJudgments) {
    gqm::Rng rng(20260814);
    for (int i = 0; i < 2000; ++i) {
        const int n = static_cast<int>(rng.uniform_int(1, 8));
        gqm::Preorder ranking = oracles::random_preorder(rng, n);
        std::map<char, int> scores = oracles::random_scores(rng, n);
        const auto j = gqm::make_judgment(oracles::random_analysis(rng), ranking, scores);
        const auto back = gqm::parse_judgment(gqm::format_judgment(j));
        ASSERT_EQ(back.analysis, j.analysis);
        ASSERT_EQ(back.ranking, j.ranking);
        ASSERT_EQ(back.scores, j.scores);
    }
}

TEST(ParseJudgment, SurvivesFuzzedInput) {
    gqm::Rng rng(99);
    int parsed = 0;
    for (int i = 0; i < 5000; ++i) {
        try {
            (void)gqm::parse_judgment(oracles::random_text(rng, 60));
            ++parsed;
        } catch (const gqm::Error&) {
            // any library error is acceptable; crashes are not
        }
    }
    // Random soup occasionally contains a one-letter "ranking" plus braces;
    // mostly it should fail cleanly.
    EXPECT_LT(parsed, 5000);
}

}  // namespace
