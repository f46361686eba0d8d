#pragma once

#include <map>
#include <string>

#include "gqm/group_types.hpp"

namespace gqm {

// Text layer for judge outputs. The ranking grammar is
//
//     label (('>' | '=') label)*
//
// with single-letter labels A..Z and insignificant whitespace, e.g.
// "A > B = C". Score maps are integer literals like "{A: 6, B: 5, C: 5}"
// with values in [0, 10].

// Strict parse of a complete ranking string. Throws SyntaxError on any
// deviation from the grammar, DuplicateLabel on repeated labels.
Preorder parse_ranking_string(const std::string& text);

// Canonical rendering: tiers joined with " > ", ties with " = ", labels
// within a tier alphabetical.
std::string format_ranking(const Preorder& ranking);

// Strict parse of a complete score-map literal. Throws SyntaxError,
// DuplicateLabel, or ScoreOutOfRange (value outside [0, 10]).
std::map<char, int> parse_score_map(const std::string& text);

// Canonical rendering, labels alphabetical: "{A: 6, B: 5}".
std::string format_score_map(const std::map<char, int>& scores);

// Ranking implied by the scores: higher score means better tier, equal
// scores share a tier. Throws EmptyInput on an empty map.
Preorder induced_preorder(const std::map<char, int>& scores);

// True when the stated ranking and the score-induced ranking are the same
// preorder. Throws LabelSetMismatch when the two cover different labels.
bool consistency_gate(const Preorder& ranking, const std::map<char, int>& scores);

// Extracts a Judgment from free-form judge text. The ranking is taken from
// the last line that parses under the ranking grammar (an optional leading
// "Ranking:" tag is ignored); the scores from the last {...} substring that
// parses as a score map. Everything before the ranking line becomes the
// analysis. Throws MissingRanking / MissingScores when either part cannot
// be found, LabelSetMismatch when they disagree on labels.
Judgment parse_judgment(const std::string& text);

// Canonical rendering:
//
//     <analysis>\n           (omitted when the analysis is empty)
//     Ranking: A > B = C\n
//     Scores: {A: 6, B: 5, C: 5}\n
//
// parse_judgment(format_judgment(j)) reproduces j exactly.
std::string format_judgment(const Judgment& judgment);

}  // namespace gqm
