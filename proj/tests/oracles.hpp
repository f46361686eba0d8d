// Independent reference implementations used to verify the library. These
// are written directly from the defining formulas, on purpose sharing no
// code with the implementations under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "gqm/group_types.hpp"
#include "gqm/policy_opt.hpp"
#include "gqm/ranking_io.hpp"
#include "gqm/rng.hpp"

namespace oracles {

// ── pairwise ranking accuracy ────────────────────────────────────────────

// Brute-force fraction of sign-agreeing pairs. Ground-truth sign uses the
// epsilon tie band, prediction sign is exact.
inline double pairwise_accuracy(const std::vector<double>& q, const std::vector<double>& r,
                                double eps) {
    int agree = 0;
    int total = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            int qs;
            if (q[i] - q[j] > eps) qs = 1;
            else if (q[j] - q[i] > eps) qs = -1;
            else qs = 0;
            int rs;
            if (r[i] > r[j]) rs = 1;
            else if (r[i] < r[j]) rs = -1;
            else rs = 0;
            if (qs == rs) ++agree;
            ++total;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

// ── expected accuracy of a uniform random integer scorer ────────────────

// Exact enumeration: for each pair, count score assignments (s_i, s_j) in
// [lo, hi]^2 whose sign matches the ground-truth sign, then average over
// pairs and groups. Linearity of expectation makes per-pair enumeration
// exact for the mean accuracy.
inline double expected_random_accuracy(const std::vector<std::vector<double>>& ground_truths,
                                       int lo, int hi, double eps) {
    double group_sum = 0.0;
    for (const auto& q : ground_truths) {
        double pair_sum = 0.0;
        int pairs = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            for (std::size_t j = i + 1; j < q.size(); ++j) {
                int qs;
                if (q[i] - q[j] > eps) qs = 1;
                else if (q[j] - q[i] > eps) qs = -1;
                else qs = 0;
                int matches = 0;
                for (int a = lo; a <= hi; ++a)
                    for (int b = lo; b <= hi; ++b) {
                        const int rs = a > b ? 1 : (a < b ? -1 : 0);
                        if (rs == qs) ++matches;
                    }
                const int outcomes = (hi - lo + 1) * (hi - lo + 1);
                pair_sum += static_cast<double>(matches) / outcomes;
                ++pairs;
            }
        }
        group_sum += pair_sum / pairs;
    }
    return group_sum / static_cast<double>(ground_truths.size());
}

// ── finite-difference gradient ───────────────────────────────────────────

// Central differences of value_of(policy) with respect to each logit.
template <typename F>
inline std::vector<double> fd_gradient(F&& value_of, const gqm::ToyPolicy& policy, double h) {
    std::vector<double> grad(policy.logits.size());
    gqm::ToyPolicy probe = policy;
    for (std::size_t k = 0; k < policy.logits.size(); ++k) {
        probe.logits[k] = policy.logits[k] + h;
        const double up = value_of(probe);
        probe.logits[k] = policy.logits[k] - h;
        const double down = value_of(probe);
        probe.logits[k] = policy.logits[k];
        grad[k] = (up - down) / (2.0 * h);
    }
    return grad;
}

// Relative error with a floor that keeps zero-gradient entries comparable.
inline double rel_err(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-6});
    return std::fabs(a - b) / scale;
}

// ── generators ───────────────────────────────────────────────────────────

// Random preorder over the first n labels.
inline gqm::Preorder random_preorder(gqm::Rng& rng, int n) {
    std::vector<char> labels;
    for (int i = 0; i < n; ++i) labels.push_back(static_cast<char>('A' + i));
    rng.shuffle(labels);
    std::vector<std::vector<char>> tiers;
    for (char l : labels) {
        if (tiers.empty() || rng.uniform_real() < 0.5) tiers.push_back({l});
        else tiers.back().push_back(l);
    }
    return gqm::make_preorder(std::move(tiers));
}

// Scores that induce exactly the given preorder (distinct descending tier
// values). Requires tier count <= 11.
inline std::map<char, int> consistent_scores(gqm::Rng& rng, const gqm::Preorder& ranking) {
    const int tiers = static_cast<int>(ranking.tiers.size());
    // Pick `tiers` distinct values in [0,10], descending.
    std::vector<int> values;
    for (int v = 0; v <= 10; ++v) values.push_back(v);
    rng.shuffle(values);
    values.resize(tiers);
    std::sort(values.begin(), values.end(), std::greater<int>());
    std::map<char, int> scores;
    for (int t = 0; t < tiers; ++t)
        for (char l : ranking.tiers[t]) scores[l] = values[t];
    return scores;
}

// Random scores with no relation to any ranking.
inline std::map<char, int> random_scores(gqm::Rng& rng, int n) {
    std::map<char, int> scores;
    for (int i = 0; i < n; ++i)
        scores[static_cast<char>('A' + i)] = static_cast<int>(rng.uniform_int(0, 10));
    return scores;
}

inline std::string random_analysis(gqm::Rng& rng) {
    static const char* kPieces[] = {
        "Candidate A preserves the idiom.",
        "B drops the second clause; accuracy suffers.",
        "Both render the named entity correctly.",
        "Fluency is comparable across the group.",
        "C paraphrases where the source is literal.",
        "Terminology: A > B on the honorific.",
        "{not a score map",
        "Ranking noted inside prose: B > A seems wrong.",
        "",
        "Overall the gap is small.",
    };
    std::string out;
    const int lines = static_cast<int>(rng.uniform_int(0, 3));
    for (int i = 0; i < lines; ++i) {
        if (i > 0) out += '\n';
        out += kPieces[rng.uniform_int(0, std::size(kPieces) - 1)];
    }
    return out;
}

// A judgment whose ranking matches its scores (gate passes).
inline gqm::Judgment random_consistent_judgment(gqm::Rng& rng, int n) {
    gqm::Preorder ranking = random_preorder(rng, n);
    std::map<char, int> scores = consistent_scores(rng, ranking);
    return gqm::make_judgment(random_analysis(rng), std::move(ranking), std::move(scores));
}

// A judgment whose stated ranking provably differs from the score-induced
// one (gate must fail).
inline gqm::Judgment random_gate_violating_judgment(gqm::Rng& rng, int n) {
    for (;;) {
        std::map<char, int> scores = random_scores(rng, n);
        gqm::Preorder stated = random_preorder(rng, n);
        if (!(stated == gqm::induced_preorder(scores)))
            return gqm::make_judgment(random_analysis(rng), std::move(stated), std::move(scores));
    }
}

inline std::string random_text(gqm::Rng& rng, int max_len) {
    static const char kAlphabet[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,:;>=-{}\"\\\n\t";
    const int len = static_cast<int>(rng.uniform_int(0, max_len));
    std::string out;
    out.reserve(len);
    for (int i = 0; i < len; ++i)
        out += kAlphabet[rng.uniform_int(0, std::size(kAlphabet) - 2)];
    return out;
}

// Source/candidate text with some multi-byte UTF-8 mixed in.
inline std::string random_utf8_text(gqm::Rng& rng, int max_pieces) {
    static const char* kPieces[] = {
        "der", "Fluss", "\xC3\xBC" "ber", "\xE6\xB2\xB3", "\xE5\xB7\x9D",
        "bridge", "q\"uote", "tab\t", "back\\slash", "7", " ", "\xF0\x9F\x8C\x8A",
    };
    const int pieces = static_cast<int>(rng.uniform_int(1, max_pieces));
    std::string out;
    for (int i = 0; i < pieces; ++i) out += kPieces[rng.uniform_int(0, std::size(kPieces) - 1)];
    return out;
}

// Random group, with ground truth present about half the time.
inline gqm::CandidateGroup random_group(gqm::Rng& rng) {
    const int n = static_cast<int>(rng.uniform_int(2, 6));
    std::vector<std::string> texts;
    for (int i = 0; i < n; ++i) texts.push_back(random_utf8_text(rng, 4));
    if (rng.uniform_real() < 0.5) return gqm::make_group(random_utf8_text(rng, 3), std::move(texts));
    std::vector<double> truth;
    for (int i = 0; i < n; ++i)
        truth.push_back(static_cast<double>(rng.uniform_int(0, 40)) / 4.0);
    return gqm::make_group(random_utf8_text(rng, 3), std::move(texts), std::move(truth));
}

// Random trajectory batch for gradient checks: logprobs and advantages are
// arbitrary (not self-consistent), which exercises clipping on both sides.
inline std::vector<gqm::TrajectoryGroup> random_batch(gqm::Rng& rng, int n_groups, int group_size,
                                                      int positions, int vocab) {
    std::vector<gqm::TrajectoryGroup> groups;
    for (int g = 0; g < n_groups; ++g) {
        gqm::TrajectoryGroup group;
        for (int i = 0; i < group_size; ++i) {
            gqm::Trajectory traj;
            const int len = static_cast<int>(rng.uniform_int(1, positions));
            for (int t = 0; t < len; ++t) {
                traj.tokens.push_back(static_cast<int>(rng.uniform_int(0, vocab - 1)));
                traj.old_logprobs.push_back(rng.uniform_real(-3.0, -0.05));
            }
            traj.advantage = rng.uniform_real(-2.0, 2.0);
            group.push_back(std::move(traj));
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

inline gqm::ToyPolicy random_policy(gqm::Rng& rng, int positions, int vocab) {
    gqm::ToyPolicy policy = gqm::ToyPolicy::zeros(positions, vocab);
    for (double& z : policy.logits) z = -2.0 + 4.0 * rng.uniform_real();
    return policy;
}

}  // namespace oracles
