#include "gqm/advantage.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gqm/error.hpp"
#include "gqm/rng.hpp"
#include "test_util.hpp"

using gqm::ErrorCode;
using testutil::throws_code;

namespace {

std::vector<double> random_rewards(gqm::Rng& rng, int g) {
    std::vector<double> r(g);
    for (auto& v : r) v = rng.uniform_real(-4.0, 4.0);
    return r;
}

TEST(GrpoAdvantage, PinnedValues) {
    const std::vector<double> alternating{1, 0, 1, 0};
    const auto a = gqm::grpo_advantage(alternating);
    ASSERT_EQ(a.values.size(), 4u);
    EXPECT_DOUBLE_EQ(a.values[0], 1.0);
    EXPECT_DOUBLE_EQ(a.values[1], -1.0);
    EXPECT_DOUBLE_EQ(a.values[2], 1.0);
    EXPECT_DOUBLE_EQ(a.values[3], -1.0);

    const std::vector<double> pair{3, 1};
    const auto b = gqm::grpo_advantage(pair);
    EXPECT_DOUBLE_EQ(b.values[0], 1.0);
    EXPECT_DOUBLE_EQ(b.values[1], -1.0);
}

TEST(GrpoAdvantage, DegenerateGroupVanishes) {
    const std::vector<double> flat{0.7, 0.7, 0.7};
    const auto a = gqm::grpo_advantage(flat);
    for (double v : a.values) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(throws_code([] { gqm::grpo_advantage(std::vector<double>{1.0}); },
                            ErrorCode::GroupTooSmall));
}

TEST(GrpoAdvantage, NormalizationProperties) {
    gqm::Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const int g = static_cast<int>(rng.uniform_int(2, 9));
        auto r = random_rewards(rng, g);
        // Force non-degeneracy.
        r[0] += 1.0;
        const auto a = gqm::grpo_advantage(r).values;

        const double mean = std::accumulate(a.begin(), a.end(), 0.0) / g;
        double var = 0.0;
        for (double v : a) var += (v - mean) * (v - mean);
        var /= g;
        ASSERT_NEAR(mean, 0.0, 1e-9);
        ASSERT_NEAR(std::sqrt(var), 1.0, 1e-9);

        ASSERT_EQ(std::max_element(a.begin(), a.end()) - a.begin(),
                  std::max_element(r.begin(), r.end()) - r.begin());

        // Shift invariance and positive-scale invariance.
        std::vector<double> shifted = r, scaled = r;
        for (auto& v : shifted) v += 2.5;
        for (auto& v : scaled) v *= 3.0;
        const auto as = gqm::grpo_advantage(shifted).values;
        const auto ak = gqm::grpo_advantage(scaled).values;
        for (int i = 0; i < g; ++i) {
            ASSERT_NEAR(as[i], a[i], 1e-9);
            ASSERT_NEAR(ak[i], a[i], 1e-9);
        }
    }
}

TEST(DrGrpoAdvantage, PinnedValues) {
    const std::vector<double> alternating{1, 0, 1, 0};
    const auto a = gqm::dr_grpo_advantage(alternating).values;
    EXPECT_DOUBLE_EQ(a[0], 0.5);
    EXPECT_DOUBLE_EQ(a[1], -0.5);
    EXPECT_DOUBLE_EQ(a[2], 0.5);
    EXPECT_DOUBLE_EQ(a[3], -0.5);
    const std::vector<double> flat{0.3, 0.3};
    for (double v : gqm::dr_grpo_advantage(flat).values) EXPECT_EQ(v, 0.0);
}

TEST(DrGrpoAdvantage, SumsToZeroAndScalesLinearly) {
    gqm::Rng rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        const int g = static_cast<int>(rng.uniform_int(2, 9));
        const auto r = random_rewards(rng, g);
        const auto a = gqm::dr_grpo_advantage(r).values;
        ASSERT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 0.0, 1e-9);

        std::vector<double> scaled = r;
        for (auto& v : scaled) v *= 3.0;
        const auto ak = gqm::dr_grpo_advantage(scaled).values;
        for (int i = 0; i < g; ++i) ASSERT_NEAR(ak[i], 3.0 * a[i], 1e-9);
    }
}

TEST(GroupDiagnostics, PinnedValues) {
    const std::vector<double> mostly_top{10, 10, 5, 10};
    const auto d = gqm::group_diagnostics(mostly_top, 10.0);
    EXPECT_DOUBLE_EQ(d.saturation_rate, 0.75);
    EXPECT_FALSE(d.vanished);
    EXPECT_DOUBLE_EQ(d.mean_reward, 8.75);

    const std::vector<double> all_top{10, 10};
    const auto d2 = gqm::group_diagnostics(all_top, 10.0);
    EXPECT_TRUE(d2.vanished);
    EXPECT_DOUBLE_EQ(d2.saturation_rate, 1.0);
    EXPECT_DOUBLE_EQ(d2.reward_std, 0.0);

    const std::vector<double> low{1, 2, 3};
    EXPECT_DOUBLE_EQ(gqm::group_diagnostics(low, 10.0).saturation_rate, 0.0);

    const std::vector<double> single{4.0};
    const auto d3 = gqm::group_diagnostics(single, 10.0);
    EXPECT_TRUE(d3.vanished);
    EXPECT_DOUBLE_EQ(d3.mean_reward, 4.0);

    EXPECT_TRUE(throws_code([] { gqm::group_diagnostics(std::vector<double>{}, 10.0); },
                            ErrorCode::EmptyInput));
}

TEST(GroupDiagnostics, SaturationImpliesVanishedImpliesZeroAdvantages) {
    gqm::Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const int g = static_cast<int>(rng.uniform_int(2, 8));
        std::vector<double> r(g);
        const bool saturate = rng.uniform_real(0.0, 1.0) < 0.5;
        for (auto& v : r)
            v = saturate ? 10.0 : std::floor(rng.uniform_real(0.0, 11.0));
        const auto d = gqm::group_diagnostics(r, 10.0);
        if (d.saturation_rate == 1.0) ASSERT_TRUE(d.vanished);
        if (d.vanished) {
            ASSERT_EQ(d.reward_std, 0.0);
            for (double v : gqm::grpo_advantage(r).values) ASSERT_EQ(v, 0.0);
            for (double v : gqm::dr_grpo_advantage(r).values) ASSERT_EQ(v, 0.0);
        }
    }
}

}  // namespace
