#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rideshare/error.hpp"
#include "rideshare/fairness.hpp"

using namespace rideshare;

namespace {

IncomeSnapshot snapshot_of(std::vector<double> rates) {
    IncomeSnapshot s;
    for (std::size_t i = 0; i < rates.size(); ++i) s.entries.push_back({static_cast<int>(i), rates[i]});
    return s;
}

}  // namespace

TEST(Lorenz, SmallExample) {
    const std::vector<double> x{1, 1, 2};
    const auto pts = lorenz(x);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_DOUBLE_EQ(pts[0].population, 0.0);
    EXPECT_DOUBLE_EQ(pts[0].income, 0.0);
    EXPECT_DOUBLE_EQ(pts[1].population, 1.0 / 3);
    EXPECT_DOUBLE_EQ(pts[1].income, 0.25);
    EXPECT_DOUBLE_EQ(pts[2].population, 2.0 / 3);
    EXPECT_DOUBLE_EQ(pts[2].income, 0.5);
    EXPECT_DOUBLE_EQ(pts[3].population, 1.0);
    EXPECT_DOUBLE_EQ(pts[3].income, 1.0);
}

TEST(Lorenz, EqualAndZeroIncomesGiveTheDiagonal) {
    for (const std::vector<double>& x : {std::vector<double>{4, 4, 4, 4}, std::vector<double>{0, 0, 0}}) {
        for (const LorenzPoint& p : lorenz(x)) EXPECT_NEAR(p.income, p.population, 1e-12);
    }
}

TEST(Lorenz, TopThirtyPercentHoldSeventy) {
    std::vector<double> x(7, 30.0 / 7);
    x.insert(x.end(), 3, 70.0 / 3);
    const auto pts = lorenz(x);
    ASSERT_EQ(pts.size(), 11u);
    EXPECT_NEAR(pts[7].population, 0.7, 1e-12);
    EXPECT_NEAR(pts[7].income, 0.30, 1e-12);
}

TEST(Lorenz, MonotoneConvexAndClampsNegatives) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-5, 50);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(1 + rng() % 30);
        for (double& v : x) v = u(rng);
        const auto pts = lorenz(x);
        double last_step = -1;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double step = pts[i].income - pts[i - 1].income;
            ASSERT_GE(step, -1e-12);
            ASSERT_GE(step, last_step - 1e-12);
            last_step = step;
        }
        ASSERT_NEAR(pts.back().income, 1.0, 1e-12);
    }
}

TEST(Gini, Examples) {
    const std::vector<double> equal{3, 3, 3}, pair{0, 1}, zeros{0, 0};
    EXPECT_DOUBLE_EQ(gini(equal), 0.0);
    EXPECT_DOUBLE_EQ(gini(pair), 0.5);
    EXPECT_DOUBLE_EQ(gini(zeros), 0.0);
}

TEST(Gini, MatchesLorenzAreaOracle) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(1 + rng() % 50);
        for (double& v : x) v = u(rng);
        ASSERT_NEAR(gini(x), oracle::lorenz_area_gini(x), 1e-9);
    }
}

TEST(Gini, BoundedScaleAndPermutationInvariant) {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(-10.0, 100.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> x(1 + rng() % 25);
        for (double& v : x) v = u(rng);
        const double g0 = gini(x);
        ASSERT_GE(g0, 0.0);
        ASSERT_LE(g0, 1.0);
        std::vector<double> scaled = x;
        for (double& v : scaled) v *= 3.7;
        ASSERT_NEAR(gini(scaled), g0, 1e-12);
        std::shuffle(x.begin(), x.end(), rng);
        ASSERT_NEAR(gini(x), g0, 1e-12);
    }
}

TEST(Weights, TargetSharesSumToOne) {
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> u(1e-6, 1e3);
    for (int trial = 0; trial < 500; ++trial) {
        FairnessWeights w;
        w.weights.resize(1 + rng() % 40);
        for (double& v : w.weights) v = u(rng);
        const auto s = w.target_shares();
        EXPECT_NEAR(std::accumulate(s.begin(), s.end(), 0.0), 1.0, 1e-12);
    }
    const FairnessWeights w{{1.0, 3.0}};
    EXPECT_DOUBLE_EQ(w.target_shares()[0], 0.25);
    EXPECT_DOUBLE_EQ(w.target_shares()[1], 0.75);
}

TEST(Weights, HourWeights) {
    const std::vector<int> drivers{0, 1, 2};
    const std::vector<HourlyIncome> same_hour{{0, 9, 10.0}, {1, 9, 20.0}, {2, 9, 30.0}};
    const FairnessWeights w = hour_weights(same_hour, 9, drivers);
    for (double s : w.target_shares()) EXPECT_DOUBLE_EQ(s, 1.0 / 3);
    EXPECT_DOUBLE_EQ(w.weights[0], 20.0);

    const FairnessWeights none = hour_weights({}, 9, drivers);
    EXPECT_EQ(none.weights, (std::vector<double>{1.0, 1.0, 1.0}));

    const std::vector<HourlyIncome> losses{{0, 9, -5.0}};
    EXPECT_DOUBLE_EQ(hour_weights(losses, 9, drivers).weights[0], kFairnessEpsilon);
}

TEST(FairObjective, Examples) {
    const std::vector<double> e{std::exp(1.0)};
    EXPECT_NEAR(fair_objective(e, FairnessWeights{{1.0}}), 1.0, 1e-12);
    const FairnessWeights eq{{1.0, 1.0}};
    const std::vector<double> even{5, 5}, skewed{8, 2};
    EXPECT_GT(fair_objective(even, eq), fair_objective(skewed, eq));
    const std::vector<double> nonpositive{0.0, -3.0};
    EXPECT_NEAR(fair_objective(nonpositive, eq), 2 * std::log(kFairnessEpsilon), 1e-9);
}

TEST(FairObjective, ProportionalSharesBeatRandomSimplexPoints) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uw(0.1, 10.0);
    std::exponential_distribution<double> ex(1.0);
    for (int trial = 0; trial < 50; ++trial) {
        FairnessWeights w;
        w.weights.resize(2 + rng() % 8);
        for (double& v : w.weights) v = uw(rng);
        const double total = 100.0;
        std::vector<double> best;
        for (double s : w.target_shares()) best.push_back(s * total);
        const double opt = fair_objective(best, w);
        for (int k = 0; k < 2000; ++k) {
            std::vector<double> p(w.weights.size());
            double sum = 0;
            for (double& v : p) sum += (v = ex(rng));  // uniform on the simplex
            for (double& v : p) v = v / sum * total;
            ASSERT_LE(fair_objective(p, w), opt + 1e-9);
        }
    }
}

TEST(PriorityOrder, SortsAscendingWithIdTies) {
    EXPECT_EQ(priority_order(snapshot_of({5, 2, 9})), (std::vector<int>{1, 0, 2}));
    EXPECT_EQ(priority_order(snapshot_of({1, 1, 1, 1})), (std::vector<int>{0, 1, 2, 3}));
    std::mt19937 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> r(1 + rng() % 20);
        for (double& v : r) v = static_cast<double>(rng() % 7) - 2;
        const auto order = priority_order(snapshot_of(r));
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> ids(r.size());
        std::iota(ids.begin(), ids.end(), 0);
        ASSERT_EQ(sorted, ids);
        ASSERT_EQ(r[order.front()], *std::min_element(r.begin(), r.end()));
    }
}

TEST(Relocate, TopEarnersStay) {
    const RoadGraph road = build_grid(GridSpec{3, 3});
    RequestGraph now(9), next(9);
    now.set(0, 8, 10.0);
    next.set(8, 0, 10.0);
    // 10 drivers; driver 9 has the highest rate, so it sits in the top 30%.
    const IncomeSnapshot snap = snapshot_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    for (int top : {7, 8, 9}) EXPECT_FALSE(relocate(top, 4, snap, road, now, next));
    EXPECT_EQ(relocate(0, 4, snap, road, now, next), 0);
}

TEST(Relocate, NoDemandInWindowMeansStay) {
    const RoadGraph road = build_grid(GridSpec{5, 5});
    RequestGraph now(25), next(25);
    now.set(24, 0, 5.0);  // outside the window around cell 6
    next.set(0, 24, 5.0);
    EXPECT_FALSE(relocate(0, 6, snapshot_of({1, 2, 3}), road, now, next));
}

TEST(Relocate, SkipsCandidateWhoseDestinationsDieOut) {
    const RoadGraph road = build_grid(GridSpec{3, 3});
    RequestGraph now(9), next(9);
    now.set(0, 8, 10.0);  // X: busiest, but everything goes to a dead cell
    now.set(2, 6, 4.0);   // Y: fewer requests towards a cell still active next slice
    next.set(6, 3, 2.0);
    const IncomeSnapshot snap = snapshot_of({0, 5, 5, 5, 5, 5, 5, 5, 5, 5});
    EXPECT_EQ(relocate(0, 4, snap, road, now, next), 2);
}

TEST(Relocate, StaysInsideTheWindowAndRespectsFraction) {
    std::mt19937 rng(12);
    const RoadGraph road = build_grid(GridSpec{6, 6});
    for (int trial = 0; trial < 200; ++trial) {
        RequestGraph now(36), next(36);
        for (int k = 0; k < 60; ++k) {
            now.set(rng() % 36, rng() % 36, static_cast<double>(rng() % 5));
            next.set(rng() % 36, rng() % 36, static_cast<double>(rng() % 5));
        }
        std::vector<double> rates(10);
        for (double& r : rates) r = static_cast<double>(rng() % 100);
        const IncomeSnapshot snap = snapshot_of(rates);
        const int driver = static_cast<int>(rng() % 10);
        const CellId cell = rng() % 36;
        const double fraction = (rng() % 11) / 10.0;
        const auto target = relocate(driver, cell, snap, road, now, next, {fraction, 1.0});
        if (target) {
            EXPECT_TRUE(*target == cell || road.adjacent(*target, cell));
            EXPECT_TRUE(relocation_eligible(driver, snap, fraction));
        }
        if (!relocation_eligible(driver, snap, fraction)) {
            EXPECT_FALSE(target);
        }
    }
}

TEST(Relocate, EligibilityCountsBottomFraction) {
    const IncomeSnapshot snap = snapshot_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    int n = 0;
    for (int d = 0; d < 10; ++d) n += relocation_eligible(d, snap, 0.7);
    EXPECT_EQ(n, 7);
    EXPECT_FALSE(relocation_eligible(0, snap, 0.0));
    EXPECT_TRUE(relocation_eligible(9, snap, 1.0));
}

TEST(Improvement, Examples) {
    EXPECT_DOUBLE_EQ(improvement(100, 100), 0.0);
    EXPECT_DOUBLE_EQ(improvement(120, 100), 20.0);
    EXPECT_DOUBLE_EQ(improvement(80, 100), -20.0);
    EXPECT_THROW(improvement(1, 0), Error);
}
