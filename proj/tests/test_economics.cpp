#include <gtest/gtest.h>

#include <random>

#include "rideshare/economics.hpp"
#include "rideshare/error.hpp"

using namespace rideshare;

namespace {

Money usd(const char* s) { return Money::parse(s); }

}  // namespace

TEST(Money, FixedPointRoundsHalfAwayFromZero) {
    EXPECT_EQ(Money::from_double(1.00005).units(), 10001);
    EXPECT_EQ(Money::from_double(-1.00005).units(), -10001);
    EXPECT_EQ(Money::from_units(5).scaled(0.5).units(), 3);
    EXPECT_EQ(Money::from_units(-5).scaled(0.5).units(), -3);
    EXPECT_EQ(usd("15.43").str(), "15.4300");
    EXPECT_EQ(usd("-0.5").str(), "-0.5000");
    EXPECT_THROW(Money::parse("12x"), Error);
}

TEST(TripFare, MinimumBindsAtZero) {
    EXPECT_EQ(trip_fare(FareParams{}, 0.0, 0.0), usd("7"));
}

TEST(TripFare, MeteredFare) {
    // 2.55 + 4.96 * 1.75 + 12 * 0.35 = 2.55 + 8.68 + 4.20
    EXPECT_EQ(trip_fare(FareParams{}, 4.96, 12.0), usd("15.43"));
}

TEST(TripFare, ShortTripStillMinimum) { EXPECT_EQ(trip_fare(FareParams{}, 1.0, 1.0), usd("7")); }

TEST(TripFare, AtLeastMinimumAndMonotone) {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    const FareParams p;
    for (int i = 0; i < 1000; ++i) {
        const double d = u(rng), t = u(rng);
        const Money f = trip_fare(p, d, t);
        EXPECT_GE(f, p.minimum_fare);
        EXPECT_GE(trip_fare(p, d + 0.5, t), f);
        EXPECT_GE(trip_fare(p, d, t + 0.5), f);
    }
    EXPECT_THROW(trip_fare(p, -1.0, 0.0), Error);
}

TEST(RideRevenue, SingleAndPooled) {
    const std::vector<Money> one{usd("10")};
    const std::vector<Money> two{usd("10"), usd("10")};
    const std::vector<Money> three{usd("7"), usd("15.43"), usd("7")};
    EXPECT_EQ(ride_revenue(one), usd("10"));
    EXPECT_EQ(ride_revenue(two), usd("16"));
    EXPECT_EQ(ride_revenue(three), usd("23.544"));
    EXPECT_THROW(ride_revenue(std::vector<Money>{}), Error);
}

TEST(RideRevenue, PooledIsEightyPercentOfSum) {
    std::mt19937 rng(8);
    for (int i = 0; i < 500; ++i) {
        std::vector<Money> fares;
        const int n = 2 + static_cast<int>(rng() % 4);
        std::int64_t units = 0;
        for (int k = 0; k < n; ++k) {
            fares.push_back(Money::from_units(70000 + static_cast<std::int64_t>(rng() % 300000)));
            units += fares.back().units();
        }
        EXPECT_NEAR(ride_revenue(fares).to_double(), 0.8 * units / 1e4, 1e-4 / 2 + 1e-9);
    }
}

TEST(DriverUtility, Examples) {
    DriverLedger empty;
    EXPECT_EQ(driver_utility(empty, usd("0.13")), Money{});

    DriverLedger one;
    one.add_miles(5.0);
    one.add_fare(usd("10"));
    one.add_fare(usd("10"));
    one.close_ride();
    ASSERT_EQ(one.ride_count(), 1u);
    EXPECT_EQ(one.rides()[0].revenue, usd("16"));
    EXPECT_EQ(driver_utility(one, usd("0.13")), usd("15.35"));
}

TEST(DriverUtility, NegativeWhenCostsDominate) {
    DriverLedger l;
    l.add_miles(200.0);
    l.add_fare(usd("7"));
    l.close_ride();
    EXPECT_EQ(driver_utility(l, usd("0.13")), usd("-19"));
}

TEST(DriverLedger, EmptyMilesFoldIntoNextRideAndFlushKeepsLeftovers) {
    DriverLedger l;
    l.add_miles(2.48);  // cruising
    l.close_ride();     // nothing served yet: stays open
    EXPECT_EQ(l.ride_count(), 0u);
    l.add_fare(usd("7"));
    l.add_miles(1.24);
    l.close_ride();
    ASSERT_EQ(l.ride_count(), 1u);
    EXPECT_DOUBLE_EQ(l.rides()[0].miles, 2.48 + 1.24);
    l.add_miles(1.0);
    EXPECT_EQ(provisional_utility(l, usd("0.13")), usd("7") - usd("0.13").scaled(3.72) - usd("0.13"));
    l.flush();
    ASSERT_EQ(l.ride_count(), 2u);
    EXPECT_EQ(l.rides()[1].order_count(), 0u);
    EXPECT_EQ(l.rides()[1].revenue, Money{});
    EXPECT_EQ(driver_utility(l, usd("0.13")), provisional_utility(l, usd("0.13")));
}

TEST(UtilityPerHour, Examples) {
    EXPECT_DOUBLE_EQ(utility_per_hour(usd("30"), 2.0), 15.0);
    EXPECT_DOUBLE_EQ(utility_per_hour(Money{}, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(utility_per_hour(usd("30"), 0.0), 0.0);
}

TEST(FareParams, NegativeRejected) {
    FareParams p;
    p.per_mile = usd("-1");
    EXPECT_THROW(p.validate(), ConfigError);
}
