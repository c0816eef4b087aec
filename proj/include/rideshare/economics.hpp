#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rideshare {

// Fixed-point money with four fractional digits. Every arithmetic result is
// rounded half away from zero so ledgers replay bit-exactly.
class Money {
public:
    static constexpr std::int64_t kScale = 10000;

    constexpr Money() = default;
    static constexpr Money from_units(std::int64_t ten_thousandths) {
        Money m;
        m.units_ = ten_thousandths;
        return m;
    }
    static Money from_double(double value);
    static Money parse(const std::string& text);

    constexpr std::int64_t units() const { return units_; }
    double to_double() const { return static_cast<double>(units_) / kScale; }
    std::string str() const;

    constexpr Money operator+(Money o) const { return from_units(units_ + o.units_); }
    constexpr Money operator-(Money o) const { return from_units(units_ - o.units_); }
    constexpr Money operator-() const { return from_units(-units_); }
    Money& operator+=(Money o) {
        units_ += o.units_;
        return *this;
    }
    Money& operator-=(Money o) {
        units_ -= o.units_;
        return *this;
    }
    // Scales by a real factor, rounding to the nearest unit.
    Money scaled(double factor) const;

    constexpr auto operator<=>(const Money&) const = default;

private:
    std::int64_t units_ = 0;
};

std::ostream& operator<<(std::ostream& out, Money m);

struct FareParams {
    Money base_fare = Money::from_units(25500);     // b_f
    Money minimum_fare = Money::from_units(70000);  // m_f
    Money per_mile = Money::from_units(17500);      // f
    Money per_minute = Money::from_units(3500);     // f'
    Money cost_per_mile = Money::from_units(1300);  // c

    void validate() const;
};

// max(m_f, b_f + miles * f + minutes * f')
Money trip_fare(const FareParams& p, double miles, double minutes);

// Pooled rides (more than one order) are discounted to 80% of the fare sum.
Money ride_revenue(std::span<const Money> fares);

struct RideRecord {
    int index = 0;
    std::vector<Money> fares;
    double miles = 0.0;  // d_k, including empty miles driven before the first pickup
    Money revenue;

    std::size_t order_count() const { return fares.size(); }
};

// Per-driver economic history. A ride is open from the first pickup into an
// empty vehicle until the vehicle is empty again.
class DriverLedger {
public:
    void add_miles(double miles) { open_miles_ += miles; }
    void add_fare(Money fare) { open_fares_.push_back(fare); }
    // Closes the open ride if it served any order.
    void close_ride();
    // Closes any open ride; leftover empty miles become a zero-order record.
    void flush();

    const std::vector<RideRecord>& rides() const { return rides_; }
    std::size_t ride_count() const { return rides_.size(); }
    double open_miles() const { return open_miles_; }
    bool ride_open() const { return !open_fares_.empty(); }

    double active_hours = 0.0;

private:
    std::vector<RideRecord> rides_;
    std::vector<Money> open_fares_;
    double open_miles_ = 0.0;
};

// sum_k (r_k - d_k * c) over closed rides.
Money driver_utility(const DriverLedger& ledger, Money cost_per_mile);
// Closed-ride utility minus the cost of miles not yet attached to a ride.
Money provisional_utility(const DriverLedger& ledger, Money cost_per_mile);
// Utility divided by active hours; 0 while no time has elapsed.
double utility_per_hour(Money utility, double active_hours);

}  // namespace rideshare
