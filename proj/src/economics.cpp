#include "rideshare/economics.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "rideshare/error.hpp"

namespace rideshare {

Money Money::from_double(double value) {
    return from_units(static_cast<std::int64_t>(std::llround(value * kScale)));
}

Money Money::parse(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error("not a money value: '" + text + "'");
    }
    if (used != text.size()) {
        throw Error("not a money value: '" + text + "'");
    }
    return from_double(v);
}

std::string Money::str() const {
    const std::int64_t whole = units_ / kScale;
    const std::int64_t frac = std::llabs(units_ % kScale);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%04lld", (units_ < 0 && whole == 0) ? "-" : "",
                  static_cast<long long>(whole), static_cast<long long>(frac));
    return buf;
}

Money Money::scaled(double factor) const {
    return from_units(static_cast<std::int64_t>(std::llround(static_cast<double>(units_) * factor)));
}

std::ostream& operator<<(std::ostream& out, Money m) { return out << m.str(); }

void FareParams::validate() const {
    const Money zero;
    if (base_fare < zero || minimum_fare < zero || per_mile < zero || per_minute < zero || cost_per_mile < zero) {
        throw ConfigError("fare: all fare parameters must be >= 0");
    }
}

Money trip_fare(const FareParams& p, double miles, double minutes) {
    if (miles < 0.0 || minutes < 0.0) {
        throw Error("trip_fare: distance and time must be >= 0");
    }
    const Money metered = p.base_fare + p.per_mile.scaled(miles) + p.per_minute.scaled(minutes);
    return std::max(p.minimum_fare, metered);
}

Money ride_revenue(std::span<const Money> fares) {
    if (fares.empty()) {
        throw Error("ride_revenue: a ride needs at least one fare");
    }
    const Money total = std::accumulate(fares.begin(), fares.end(), Money{});
    return fares.size() > 1 ? total.scaled(0.8) : total;
}

void DriverLedger::close_ride() {
    if (open_fares_.empty()) {
        return;
    }
    RideRecord r;
    r.index = static_cast<int>(rides_.size());
    r.fares = std::move(open_fares_);
    r.miles = open_miles_;
    r.revenue = ride_revenue(r.fares);
    rides_.push_back(std::move(r));
    open_fares_.clear();
    open_miles_ = 0.0;
}

void DriverLedger::flush() {
    close_ride();
    if (open_miles_ > 0.0) {
        RideRecord r;
        r.index = static_cast<int>(rides_.size());
        r.miles = open_miles_;
        rides_.push_back(std::move(r));
        open_miles_ = 0.0;
    }
}

Money driver_utility(const DriverLedger& ledger, Money cost_per_mile) {
    Money total;
    for (const RideRecord& r : ledger.rides()) {
        total += r.revenue - cost_per_mile.scaled(r.miles);
    }
    return total;
}

Money provisional_utility(const DriverLedger& ledger, Money cost_per_mile) {
    return driver_utility(ledger, cost_per_mile) - cost_per_mile.scaled(ledger.open_miles());
}

double utility_per_hour(Money utility, double active_hours) {
    if (active_hours <= 0.0) {
        return 0.0;
    }
    return utility.to_double() / active_hours;
}

}  // namespace rideshare
