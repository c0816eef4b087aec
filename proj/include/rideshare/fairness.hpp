#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rideshare/demand.hpp"
#include "rideshare/grid.hpp"

namespace rideshare {

struct IncomeEntry {
    int driver = 0;
    double rate = 0.0;  // utility per hour, may be negative
};

struct IncomeSnapshot {
    std::vector<IncomeEntry> entries;
    std::int64_t taken_at = 0;  // tick
};

struct LorenzPoint {
    double population = 0.0;
    double income = 0.0;
};

// Cumulative income share against population share, poorest first, starting at
// (0, 0). Negative incomes count as 0; an all-zero population gives the diagonal.
std::vector<LorenzPoint> lorenz(std::span<const double> incomes);

// Mean-absolute-difference Gini over incomes clamped at 0; 0 when the mean is 0.
double gini(std::span<const double> incomes);

inline constexpr double kFairnessEpsilon = 1e-6;

struct FairnessWeights {
    std::vector<double> weights;  // per driver, > 0

    // w_i / sum_j w_j
    std::vector<double> target_shares() const;
};

// Fleet utility-per-hour observation for one driver during one hour of day.
struct HourlyIncome {
    int driver = 0;
    int hour = 0;
    double rate = 0.0;
};

// w_i = mean rate over all drivers active in `hour`, floored at epsilon. Drivers
// without history in that hour, or an empty history, get weight 1.
FairnessWeights hour_weights(std::span<const HourlyIncome> history, int hour, std::span<const int> drivers);

// sum_i w_i log(max(u_i, epsilon))
double fair_objective(std::span<const double> utilities, const FairnessWeights& weights);

// Driver ids by ascending rate, ties by id.
std::vector<int> priority_order(const IncomeSnapshot& snapshot);

struct RelocationParams {
    double fraction = 0.7;
    // Minimum sum of next-slice outgoing demand at the candidate's predicted destinations.
    double future_threshold = 1.0;
};

// True when the driver ranks inside the bottom `fraction` of the snapshot.
bool relocation_eligible(int driver, const IncomeSnapshot& snapshot, double fraction);

// Picks the best cell in the driver's 3x3 window (its cell plus road neighbours)
// whose predicted requests lead to cells with future demand; nullopt = stay.
std::optional<CellId> relocate(int driver, CellId cell, const IncomeSnapshot& snapshot, const RoadGraph& road,
                               const RequestGraph& pred_now, const RequestGraph& pred_next,
                               const RelocationParams& params = {});

// (p - b) / b * 100
double improvement(double p, double b);

}  // namespace rideshare
