#include "rideshare/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rideshare/error.hpp"

namespace rideshare {

namespace {

std::vector<double> clamped_sorted(std::span<const double> incomes) {
    std::vector<double> x;
    x.reserve(incomes.size());
    for (double v : incomes) {
        x.push_back(std::max(v, 0.0));
    }
    std::sort(x.begin(), x.end());
    return x;
}

}  // namespace

std::vector<LorenzPoint> lorenz(std::span<const double> incomes) {
    if (incomes.empty()) {
        throw Error("lorenz: empty income list");
    }
    const std::vector<double> x = clamped_sorted(incomes);
    const double n = static_cast<double>(x.size());
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    std::vector<LorenzPoint> points{{0.0, 0.0}};
    double running = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        running += x[i];
        const double pop = static_cast<double>(i + 1) / n;
        points.push_back({pop, total > 0.0 ? running / total : pop});
    }
    points.back().income = 1.0;
    return points;
}

double gini(std::span<const double> incomes) {
    if (incomes.empty()) {
        return 0.0;
    }
    const std::vector<double> x = clamped_sorted(incomes);
    const double n = static_cast<double>(x.size());
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (total <= 0.0) {
        return 0.0;
    }
    // sum_i sum_j |x_i - x_j| over sorted data = 2 sum_i (2i - n + 1) x_i (0-based).
    double weighted = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        weighted += (2.0 * static_cast<double>(i) - n + 1.0) * x[i];
    }
    const double mean = total / n;
    return std::clamp(2.0 * weighted / (2.0 * n * n * mean), 0.0, 1.0);
}

std::vector<double> FairnessWeights::target_shares() const {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> shares;
    shares.reserve(weights.size());
    for (double w : weights) {
        shares.push_back(w / sum);
    }
    return shares;
}

FairnessWeights hour_weights(std::span<const HourlyIncome> history, int hour, std::span<const int> drivers) {
    FairnessWeights out;
    out.weights.assign(drivers.size(), 1.0);
    double sum = 0.0;
    std::size_t count = 0;
    std::vector<int> active;
    for (const HourlyIncome& h : history) {
        if (h.hour == hour) {
            sum += h.rate;
            ++count;
            active.push_back(h.driver);
        }
    }
    if (count == 0) {
        return out;
    }
    const double mean = std::max(sum / static_cast<double>(count), kFairnessEpsilon);
    for (std::size_t i = 0; i < drivers.size(); ++i) {
        if (std::find(active.begin(), active.end(), drivers[i]) != active.end()) {
            out.weights[i] = mean;
        }
    }
    return out;
}

double fair_objective(std::span<const double> utilities, const FairnessWeights& weights) {
    if (utilities.size() != weights.weights.size()) {
        throw Error("fair_objective: utilities and weights differ in length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        sum += std::max(weights.weights[i], kFairnessEpsilon) * std::log(std::max(utilities[i], kFairnessEpsilon));
    }
    return sum;
}

std::vector<int> priority_order(const IncomeSnapshot& snapshot) {
    std::vector<IncomeEntry> sorted = snapshot.entries;
    std::sort(sorted.begin(), sorted.end(), [](const IncomeEntry& a, const IncomeEntry& b) {
        return a.rate != b.rate ? a.rate < b.rate : a.driver < b.driver;
    });
    std::vector<int> ids;
    ids.reserve(sorted.size());
    for (const IncomeEntry& e : sorted) {
        ids.push_back(e.driver);
    }
    return ids;
}

bool relocation_eligible(int driver, const IncomeSnapshot& snapshot, double fraction) {
    const std::vector<int> order = priority_order(snapshot);
    const auto eligible = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(order.size()) + 1e-9));
    const auto it = std::find(order.begin(), order.end(), driver);
    return it != order.end() && static_cast<std::size_t>(it - order.begin()) < eligible;
}

std::optional<CellId> relocate(int driver, CellId cell, const IncomeSnapshot& snapshot, const RoadGraph& road,
                               const RequestGraph& pred_now, const RequestGraph& pred_next,
                               const RelocationParams& params) {
    if (params.fraction < 0.0 || params.fraction > 1.0) {
        throw Error("relocate: fraction must be in [0, 1]");
    }
    if (!relocation_eligible(driver, snapshot, params.fraction)) {
        return std::nullopt;
    }
    std::vector<std::pair<double, CellId>> window;
    window.emplace_back(pred_now.outgoing(cell), cell);
    for (const Neighbor& n : road.neighbors(cell)) {
        window.emplace_back(pred_now.outgoing(n.cell), n.cell);
    }
    std::sort(window.begin(), window.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (const auto& [demand, candidate] : window) {
        if (demand <= 0.0) {
            break;
        }
        double future = 0.0;
        for (const auto& e : pred_now.row(candidate)) {
            future += pred_next.outgoing(e.dest);
        }
        if (future >= params.future_threshold) {
            return candidate;
        }
    }
    return std::nullopt;
}

double improvement(double p, double b) {
    if (b == 0.0) {
        throw Error("improvement: baseline value is 0");
    }
    return (p - b) / b * 100.0;
}

}  // namespace rideshare
