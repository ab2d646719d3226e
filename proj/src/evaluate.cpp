#include "tiptrait/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

namespace tiptrait::eval {

EvalReport match_tips(std::span<const TipPoint> predicted, std::span<const TipPoint> truth, double radius)
{
    if (!(radius > 0.0)) {
        throw InvalidArgument("match_tips: radius must be positive");
    }

    std::vector<TipMatch> candidates;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const double d = std::hypot(predicted[p].x - truth[t].x, predicted[p].y - truth[t].y);
            if (d <= radius) {
                candidates.push_back({p, t, d});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const TipMatch& a, const TipMatch& b) {
        return std::tie(a.distance, a.predicted, a.truth) < std::tie(b.distance, b.predicted, b.truth);
    });

    std::vector<bool> pred_used(predicted.size(), false);
    std::vector<bool> truth_used(truth.size(), false);
    EvalReport report;
    for (const auto& c : candidates) {
        if (pred_used[c.predicted] || truth_used[c.truth]) {
            continue;
        }
        pred_used[c.predicted] = true;
        truth_used[c.truth] = true;
        report.matches.push_back(c);
    }
    report.true_positives = report.matches.size();
    report.false_positives = predicted.size() - report.true_positives;
    report.false_negatives = truth.size() - report.true_positives;
    finalize_rates(report);
    return report;
}

double default_match_radius(int image_width, int image_height) noexcept
{
    return 0.02 * std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
}

EvalReport combine(std::span<const EvalReport> reports)
{
    EvalReport total;
    for (const auto& r : reports) {
        total.true_positives += r.true_positives;
        total.false_positives += r.false_positives;
        total.false_negatives += r.false_negatives;
    }
    finalize_rates(total);
    return total;
}

}  // namespace tiptrait::eval
