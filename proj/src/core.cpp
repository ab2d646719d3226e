#include "tiptrait/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace tiptrait {

std::string_view to_string(Treatment t) noexcept
{
    return t == Treatment::control ? "control" : "drought";
}

std::optional<Treatment> parse_treatment(std::string_view text) noexcept
{
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "control") {
        return Treatment::control;
    }
    if (lowered == "drought") {
        return Treatment::drought;
    }
    return std::nullopt;
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_labels,
                             std::vector<std::string> column_labels, std::vector<double> values,
                             bool standardized)
    : row_labels_(std::move(row_labels)),
      column_labels_(std::move(column_labels)),
      values_(std::move(values)),
      standardized_(standardized)
{
    if (values_.size() != row_labels_.size() * column_labels_.size()) {
        throw InvalidArgument("feature matrix: value count does not match label dimensions");
    }
    if (std::set<std::string>(row_labels_.begin(), row_labels_.end()).size() != row_labels_.size()) {
        throw InvalidArgument("feature matrix: duplicate row label");
    }
    if (std::set<std::string>(column_labels_.begin(), column_labels_.end()).size() !=
        column_labels_.size()) {
        throw InvalidArgument("feature matrix: duplicate column label");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("feature matrix: non-finite entry");
        }
    }
}

std::vector<double> FeatureMatrix::row(std::size_t r) const
{
    auto first = values_.begin() + static_cast<std::ptrdiff_t>(r * cols());
    return {first, first + static_cast<std::ptrdiff_t>(cols())};
}

std::vector<double> FeatureMatrix::column(std::size_t c) const
{
    std::vector<double> out;
    out.reserve(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        out.push_back((*this)(r, c));
    }
    return out;
}

void finalize_rates(EvalReport& report) noexcept
{
    const auto tp = static_cast<double>(report.true_positives);
    const auto predicted = tp + static_cast<double>(report.false_positives);
    const auto actual = tp + static_cast<double>(report.false_negatives);
    report.precision = predicted == 0.0 ? 1.0 : tp / predicted;
    report.recall = actual == 0.0 ? 1.0 : tp / actual;
    const double sum = report.precision + report.recall;
    report.f1 = sum == 0.0 ? 0.0 : 2.0 * report.precision * report.recall / sum;
}

}  // namespace tiptrait
