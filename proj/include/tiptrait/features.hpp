#pragma once

#include "tiptrait/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tiptrait::features {

enum class Feature { n_leaves, hull_area, leaves_per_hull, h_spread, v_spread };

inline constexpr Feature kAllFeatures[] = {
    Feature::n_leaves, Feature::hull_area, Feature::leaves_per_hull,
    Feature::h_spread, Feature::v_spread,
};

std::string_view to_string(Feature f) noexcept;
std::optional<Feature> parse_feature(std::string_view name) noexcept;

enum class Statistic { mean };

struct AggregationScheme {
    std::vector<Feature> features{std::begin(kAllFeatures), std::end(kAllFeatures)};
    std::vector<Treatment> treatments{Treatment::control, Treatment::drought};
    Statistic statistic = Statistic::mean;
    std::optional<std::pair<int, int>> dat_range;  // inclusive
};

// "all" or a comma-separated list of feature names.
std::vector<Feature> parse_feature_list(std::string_view list);
std::vector<Treatment> parse_treatment_list(std::string_view list);

// One row per genotype (sorted), one "<feature>.<treatment>.mean" column per
// requested pair, in scheme order (feature-major). Records with no
// leaves_per_hull are left out of that feature's mean only.
// Throws InvalidArgument naming the genotype and column if a cell has no data.
FeatureMatrix aggregate(std::span<const TraitRecord> records, const AggregationScheme& scheme);

// Column-wise z-scores using the sample standard deviation; constant columns
// become zeros. Requires at least two rows and an unstandardized input.
FeatureMatrix standardize(const FeatureMatrix& m);

// "genotype,<columns...>" with shortest round-trip numbers.
std::string format_feature_csv(const FeatureMatrix& m);

}  // namespace tiptrait::features
