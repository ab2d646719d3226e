#pragma once

#include "tiptrait/core.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tiptrait::traits {

// Leaf count, hull area, leaves per hull area, and the two canopy spreads of
// one plant observation. Never throws on degenerate input: zero tips give an
// all-zero record and small hulls leave leaves_per_hull empty.
TraitRecord compute_traits(const PlantObservation& obs);

// One record per observation, in input order. jobs > 1 spreads the work over
// that many threads; the output is identical for any job count.
std::vector<TraitRecord> traits_table(std::span<const PlantObservation> dataset, unsigned jobs = 1);

inline constexpr std::string_view kCsvHeader =
    "plant_id,genotype,treatment,dat,n_leaves,hull_area_px2,leaves_per_hull,h_spread_px,v_spread_px";

// Traits CSV with 9 significant digits. scale_mm_per_px multiplies lengths by
// s, areas by s^2 and leaves_per_hull by 1/s^2.
std::string format_traits_csv(std::span<const TraitRecord> records, double scale_mm_per_px = 1.0);

// Reads a traits CSV (columns located by header name). Throws ParseError with
// the offending line on malformed rows.
std::vector<TraitRecord> parse_traits_csv(std::string_view text);

}  // namespace tiptrait::traits
