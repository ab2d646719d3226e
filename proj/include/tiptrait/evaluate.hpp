#pragma once

#include "tiptrait/core.hpp"

#include <span>

namespace tiptrait::eval {

// Greedy one-to-one matching: candidate pairs within `radius` px are taken in
// ascending distance (ties by predicted, then truth index) whenever both ends
// are still free. Throws InvalidArgument unless radius > 0.
EvalReport match_tips(std::span<const TipPoint> predicted, std::span<const TipPoint> truth,
                      double radius);

// 2% of the image diagonal.
double default_match_radius(int image_width, int image_height) noexcept;

// Sums counts over reports (micro average) and recomputes the rates. The
// merged report carries no match list.
EvalReport combine(std::span<const EvalReport> reports);

}  // namespace tiptrait::eval
