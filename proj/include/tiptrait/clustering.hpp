#pragma once

#include "tiptrait/core.hpp"

#include <span>
#include <vector>

namespace tiptrait::clustering {

// Symmetric pairwise distances stored as the condensed upper triangle.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    // condensed.size() must equal n(n-1)/2; entries finite and >= 0.
    DistanceMatrix(std::size_t n, std::vector<double> condensed);

    std::size_t size() const noexcept { return n_; }
    // at(i, i) == 0.
    double at(std::size_t i, std::size_t j) const noexcept;
    const std::vector<double>& condensed() const noexcept { return condensed_; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept;

    std::size_t n_ = 0;
    std::vector<double> condensed_;
};

// Euclidean distances between rows. Needs >= 2 rows.
DistanceMatrix distance_matrix(const FeatureMatrix& m);

// Ward agglomeration with Lance-Williams updates on squared distances.
// Heights are the Ward distances sqrt(2 * increase in within-cluster sum of
// squares). Equal candidates are resolved by the smallest (left, right) pair
// of cluster ids, left < right.
std::vector<MergeStep> ward_linkage(const DistanceMatrix& d);

// Flat clustering from the first n-k merges. Labels 0..k-1 are numbered by
// each cluster's smallest member index.
std::vector<std::size_t> cut_tree(std::span<const MergeStep> merges, std::size_t k);

// coph(i, j) = height of the merge that first joins i and j.
DistanceMatrix cophenetic_distances(std::span<const MergeStep> merges);

// Chance-corrected partition agreement; 1 for identical partitions up to
// relabeling. Both labelings must have equal length.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

// Checks the structural merge-list invariants (index ranges, single use,
// sizes). Throws InvalidArgument describing the first violation.
void validate_merges(std::span<const MergeStep> merges);

}  // namespace tiptrait::clustering
