#include "tiptrait/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace tiptrait::clustering {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> condensed)
    : n_(n), condensed_(std::move(condensed))
{
    if (condensed_.size() != n_ * (n_ == 0 ? 0 : n_ - 1) / 2) {
        throw InvalidArgument("distance matrix: condensed size does not match n");
    }
    for (double v : condensed_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("distance matrix: entries must be finite and non-negative");
        }
    }
}

std::size_t DistanceMatrix::index(std::size_t i, std::size_t j) const noexcept
{
    if (i > j) {
        std::swap(i, j);
    }
    // row-major upper triangle, diagonal excluded
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double DistanceMatrix::at(std::size_t i, std::size_t j) const noexcept
{
    return i == j ? 0.0 : condensed_[index(i, j)];
}

DistanceMatrix distance_matrix(const FeatureMatrix& m)
{
    if (m.rows() < 2) {
        throw InvalidArgument("distance_matrix: need at least 2 rows");
    }
    for (double v : m.values()) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("distance_matrix: non-finite entry");
        }
    }
    const std::size_t n = m.rows();
    std::vector<double> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double ss = 0.0;
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const double diff = m(i, c) - m(j, c);
                ss += diff * diff;
            }
            out.push_back(std::sqrt(ss));
        }
    }
    return {n, std::move(out)};
}

std::vector<MergeStep> ward_linkage(const DistanceMatrix& d)
{
    const std::size_t n = d.size();
    if (n < 2) {
        throw InvalidArgument("ward_linkage: need at least 2 observations");
    }

    // Working matrix of squared distances indexed by slot. A merged cluster
    // takes over the lower of its two slots.
    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = d.at(i, j);
            d2[i * n + j] = d2[j * n + i] = v * v;
        }
    }
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), std::size_t{0});
    std::vector<std::size_t> size(n, 1);
    std::vector<bool> active(n, true);

    std::vector<MergeStep> merges;
    merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        double best = std::numeric_limits<double>::infinity();
        std::pair<std::size_t, std::size_t> best_ids{std::numeric_limits<std::size_t>::max(), 0};

        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a]) {
                continue;
            }
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!active[b]) {
                    continue;
                }
                const double v = d2[a * n + b];
                const std::pair<std::size_t, std::size_t> ids = std::minmax(id[a], id[b]);
                if (v < best || (v == best && ids < best_ids)) {
                    best = v;
                    best_ids = ids;
                    best_a = a;
                    best_b = b;
                }
            }
        }

        const double ni = static_cast<double>(size[best_a]);
        const double nj = static_cast<double>(size[best_b]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == best_a || k == best_b) {
                continue;
            }
            const double nk = static_cast<double>(size[k]);
            const double updated =
                ((ni + nk) * d2[k * n + best_a] + (nj + nk) * d2[k * n + best_b] - nk * best) /
                (ni + nj + nk);
            d2[k * n + best_a] = d2[best_a * n + k] = updated;
        }

        MergeStep m;
        m.left = best_ids.first;
        m.right = best_ids.second;
        m.height = std::sqrt(std::max(0.0, best));
        m.size = size[best_a] + size[best_b];
        merges.push_back(m);

        id[best_a] = n + step;
        size[best_a] = m.size;
        active[best_b] = false;
    }
    return merges;
}

void validate_merges(std::span<const MergeStep> merges)
{
    const std::size_t n = merges.size() + 1;
    std::vector<std::size_t> sizes(n, 1);
    std::vector<bool> used(2 * n - 1, false);
    for (std::size_t s = 0; s < merges.size(); ++s) {
        const auto& m = merges[s];
        const std::size_t limit = n + s;
        for (auto c : {m.left, m.right}) {
            if (c >= limit) {
                throw InvalidArgument("merge " + std::to_string(s) + " refers to cluster " +
                                      std::to_string(c) + " before it exists");
            }
            if (used[c]) {
                throw InvalidArgument("cluster " + std::to_string(c) + " merged twice");
            }
            used[c] = true;
        }
        if (m.left == m.right) {
            throw InvalidArgument("merge " + std::to_string(s) + " joins a cluster with itself");
        }
        if (!std::isfinite(m.height) || m.height < 0.0) {
            throw InvalidArgument("merge " + std::to_string(s) + " has an invalid height");
        }
        const std::size_t expected = sizes[m.left] + sizes[m.right];
        if (m.size != expected) {
            throw InvalidArgument("merge " + std::to_string(s) + " has size " + std::to_string(m.size) +
                                  ", expected " + std::to_string(expected));
        }
        sizes.push_back(expected);
    }
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

// Members of every cluster id (leaves and merged) in ascending order.
std::vector<std::vector<std::size_t>> cluster_members(std::span<const MergeStep> merges)
{
    const std::size_t n = merges.size() + 1;
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = {i};
    }
    for (const auto& m : merges) {
        std::vector<std::size_t> joined;
        joined.reserve(members[m.left].size() + members[m.right].size());
        std::merge(members[m.left].begin(), members[m.left].end(), members[m.right].begin(),
                   members[m.right].end(), std::back_inserter(joined));
        members.push_back(std::move(joined));
    }
    return members;
}

}  // namespace

std::vector<std::size_t> cut_tree(std::span<const MergeStep> merges, std::size_t k)
{
    validate_merges(merges);
    const std::size_t n = merges.size() + 1;
    if (k < 1 || k > n) {
        throw InvalidArgument("cut_tree: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }

    // Union-find over cluster ids; id n+s represents the result of merge s.
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t s = 0; s < n - k; ++s) {
        parent[find_root(parent, merges[s].left)] = n + s;
        parent[find_root(parent, merges[s].right)] = n + s;
    }

    std::vector<std::size_t> labels(n);
    std::map<std::size_t, std::size_t> label_of_root;
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find_root(parent, i);
        auto [it, inserted] = label_of_root.try_emplace(root, label_of_root.size());
        labels[i] = it->second;
    }
    return labels;
}

DistanceMatrix cophenetic_distances(std::span<const MergeStep> merges)
{
    validate_merges(merges);
    const std::size_t n = merges.size() + 1;
    const auto members = cluster_members(merges);

    std::vector<double> full(n * n, 0.0);
    for (const auto& m : merges) {
        for (auto i : members[m.left]) {
            for (auto j : members[m.right]) {
                full[i * n + j] = full[j * n + i] = m.height;
            }
        }
    }
    std::vector<double> condensed;
    condensed.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            condensed.push_back(full[i * n + j]);
        }
    }
    return {n, std::move(condensed)};
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("adjusted_rand_index: labelings differ in length");
    }
    const auto n = static_cast<double>(a.size());
    if (a.size() < 2) {
        return 1.0;
    }
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> rows;
    std::map<std::size_t, double> cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [_, c] : joint) {
        index += pairs(c);
    }
    double sum_rows = 0.0;
    for (const auto& [_, c] : rows) {
        sum_rows += pairs(c);
    }
    double sum_cols = 0.0;
    for (const auto& [_, c] : cols) {
        sum_cols += pairs(c);
    }
    const double expected = sum_rows * sum_cols / pairs(n);
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) {
        // Both partitions trivial (all singletons or one block); they agree iff identical.
        return index == max_index ? 1.0 : 0.0;
    }
    return (index - expected) / (max_index - expected);
}

}  // namespace tiptrait::clustering
