#pragma once

// Slow, independent reference implementations used only by the tests. None
// of these call into the code paths they check.

#include "tiptrait/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using tiptrait::MergeStep;
using tiptrait::TipPoint;

inline double cross(const TipPoint& o, const TipPoint& a, const TipPoint& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_closed_segment(const TipPoint& a, const TipPoint& b, const TipPoint& p)
{
    if (cross(a, b, p) != 0.0) {
        return false;
    }
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

inline bool in_closed_triangle(const TipPoint& a, const TipPoint& b, const TipPoint& c, const TipPoint& p)
{
    if (cross(a, b, c) == 0.0) {
        return on_closed_segment(a, b, p) || on_closed_segment(b, c, p) || on_closed_segment(a, c, p);
    }
    const double d1 = cross(a, b, p);
    const double d2 = cross(b, c, p);
    const double d3 = cross(c, a, p);
    const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(has_neg && has_pos);
}

// O(n^4): keep every distinct point not covered by a triangle (or segment)
// of other points. Returns the surviving points sorted.
inline std::vector<TipPoint> brute_force_hull_vertices(std::vector<TipPoint> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    std::vector<TipPoint> keep;
    for (std::size_t p = 0; p < n; ++p) {
        bool covered = false;
        for (std::size_t i = 0; i < n && !covered; ++i) {
            if (i == p) continue;
            for (std::size_t j = i + 1; j < n && !covered; ++j) {
                if (j == p) continue;
                if (on_closed_segment(pts[i], pts[j], pts[p])) {
                    covered = true;
                    break;
                }
                for (std::size_t k = j + 1; k < n; ++k) {
                    if (k == p) continue;
                    if (in_closed_triangle(pts[i], pts[j], pts[k], pts[p])) {
                        covered = true;
                        break;
                    }
                }
            }
        }
        if (!covered) {
            keep.push_back(pts[p]);
        }
    }
    return keep;
}

// Sum of fan triangles from the first vertex, each taken as an absolute area.
inline double fan_area(const std::vector<TipPoint>& v)
{
    double a = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        a += std::abs(cross(v[0], v[i], v[i + 1])) / 2.0;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Ward by exhaustive search over the increase in within-cluster sum of squares.

inline double ess(const std::vector<std::vector<double>>& data, const std::vector<std::size_t>& members)
{
    const std::size_t d = data[0].size();
    std::vector<double> centroid(d, 0.0);
    for (auto m : members) {
        for (std::size_t c = 0; c < d; ++c) centroid[c] += data[m][c];
    }
    for (auto& c : centroid) c /= static_cast<double>(members.size());
    double s = 0.0;
    for (auto m : members) {
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = data[m][c] - centroid[c];
            s += diff * diff;
        }
    }
    return s;
}

inline std::vector<MergeStep> ward_by_ess(const std::vector<std::vector<double>>& data)
{
    const std::size_t n = data.size();
    std::map<std::size_t, std::vector<std::size_t>> clusters;  // id -> members
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

    std::vector<MergeStep> out;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        for (auto ia = clusters.begin(); ia != clusters.end(); ++ia) {
            for (auto ib = std::next(ia); ib != clusters.end(); ++ib) {
                std::vector<std::size_t> u = ia->second;
                u.insert(u.end(), ib->second.begin(), ib->second.end());
                const double delta = ess(data, u) - ess(data, ia->second) - ess(data, ib->second);
                if (delta < best) {  // map iteration is already lexicographic in (a, b)
                    best = delta;
                    ba = ia->first;
                    bb = ib->first;
                }
            }
        }
        std::vector<std::size_t> u = clusters[ba];
        u.insert(u.end(), clusters[bb].begin(), clusters[bb].end());
        out.push_back({ba, bb, std::sqrt(2.0 * std::max(0.0, best)), u.size()});
        clusters.erase(ba);
        clusters.erase(bb);
        clusters[n + step] = std::move(u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cophenetic distance by walking parent links to the lowest common ancestor.

inline std::vector<std::vector<double>> cophenetic_by_traversal(const std::vector<MergeStep>& merges)
{
    const std::size_t n = merges.size() + 1;
    std::vector<std::size_t> parent(2 * n - 1, std::numeric_limits<std::size_t>::max());
    std::vector<double> height(2 * n - 1, 0.0);
    for (std::size_t s = 0; s < merges.size(); ++s) {
        parent[merges[s].left] = n + s;
        parent[merges[s].right] = n + s;
        height[n + s] = merges[s].height;
    }
    auto ancestors = [&](std::size_t x) {
        std::vector<std::size_t> a;
        while (x != std::numeric_limits<std::size_t>::max()) {
            a.push_back(x);
            x = parent[x];
        }
        return a;
    };
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ai = ancestors(i);
        const std::set<std::size_t> set_i(ai.begin(), ai.end());
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (auto x : ancestors(j)) {
                if (set_i.contains(x)) {
                    out[i][j] = height[x];
                    break;
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Minimal Newick reader: labels (bare or single-quoted) and branch lengths.

struct NewickNode {
    std::string label;
    double length = 0.0;
    std::vector<std::unique_ptr<NewickNode>> children;
};

class NewickReader {
public:
    explicit NewickReader(std::string s) : s_(std::move(s)) {}

    std::unique_ptr<NewickNode> parse()
    {
        auto root = node();
        expect(';');
        if (pos_ != s_.size()) throw std::runtime_error("newick: trailing characters");
        return root;
    }

private:
    std::unique_ptr<NewickNode> node()
    {
        auto n = std::make_unique<NewickNode>();
        if (peek() == '(') {
            ++pos_;
            n->children.push_back(node());
            while (peek() == ',') {
                ++pos_;
                n->children.push_back(node());
            }
            expect(')');
        }
        n->label = label();
        if (peek() == ':') {
            ++pos_;
            const auto start = pos_;
            while (pos_ < s_.size() && std::string("0123456789.eE+-").find(s_[pos_]) != std::string::npos) ++pos_;
            n->length = std::stod(s_.substr(start, pos_ - start));
        }
        return n;
    }

    std::string label()
    {
        std::string out;
        if (peek() == '\'') {
            ++pos_;
            for (;;) {
                if (pos_ >= s_.size()) throw std::runtime_error("newick: unterminated quote");
                char c = s_[pos_++];
                if (c == '\'') {
                    if (peek() == '\'') {
                        out += '\'';
                        ++pos_;
                        continue;
                    }
                    break;
                }
                out += c;
            }
            return out;
        }
        while (pos_ < s_.size() && std::string("(),:;").find(s_[pos_]) == std::string::npos) out += s_[pos_++];
        return out;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void expect(char c)
    {
        if (peek() != c) throw std::runtime_error(std::string("newick: expected '") + c + "'");
        ++pos_;
    }

    std::string s_;
    std::size_t pos_ = 0;
};

// Every clade of the parsed tree (as a sorted label list) with its height
// above the leaves, measured along the first child path.
inline double collect_clades(const NewickNode& n, std::map<std::vector<std::string>, double>& out,
                             std::vector<std::string>& leaves)
{
    if (n.children.empty()) {
        leaves = {n.label};
        return 0.0;
    }
    std::vector<std::string> all;
    double h = 0.0;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        std::vector<std::string> sub;
        const double ch = collect_clades(*n.children[i], out, sub);
        if (i == 0) h = ch + n.children[i]->length;
        all.insert(all.end(), sub.begin(), sub.end());
    }
    std::sort(all.begin(), all.end());
    out[all] = h;
    leaves = all;
    return h;
}

// Leaf labels left to right.
inline void leaf_labels(const NewickNode& n, std::vector<std::string>& out)
{
    if (n.children.empty()) {
        out.push_back(n.label);
        return;
    }
    for (const auto& c : n.children) leaf_labels(*c, out);
}

// Same clade map computed straight from a merge list.
inline std::map<std::vector<std::string>, double> clades_from_merges(const std::vector<MergeStep>& merges,
                                                                      const std::vector<std::string>& labels)
{
    const std::size_t n = labels.size();
    std::vector<std::vector<std::string>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {labels[i]};
    std::map<std::vector<std::string>, double> out;
    for (const auto& m : merges) {
        auto u = members[m.left];
        u.insert(u.end(), members[m.right].begin(), members[m.right].end());
        std::sort(u.begin(), u.end());
        out[u] = m.height;
        members.push_back(u);
    }
    return out;
}

// ---------------------------------------------------------------------------

inline std::vector<TipPoint> random_points(std::mt19937_64& gen, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<TipPoint> pts(n);
    for (auto& p : pts) {
        p.x = u(gen);
        p.y = u(gen);
    }
    return pts;
}

inline std::vector<std::vector<double>> random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (auto& r : m)
        for (auto& v : r) v = g(gen);
    return m;
}

}  // namespace oracle
