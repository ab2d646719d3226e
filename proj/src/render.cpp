#include "tiptrait/render.hpp"

#include "tiptrait/clustering.hpp"
#include "tiptrait/text.hpp"

#include <algorithm>
#include <cmath>

namespace tiptrait::render {

namespace {

struct Tree {
    std::size_t leaves = 0;
    // For node id >= leaves: ordered children (smaller member first).
    std::vector<std::pair<std::size_t, std::size_t>> children;
    std::vector<std::size_t> min_member;
    std::vector<double> height;

    bool is_leaf(std::size_t id) const noexcept { return id < leaves; }
    std::size_t root() const noexcept { return leaves + children.size() - 1; }
    std::pair<std::size_t, std::size_t> kids(std::size_t id) const { return children[id - leaves]; }
};

Tree build_tree(std::span<const MergeStep> merges)
{
    clustering::validate_merges(merges);
    Tree t;
    t.leaves = merges.size() + 1;
    for (std::size_t i = 0; i < t.leaves; ++i) {
        t.min_member.push_back(i);
        t.height.push_back(0.0);
    }
    for (const auto& m : merges) {
        auto a = m.left;
        auto b = m.right;
        if (t.min_member[b] < t.min_member[a]) {
            std::swap(a, b);
        }
        t.children.emplace_back(a, b);
        t.min_member.push_back(t.min_member[a]);
        t.height.push_back(m.height);
    }
    return t;
}

void check_labels(std::span<const MergeStep> merges, std::span<const std::string> labels)
{
    if (labels.size() != merges.size() + 1) {
        throw InvalidArgument("render: " + std::to_string(labels.size()) + " labels for " +
                              std::to_string(merges.size() + 1) + " leaves");
    }
}

void collect_leaves(const Tree& t, std::size_t id, std::vector<std::size_t>& out)
{
    if (t.is_leaf(id)) {
        out.push_back(id);
        return;
    }
    const auto [a, b] = t.kids(id);
    collect_leaves(t, a, out);
    collect_leaves(t, b, out);
}

std::string newick_label(const std::string& label)
{
    const bool needs_quotes =
        label.empty() || label.find_first_of(" \t\r\n,:;()[]'") != std::string::npos;
    if (!needs_quotes) {
        return label;
    }
    std::string out = "'";
    for (char c : label) {
        out += c;
        if (c == '\'') {
            out += '\'';
        }
    }
    out += '\'';
    return out;
}

void emit_newick(const Tree& t, std::size_t id, std::span<const std::string> labels, std::string& out)
{
    if (t.is_leaf(id)) {
        out += newick_label(labels[id]);
        return;
    }
    const auto [a, b] = t.kids(id);
    out += '(';
    emit_newick(t, a, labels, out);
    out += ':';
    out += text::format_shortest(t.height[id] - t.height[a]);
    out += ',';
    emit_newick(t, b, labels, out);
    out += ':';
    out += text::format_shortest(t.height[id] - t.height[b]);
    out += ')';
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    // Fixed two decimals keep golden files stable and compact.
    const double r = std::round(v * 100.0) / 100.0;
    return text::format_shortest(r == 0.0 ? 0.0 : r);
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` intervals.
double tick_step(double max_value, int target)
{
    const double raw = max_value / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

}  // namespace

std::vector<std::size_t> leaf_order(std::span<const MergeStep> merges)
{
    const auto t = build_tree(merges);
    std::vector<std::size_t> order;
    order.reserve(t.leaves);
    collect_leaves(t, t.root(), order);
    return order;
}

std::string to_newick(std::span<const MergeStep> merges, std::span<const std::string> labels)
{
    check_labels(merges, labels);
    const auto t = build_tree(merges);
    std::string out;
    emit_newick(t, t.root(), labels, out);
    out += ';';
    return out;
}

std::string render_svg(std::span<const MergeStep> merges, std::span<const std::string> labels,
                       const SvgOptions& options)
{
    if (options.width <= 0 || options.height <= 0) {
        throw InvalidArgument("render_svg: canvas dimensions must be positive");
    }
    check_labels(merges, labels);
    const auto t = build_tree(merges);
    const bool top = options.orientation == Orientation::top;

    std::vector<std::size_t> order;
    collect_leaves(t, t.root(), order);

    // Plot area. The leaf axis needs room for labels, the height axis for ticks.
    const double W = options.width;
    const double H = options.height;
    const double margin = 20.0;
    const double label_room = top ? std::min(0.3 * H, 140.0) : std::min(0.3 * W, 160.0);
    const double tick_room = top ? std::min(0.15 * W, 60.0) : std::min(0.15 * H, 40.0);

    double leaf_lo, leaf_hi, h_lo, h_hi;  // leaf axis span, height axis span (pixel)
    if (top) {
        leaf_lo = tick_room + margin;
        leaf_hi = W - margin;
        h_lo = H - label_room;  // height 0
        h_hi = margin;          // max height
    } else {
        leaf_lo = margin;
        leaf_hi = H - tick_room;
        h_lo = label_room;
        h_hi = W - margin;
    }

    const double max_h = t.height[t.root()] > 0.0 ? t.height[t.root()] : 1.0;
    auto hpos = [&](double h) { return h_lo + (h_hi - h_lo) * (h / max_h); };

    std::vector<double> lpos(t.height.size(), 0.0);
    const auto n = static_cast<double>(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        lpos[order[i]] = leaf_lo + (leaf_hi - leaf_lo) * ((static_cast<double>(i) + 0.5) / n);
    }
    for (std::size_t id = t.leaves; id < t.height.size(); ++id) {
        const auto [a, b] = t.kids(id);
        lpos[id] = 0.5 * (lpos[a] + lpos[b]);
    }

    auto line = [&](std::string& out, const char* cls, double l1, double h1, double l2, double h2) {
        double x1 = l1, y1 = h1, x2 = l2, y2 = h2;
        if (!top) {
            std::swap(x1, y1);
            std::swap(x2, y2);
        }
        out += "  <line class=\"" + std::string(cls) + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) +
               "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\"/>\n";
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(options.width) + "\" height=\"" + std::to_string(options.height) +
           "\" viewBox=\"0 0 " + std::to_string(options.width) + " " + std::to_string(options.height) +
           "\">\n";
    out += "  <title>Ward dendrogram</title>\n";
    out += "  <desc>Merge heights are Ward distances, sqrt(2 x increase in within-cluster sum of squares).</desc>\n";
    out += "  <style>line.link{stroke:#1f4e79;stroke-width:1.5}line.axis,line.tick{stroke:#444;stroke-width:1}"
           "text{font-family:sans-serif;font-size:11px;fill:#222}</style>\n";
    out += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" fill=\"white\"/>\n";

    // height axis with ticks
    const double axis_at = top ? leaf_lo - 8.0 : leaf_hi + 8.0;
    line(out, "axis", axis_at, hpos(0.0), axis_at, hpos(max_h));
    const double step = tick_step(max_h, 5);
    for (int i = 0;; ++i) {
        const double v = step * i;
        if (v > max_h * (1.0 + 1e-9)) {
            break;
        }
        const double tick_end = top ? axis_at - 4.0 : axis_at + 4.0;
        line(out, "tick", axis_at, hpos(v), tick_end, hpos(v));
        const auto label = xml_escape(text::format_significant(v, 6));
        if (top) {
            out += "  <text class=\"tick-label\" x=\"" + num(axis_at - 6.0) + "\" y=\"" + num(hpos(v) + 4.0) +
                   "\" text-anchor=\"end\">" + label + "</text>\n";
        } else {
            out += "  <text class=\"tick-label\" x=\"" + num(hpos(v)) + "\" y=\"" + num(axis_at + 16.0) +
                   "\" text-anchor=\"middle\">" + label + "</text>\n";
        }
    }

    // U-shaped links
    for (std::size_t id = t.leaves; id < t.height.size(); ++id) {
        const auto [a, b] = t.kids(id);
        const double h = hpos(t.height[id]);
        line(out, "link", lpos[a], hpos(t.height[a]), lpos[a], h);
        line(out, "link", lpos[a], h, lpos[b], h);
        line(out, "link", lpos[b], hpos(t.height[b]), lpos[b], h);
    }

    for (auto leaf : order) {
        const auto label = xml_escape(labels[leaf]);
        if (top) {
            const double x = lpos[leaf];
            const double y = hpos(0.0) + 8.0;
            out += "  <text class=\"leaf-label\" x=\"" + num(x) + "\" y=\"" + num(y) +
                   "\" text-anchor=\"end\" transform=\"rotate(-60 " + num(x) + " " + num(y) + ")\">" + label +
                   "</text>\n";
        } else {
            out += "  <text class=\"leaf-label\" x=\"" + num(hpos(0.0) - 6.0) + "\" y=\"" + num(lpos[leaf] + 4.0) +
                   "\" text-anchor=\"end\">" + label + "</text>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string render_ascii(std::span<const MergeStep> merges, std::span<const std::string> labels)
{
    check_labels(merges, labels);
    const auto t = build_tree(merges);
    std::vector<std::size_t> order;
    collect_leaves(t, t.root(), order);

    std::size_t label_width = 0;
    for (const auto& l : labels) {
        label_width = std::max(label_width, l.size());
    }
    const std::size_t tree_width = 40;
    const std::size_t origin = label_width + 1;
    const double max_h = t.height[t.root()] > 0.0 ? t.height[t.root()] : 1.0;
    auto col = [&](double h) {
        return origin + static_cast<std::size_t>(std::lround(h / max_h * static_cast<double>(tree_width - 1)));
    };

    std::vector<std::string> grid(order.size(), std::string(origin + tree_width, ' '));
    std::vector<std::size_t> row(t.height.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) {
        row[order[r]] = r;
        const auto& l = labels[order[r]];
        grid[r].replace(label_width - l.size(), l.size(), l);
    }
    if (t.leaves == 1) {
        return grid[0].substr(0, label_width) + "\n";
    }

    // A node is drawn on its upper child's row; each child's horizontal run
    // stops at the parent's column, where a vertical bar joins the pair.
    std::vector<std::size_t> parent_col(t.height.size(), 0);
    for (std::size_t id = t.leaves; id < t.height.size(); ++id) {
        const auto [a, b] = t.kids(id);
        row[id] = std::min(row[a], row[b]);
        parent_col[a] = parent_col[b] = col(t.height[id]);
    }
    parent_col[t.root()] = col(t.height[t.root()]);

    for (std::size_t id = 0; id < t.height.size(); ++id) {
        const std::size_t from = t.is_leaf(id) ? origin : col(t.height[id]);
        for (std::size_t c = from; c < parent_col[id]; ++c) {
            if (grid[row[id]][c] == ' ') {
                grid[row[id]][c] = '-';
            }
        }
    }
    for (std::size_t id = t.leaves; id < t.height.size(); ++id) {
        const auto [a, b] = t.kids(id);
        const std::size_t c = col(t.height[id]);
        const std::size_t r0 = std::min(row[a], row[b]);
        const std::size_t r1 = std::max(row[a], row[b]);
        for (std::size_t r = r0; r <= r1; ++r) {
            grid[r][c] = (r == r0 || r == r1) ? '+' : '|';
        }
    }

    std::string out;
    for (auto& line : grid) {
        const auto end = line.find_last_not_of(' ');
        out += line.substr(0, end + 1);
        out += '\n';
    }
    return out;
}

}  // namespace tiptrait::render
