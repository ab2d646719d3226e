#pragma once

#include "tiptrait/core.hpp"

#include <span>
#include <string>
#include <vector>

namespace tiptrait::render {

// Leaf indices in drawing order: in-order traversal visiting, at every node,
// the child holding the smaller original index first. Shared by all renderers.
std::vector<std::size_t> leaf_order(std::span<const MergeStep> merges);

// Rooted binary Newick with branch length = parent height - child height.
// Labels containing Newick punctuation or whitespace are single-quoted.
// Throws InvalidArgument if labels.size() != merges.size() + 1.
std::string to_newick(std::span<const MergeStep> merges, std::span<const std::string> labels);

enum class Orientation {
    top,   // root at the top, leaves along the bottom edge
    left,  // leaves down the left edge, root to the right
};

struct SvgOptions {
    int width = 800;
    int height = 500;
    Orientation orientation = Orientation::top;
};

// Standalone SVG 1.1 document. Elements carry classes so consumers can pick
// them apart: "link" (three lines per merge), "leaf-label", "axis", "tick",
// "tick-label".
std::string render_svg(std::span<const MergeStep> merges, std::span<const std::string> labels,
                       const SvgOptions& options = {});

// Monospace dendrogram, one line per leaf, root to the right.
std::string render_ascii(std::span<const MergeStep> merges, std::span<const std::string> labels);

}  // namespace tiptrait::render
