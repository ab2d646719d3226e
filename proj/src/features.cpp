#include "tiptrait/features.hpp"

#include "tiptrait/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tiptrait::features {

std::string_view to_string(Feature f) noexcept
{
    switch (f) {
    case Feature::n_leaves:
        return "n_leaves";
    case Feature::hull_area:
        return "hull_area";
    case Feature::leaves_per_hull:
        return "leaves_per_hull";
    case Feature::h_spread:
        return "h_spread";
    case Feature::v_spread:
        return "v_spread";
    }
    return "?";
}

std::optional<Feature> parse_feature(std::string_view name) noexcept
{
    for (auto f : kAllFeatures) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view list)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = list.find(',', pos);
        const auto item = text::trim(list.substr(pos, comma == std::string_view::npos ? list.size() - pos : comma - pos));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

std::optional<double> feature_value(const TraitRecord& r, Feature f) noexcept
{
    switch (f) {
    case Feature::n_leaves:
        return static_cast<double>(r.n_leaves);
    case Feature::hull_area:
        return r.hull_area;
    case Feature::leaves_per_hull:
        return r.leaves_per_hull;
    case Feature::h_spread:
        return r.h_spread;
    case Feature::v_spread:
        return r.v_spread;
    }
    return std::nullopt;
}

}  // namespace

std::vector<Feature> parse_feature_list(std::string_view list)
{
    if (text::trim(list) == "all") {
        return {std::begin(kAllFeatures), std::end(kAllFeatures)};
    }
    std::vector<Feature> out;
    for (auto name : split_commas(list)) {
        const auto f = parse_feature(name);
        if (!f) {
            throw InvalidArgument("unknown feature '" + std::string(name) + "'");
        }
        if (std::find(out.begin(), out.end(), *f) != out.end()) {
            throw InvalidArgument("feature '" + std::string(name) + "' listed twice");
        }
        out.push_back(*f);
    }
    if (out.empty()) {
        throw InvalidArgument("empty feature list");
    }
    return out;
}

std::vector<Treatment> parse_treatment_list(std::string_view list)
{
    if (text::trim(list) == "all") {
        return {Treatment::control, Treatment::drought};
    }
    std::vector<Treatment> out;
    for (auto name : split_commas(list)) {
        const auto t = parse_treatment(name);
        if (!t) {
            throw InvalidArgument("unknown treatment '" + std::string(name) + "'");
        }
        if (std::find(out.begin(), out.end(), *t) != out.end()) {
            throw InvalidArgument("treatment '" + std::string(name) + "' listed twice");
        }
        out.push_back(*t);
    }
    if (out.empty()) {
        throw InvalidArgument("empty treatment list");
    }
    return out;
}

FeatureMatrix aggregate(std::span<const TraitRecord> records, const AggregationScheme& scheme)
{
    if (scheme.features.empty() || scheme.treatments.empty()) {
        throw InvalidArgument("aggregation scheme needs at least one feature and one treatment");
    }

    struct Acc {
        double sum = 0.0;
        std::size_t count = 0;
    };
    // genotype -> per-column accumulators
    std::map<std::string, std::vector<Acc>> table;
    const std::size_t ncols = scheme.features.size() * scheme.treatments.size();

    for (const auto& r : records) {
        auto& row = table.try_emplace(r.genotype, ncols).first->second;
        if (scheme.dat_range && (r.dat < scheme.dat_range->first || r.dat > scheme.dat_range->second)) {
            continue;
        }
        for (std::size_t fi = 0; fi < scheme.features.size(); ++fi) {
            for (std::size_t ti = 0; ti < scheme.treatments.size(); ++ti) {
                if (r.treatment != scheme.treatments[ti]) {
                    continue;
                }
                if (const auto v = feature_value(r, scheme.features[fi])) {
                    auto& acc = row[fi * scheme.treatments.size() + ti];
                    acc.sum += *v;
                    ++acc.count;
                }
            }
        }
    }

    std::vector<std::string> columns;
    for (auto f : scheme.features) {
        for (auto t : scheme.treatments) {
            columns.push_back(std::string(to_string(f)) + "." + std::string(to_string(t)) + ".mean");
        }
    }

    std::vector<std::string> rows;
    std::vector<double> values;
    for (const auto& [genotype, accs] : table) {
        rows.push_back(genotype);
        for (std::size_t c = 0; c < ncols; ++c) {
            if (accs[c].count == 0) {
                throw InvalidArgument("genotype '" + genotype + "' has no records for '" + columns[c] + "'");
            }
            values.push_back(accs[c].sum / static_cast<double>(accs[c].count));
        }
    }
    return {std::move(rows), std::move(columns), std::move(values), false};
}

FeatureMatrix standardize(const FeatureMatrix& m)
{
    if (m.standardized()) {
        throw InvalidArgument("standardize: matrix is already standardized");
    }
    if (m.rows() < 2) {
        throw InvalidArgument("standardize: need at least 2 rows");
    }
    const auto n = static_cast<double>(m.rows());
    std::vector<double> out(m.values().size());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            mean += m(r, c);
        }
        mean /= n;
        double ss = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const double d = m(r, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (n - 1.0));
        // Treat spread indistinguishable from rounding noise as constant.
        const bool constant = !(sd > 0.0) || sd <= 1e-12 * std::abs(mean);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            out[r * m.cols() + c] = constant ? 0.0 : (m(r, c) - mean) / sd;
        }
    }
    return {m.row_labels(), m.column_labels(), std::move(out), true};
}

std::string format_feature_csv(const FeatureMatrix& m)
{
    std::vector<std::string> header{"genotype"};
    header.insert(header.end(), m.column_labels().begin(), m.column_labels().end());
    std::string out = text::csv_line(header);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<std::string> fields{m.row_labels()[r]};
        for (std::size_t c = 0; c < m.cols(); ++c) {
            fields.push_back(text::format_shortest(m(r, c)));
        }
        out += text::csv_line(fields);
    }
    return out;
}

}  // namespace tiptrait::features
