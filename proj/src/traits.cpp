#include "tiptrait/traits.hpp"

#include "tiptrait/geometry.hpp"
#include "tiptrait/text.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace tiptrait::traits {

TraitRecord compute_traits(const PlantObservation& obs)
{
    TraitRecord rec;
    rec.plant_id = obs.plant_id;
    rec.genotype = obs.genotype;
    rec.treatment = obs.treatment;
    rec.dat = obs.dat;
    rec.n_leaves = obs.tips.size();
    if (obs.tips.empty()) {
        return rec;
    }

    rec.hull_area = geometry::polygon_area(geometry::convex_hull(obs.tips));
    if (rec.hull_area >= kMinHullArea) {
        rec.leaves_per_hull = static_cast<double>(rec.n_leaves) / rec.hull_area;
    }
    const auto s = geometry::spreads(obs.tips);
    rec.h_spread = s.horizontal;
    rec.v_spread = s.vertical;
    return rec;
}

std::vector<TraitRecord> traits_table(std::span<const PlantObservation> dataset, unsigned jobs)
{
    std::vector<TraitRecord> out(dataset.size());
    jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(1, dataset.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            out[i] = compute_traits(dataset[i]);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < dataset.size(); i = next++) {
            try {
                out[i] = compute_traits(dataset[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

std::string format_traits_csv(std::span<const TraitRecord> records, double scale_mm_per_px)
{
    const double s = scale_mm_per_px;
    auto num = [](double v) { return text::format_significant(v, 9); };

    std::string out(kCsvHeader);
    out.push_back('\n');
    for (const auto& r : records) {
        out += text::csv_line({
            r.plant_id,
            r.genotype,
            std::string(to_string(r.treatment)),
            std::to_string(r.dat),
            std::to_string(r.n_leaves),
            num(r.hull_area * s * s),
            r.leaves_per_hull ? num(*r.leaves_per_hull / (s * s)) : std::string(),
            num(r.h_spread * s),
            num(r.v_spread * s),
        });
    }
    return out;
}

std::vector<TraitRecord> parse_traits_csv(std::string_view csv_text)
{
    const auto rows = text::parse_csv(csv_text);
    if (rows.empty()) {
        throw ParseError(1, "traits csv: missing header");
    }
    static constexpr std::string_view required[] = {
        "plant_id", "genotype",      "treatment",   "dat",         "n_leaves",
        "hull_area_px2", "leaves_per_hull", "h_spread_px", "v_spread_px",
    };
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
        index.emplace(std::string(text::trim(rows[0].fields[i])), i);
    }
    for (auto name : required) {
        if (!index.contains(name)) {
            throw ParseError(rows[0].line, "traits csv: missing column '" + std::string(name) + "'");
        }
    }

    std::vector<TraitRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != rows[0].fields.size()) {
            throw ParseError(row.line, "traits csv: wrong field count");
        }
        auto field = [&](std::string_view name) {
            return text::trim(row.fields[index.find(name)->second]);
        };
        auto number = [&](std::string_view name) {
            const auto v = text::parse_double(field(name));
            if (!v || *v < 0.0) {
                throw ParseError(row.line, "traits csv: bad value in column '" + std::string(name) + "'");
            }
            return *v;
        };

        TraitRecord rec;
        rec.plant_id = std::string(field("plant_id"));
        rec.genotype = std::string(field("genotype"));
        if (rec.genotype.empty()) {
            throw ParseError(row.line, "traits csv: empty genotype");
        }
        const auto t = parse_treatment(field("treatment"));
        if (!t) {
            throw ParseError(row.line, "traits csv: unknown treatment '" + std::string(field("treatment")) + "'");
        }
        rec.treatment = *t;
        const auto dat = text::parse_integer(field("dat"));
        if (!dat) {
            throw ParseError(row.line, "traits csv: non-integer dat");
        }
        rec.dat = static_cast<int>(*dat);
        const auto n = text::parse_integer(field("n_leaves"));
        if (!n || *n < 0) {
            throw ParseError(row.line, "traits csv: n_leaves must be a non-negative integer");
        }
        rec.n_leaves = static_cast<std::size_t>(*n);
        rec.hull_area = number("hull_area_px2");
        if (!field("leaves_per_hull").empty()) {
            rec.leaves_per_hull = number("leaves_per_hull");
        }
        rec.h_spread = number("h_spread_px");
        rec.v_spread = number("v_spread_px");
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace tiptrait::traits
