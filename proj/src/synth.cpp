#include "tiptrait/synth.hpp"

#include "tiptrait/ingest.hpp"
#include "tiptrait/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace tiptrait::synth {

namespace fs = std::filesystem;
using nlohmann::json;

void Archetype::validate() const
{
    auto fail = [&](const std::string& what) {
        throw InvalidArgument("archetype '" + name + "': " + what);
    };
    if (name.empty()) {
        throw InvalidArgument("archetype: empty name");
    }
    if (!(leaf_count_mean > 0.0)) fail("leaf_count_mean must be positive");
    if (!(leaf_count_sd >= 0.0)) fail("leaf_count_sd must be non-negative");
    if (!(radius_mean > 0.0)) fail("radius_mean must be positive");
    if (!(radius_sd >= 0.0)) fail("radius_sd must be non-negative");
    if (!(anisotropy > 0.0) || !std::isfinite(anisotropy)) fail("anisotropy must be positive");
    if (!(drought_leaf_factor > 0.0 && drought_leaf_factor <= 1.0)) fail("drought_leaf_factor must be in (0,1]");
    if (!(drought_radius_factor > 0.0 && drought_radius_factor <= 1.0)) fail("drought_radius_factor must be in (0,1]");
}

void DetectionNoise::validate() const
{
    if (!(jitter_sd >= 0.0) || !std::isfinite(jitter_sd)) {
        throw InvalidArgument("noise: jitter_sd must be non-negative");
    }
    if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
        throw InvalidArgument("noise: drop_rate must be in [0,1)");
    }
    if (!(spurious_rate >= 0.0 && spurious_rate < 1.0)) {
        throw InvalidArgument("noise: spurious_rate must be in [0,1)");
    }
}

void SynthConfig::validate() const
{
    if (groups.empty()) {
        throw InvalidArgument("config: at least one archetype is required");
    }
    std::set<std::string> genotypes;
    for (const auto& g : groups) {
        g.archetype.validate();
        if (g.genotypes.empty()) {
            throw InvalidArgument("config: archetype '" + g.archetype.name + "' has no genotypes");
        }
        for (const auto& name : g.genotypes) {
            if (name.empty()) {
                throw InvalidArgument("config: empty genotype name");
            }
            if (!genotypes.insert(name).second) {
                throw InvalidArgument("config: genotype '" + name + "' assigned twice");
            }
        }
    }
    if (replicates < 1) {
        throw InvalidArgument("config: replicates must be >= 1");
    }
    if (dats.empty()) {
        throw InvalidArgument("config: dat list is empty");
    }
    if (std::set<int>(dats.begin(), dats.end()).size() != dats.size()) {
        throw InvalidArgument("config: dat list has duplicates");
    }
    if (image.width <= 0 || image.height <= 0) {
        throw InvalidArgument("config: image dimensions must be positive");
    }
    if (!(tip_box_w > 0.0 && tip_box_w <= 1.0) || !(tip_box_h > 0.0 && tip_box_h <= 1.0)) {
        throw InvalidArgument("config: tip box extents must be in (0,1]");
    }
    noise.validate();
}

namespace {

// Clamp into the image and snap onto a value reproducible from its
// normalized coordinate.
TipPoint settle(double x, double y, const ImageSize& image)
{
    const auto w = static_cast<double>(image.width);
    const auto h = static_cast<double>(image.height);
    x = std::clamp(x, 0.0, w);
    y = std::clamp(y, 0.0, h);
    return {ingest::to_normalized(x, image.width) * w, ingest::to_normalized(y, image.height) * h};
}

}  // namespace

GeneratedPlant generate_plant(const Archetype& arch, Treatment treatment, int dat, std::uint64_t seed,
                              const ImageSize& image, const DetectionNoise& noise)
{
    arch.validate();
    noise.validate();
    if (image.width <= 0 || image.height <= 0) {
        throw InvalidArgument("generate_plant: image dimensions must be positive");
    }

    Rng rng(seed);
    const bool drought = treatment == Treatment::drought;

    const double drawn = arch.leaf_count_mean + arch.leaf_count_sd * rng.normal();
    const auto full_count = static_cast<std::size_t>(std::max(1.0, std::round(drawn)));
    const std::size_t count =
        drought ? static_cast<std::size_t>(
                      std::max(1.0, std::round(static_cast<double>(full_count) * arch.drought_leaf_factor)))
                : full_count;
    const double radius_scale = drought ? arch.drought_radius_factor : 1.0;

    const double cx = 0.5 * image.width;
    const double cy = 0.5 * image.height;

    GeneratedPlant plant;
    for (auto* obs : {&plant.truth, &plant.detected}) {
        obs->genotype = arch.name;
        obs->treatment = treatment;
        obs->dat = dat;
        obs->image_width = image.width;
        obs->image_height = image.height;
    }

    // All full_count tips are drawn regardless of treatment to keep the
    // stream aligned between twins.
    for (std::size_t i = 0; i < full_count; ++i) {
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        const double r = std::abs(arch.radius_mean + arch.radius_sd * rng.normal()) * radius_scale;
        if (i < count) {
            plant.truth.tips.push_back(
                settle(cx + r * std::cos(angle), cy + r * arch.anisotropy * std::sin(angle), image));
        }
    }

    // Detector noise: per true tip, one drop draw, two jitter draws and three
    // spurious draws, consumed unconditionally.
    std::vector<TipPoint> spurious;
    for (const auto& tip : plant.truth.tips) {
        const bool dropped = rng.uniform() < noise.drop_rate;
        const double jx = rng.normal();
        const double jy = rng.normal();
        const bool spawn = rng.uniform() < noise.spurious_rate;
        const double sr = std::sqrt(rng.uniform()) * arch.radius_mean * radius_scale;
        const double sa = 2.0 * std::numbers::pi * rng.uniform();

        if (!dropped) {
            plant.detected.tips.push_back(
                settle(tip.x + noise.jitter_sd * jx, tip.y + noise.jitter_sd * jy, image));
        }
        if (spawn) {
            spurious.push_back(
                settle(cx + sr * std::cos(sa), cy + sr * arch.anisotropy * std::sin(sa), image));
        }
    }
    plant.detected.tips.insert(plant.detected.tips.end(), spurious.begin(), spurious.end());
    return plant;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument("config: bad value for '" + where + key + "'");
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key)) {
        throw InvalidArgument("config: missing '" + where + key + "'");
    }
    return get_or<T>(obj, key, T{}, where);
}

}  // namespace

SynthConfig parse_synth_config(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw InvalidArgument("config: top level must be an object");
    }
    static const std::set<std::string> known = {"seed",  "replicates", "dat",      "image_width",
                                                "image_height", "tip_box", "noise", "archetypes"};
    for (const auto& [key, _] : root.items()) {
        if (!known.contains(key)) {
            throw InvalidArgument("config: unknown key '" + key + "'");
        }
    }

    SynthConfig cfg;
    cfg.seed = get_or<std::uint64_t>(root, "seed", cfg.seed, "");
    cfg.replicates = get_or<int>(root, "replicates", cfg.replicates, "");
    cfg.dats = get_or<std::vector<int>>(root, "dat", cfg.dats, "");
    cfg.image.width = get_or<int>(root, "image_width", cfg.image.width, "");
    cfg.image.height = get_or<int>(root, "image_height", cfg.image.height, "");
    if (root.contains("tip_box")) {
        const auto& box = root["tip_box"];
        cfg.tip_box_w = get_or<double>(box, "w", cfg.tip_box_w, "tip_box.");
        cfg.tip_box_h = get_or<double>(box, "h", cfg.tip_box_h, "tip_box.");
    }
    if (root.contains("noise")) {
        const auto& n = root["noise"];
        cfg.noise.jitter_sd = get_or<double>(n, "jitter_sd", 0.0, "noise.");
        cfg.noise.drop_rate = get_or<double>(n, "drop_rate", 0.0, "noise.");
        cfg.noise.spurious_rate = get_or<double>(n, "spurious_rate", 0.0, "noise.");
    }
    if (!root.contains("archetypes") || !root["archetypes"].is_array()) {
        throw InvalidArgument("config: 'archetypes' must be an array");
    }
    for (const auto& a : root["archetypes"]) {
        const std::string where = "archetypes[].";
        ArchetypeGroup g;
        g.archetype.name = require<std::string>(a, "name", where);
        g.archetype.leaf_count_mean = require<double>(a, "leaf_count_mean", where);
        g.archetype.leaf_count_sd = get_or<double>(a, "leaf_count_sd", 0.0, where);
        g.archetype.radius_mean = require<double>(a, "radius_mean", where);
        g.archetype.radius_sd = get_or<double>(a, "radius_sd", 0.0, where);
        g.archetype.anisotropy = get_or<double>(a, "anisotropy", 1.0, where);
        g.archetype.drought_leaf_factor = get_or<double>(a, "drought_leaf_factor", 1.0, where);
        g.archetype.drought_radius_factor = get_or<double>(a, "drought_radius_factor", 1.0, where);
        g.genotypes = require<std::vector<std::string>>(a, "genotypes", where);
        cfg.groups.push_back(std::move(g));
    }
    cfg.validate();
    return cfg;
}

SynthConfig default_config()
{
    SynthConfig cfg;
    cfg.seed = 20200426;
    cfg.replicates = 3;
    cfg.dats = {45};
    cfg.noise = {4.0, 0.08, 0.03};
    cfg.groups = {
        {{"spreading", 34.0, 4.0, 900.0, 150.0, 1.0, 0.7, 0.6},
         {"ANJALI", "BLACKGORA", "HEERA", "RASI"}},
        {{"compact", 18.0, 3.0, 450.0, 80.0, 0.9, 0.8, 0.85},
         {"DULAR", "PMK-2", "SERATOES"}},
        {{"erect", 24.0, 3.0, 650.0, 100.0, 1.3, 0.75, 0.75},
         {"ABHAYA X DAGADESI", "NAGINA 22", "KALINGA-1"}},
    };
    return cfg;
}

std::vector<PlantKey> enumerate_plants(const SynthConfig& cfg)
{
    std::vector<PlantKey> keys;
    for (const auto& g : cfg.groups) {
        for (const auto& genotype : g.genotypes) {
            for (auto t : {Treatment::control, Treatment::drought}) {
                for (int rep = 1; rep <= cfg.replicates; ++rep) {
                    for (int dat : cfg.dats) {
                        keys.push_back({genotype, g.archetype.name, t, rep, dat});
                    }
                }
            }
        }
    }
    return keys;
}

std::uint64_t plant_seed(const SynthConfig& cfg, std::size_t genotype_index, int replicate, int dat)
{
    return derive_seed(cfg.seed, {genotype_index, static_cast<std::uint64_t>(replicate),
                                  static_cast<std::uint64_t>(static_cast<std::int64_t>(dat))});
}

std::vector<GeneratedPlant> generate_plants(const SynthConfig& cfg)
{
    cfg.validate();
    std::vector<GeneratedPlant> plants;
    std::size_t genotype_index = 0;
    for (const auto& g : cfg.groups) {
        for (const auto& genotype : g.genotypes) {
            for (auto t : {Treatment::control, Treatment::drought}) {
                for (int rep = 1; rep <= cfg.replicates; ++rep) {
                    for (int dat : cfg.dats) {
                        auto plant = generate_plant(g.archetype, t, dat,
                                                    plant_seed(cfg, genotype_index, rep, dat), cfg.image,
                                                    cfg.noise);
                        const std::string id =
                            genotype + "-" + std::string(to_string(t)) + "-r" + std::to_string(rep);
                        for (auto* obs : {&plant.truth, &plant.detected}) {
                            obs->plant_id = id;
                            obs->genotype = genotype;
                            obs->replicate = rep;
                        }
                        plants.push_back(std::move(plant));
                    }
                }
            }
            ++genotype_index;
        }
    }
    return plants;
}

namespace {

void write_file(const fs::path& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path.string() + ": cannot open for writing");
    }
    out << body;
    out.flush();
    if (!out) {
        throw IoError(path.string() + ": write failed");
    }
}

}  // namespace

fs::path generate_dataset(const SynthConfig& cfg, const fs::path& out_dir)
{
    const auto plants = generate_plants(cfg);

    std::error_code ec;
    fs::create_directories(out_dir / "detections", ec);
    if (!ec) {
        fs::create_directories(out_dir / "truth", ec);
    }
    if (ec) {
        throw IoError(out_dir.string() + ": cannot create directory: " + ec.message());
    }

    ingest::Manifest manifest;
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const auto& p = plants[i];
        const auto name = ingest::detection_file_name(i, p.detected);
        const auto det_rel = fs::path("detections") / name;
        const auto gt_rel = fs::path("truth") / name;
        write_file(out_dir / det_rel, ingest::format_detection_file(p.detected.tips, cfg.image.width,
                                                                    cfg.image.height, cfg.tip_box_w,
                                                                    cfg.tip_box_h));
        write_file(out_dir / gt_rel, ingest::format_detection_file(p.truth.tips, cfg.image.width,
                                                                   cfg.image.height, cfg.tip_box_w,
                                                                   cfg.tip_box_h));
        ingest::ManifestRow row;
        row.plant_id = p.detected.plant_id;
        row.genotype = p.detected.genotype;
        row.treatment = p.detected.treatment;
        row.dat = p.detected.dat;
        row.replicate = p.detected.replicate;
        row.image_width = cfg.image.width;
        row.image_height = cfg.image.height;
        row.detection_path = det_rel.generic_string();
        row.ground_truth_path = gt_rel.generic_string();
        manifest.rows.push_back(std::move(row));
    }
    const auto manifest_path = out_dir / "manifest.csv";
    write_file(manifest_path, ingest::format_manifest(manifest));
    return manifest_path;
}

}  // namespace tiptrait::synth
