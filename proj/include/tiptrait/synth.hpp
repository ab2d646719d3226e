#pragma once

#include "tiptrait/core.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tiptrait::synth {

// A family of genotypes sharing plant architecture. Under drought the leaf
// count and tip radii shrink by the two factors, mimicking leaf rolling.
struct Archetype {
    std::string name;
    double leaf_count_mean = 20.0;
    double leaf_count_sd = 3.0;
    double radius_mean = 600.0;  // px
    double radius_sd = 120.0;    // px
    double anisotropy = 1.0;     // y-extent / x-extent
    double drought_leaf_factor = 1.0;
    double drought_radius_factor = 1.0;

    // Throws InvalidArgument when a field is out of range.
    void validate() const;
};

struct DetectionNoise {
    double jitter_sd = 0.0;      // px, per axis
    double drop_rate = 0.0;      // chance each true tip is missed
    double spurious_rate = 0.0;  // chance each true tip spawns a false one

    void validate() const;
};

struct ImageSize {
    int width = 6576;
    int height = 4384;
};

struct GeneratedPlant {
    PlantObservation truth;
    PlantObservation detected;
};

// Draws one plant. The random stream consumed is independent of the
// treatment, so a control plant and its drought twin generated from the same
// seed share leaf angles and radii: the drought plant keeps the first
// round(n * leaf_factor) tips (at least one) with radii scaled by
// radius_factor. Coordinates are clamped to the image and snapped so that
// they survive a detection-file round trip exactly.
GeneratedPlant generate_plant(const Archetype& arch, Treatment treatment, int dat, std::uint64_t seed,
                              const ImageSize& image = {}, const DetectionNoise& noise = {});

struct ArchetypeGroup {
    Archetype archetype;
    std::vector<std::string> genotypes;
};

struct SynthConfig {
    std::vector<ArchetypeGroup> groups;
    int replicates = 3;
    std::vector<int> dats{45};
    ImageSize image;
    std::uint64_t seed = 1;
    double tip_box_w = 0.01;
    double tip_box_h = 0.01;
    DetectionNoise noise;

    void validate() const;
};

// Reads the JSON configuration format documented in docs/synth-config.md.
// Throws InvalidArgument with the offending key on bad input.
SynthConfig parse_synth_config(std::string_view json_text);

// Three architectures over the ten genotypes named in the original study.
SynthConfig default_config();

struct PlantKey {
    std::string genotype;
    std::string archetype;
    Treatment treatment = Treatment::control;
    int replicate = 1;
    int dat = 0;
};

// Every plant the config describes, in generation order (group, genotype,
// treatment, replicate, dat).
std::vector<PlantKey> enumerate_plants(const SynthConfig& cfg);

// Seed for one plant; the treatment is left out so twins pair up.
std::uint64_t plant_seed(const SynthConfig& cfg, std::size_t genotype_index, int replicate, int dat);

// Generates all plants in memory, in enumerate_plants order.
std::vector<GeneratedPlant> generate_plants(const SynthConfig& cfg);

// Writes detections/, truth/ and manifest.csv (with ground_truth_path) under
// out_dir and returns the manifest path. Output is a pure function of cfg.
std::filesystem::path generate_dataset(const SynthConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace tiptrait::synth
