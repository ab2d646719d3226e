#pragma once

#include "tiptrait/core.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tiptrait::ingest {

struct Warning {
    std::string file;  // empty when parsing in-memory text
    std::size_t line = 0;
    std::string message;
};

// "WARN <file>:<line>: <message>"
std::string format_warning(const Warning& w);

struct DetectionParse {
    std::vector<TipDetection> detections;
    std::vector<Warning> warnings;
};

// Parses "class cx cy w h [confidence]" lines. The image size is accepted for
// symmetry with the file format's contract but coordinates stay normalized.
// Throws ParseError (with 1-based line) on malformed input.
DetectionParse parse_detection_file(std::string_view text, int image_width, int image_height);

TipPoint to_pixel(const TipDetection& d, int image_width, int image_height) noexcept;

// The normalized coordinate that maps back exactly onto `pixel` under
// pixel = normalized * extent. Used so that write -> load reproduces
// coordinates bit-for-bit.
double to_normalized(double pixel, int extent) noexcept;

// Serializes tips as "class cx cy w h" lines using the canonical normalized
// coordinate of each point.
std::string format_detection_file(const std::vector<TipPoint>& tips, int image_width,
                                  int image_height, double box_w = 0.01, double box_h = 0.01,
                                  int class_id = 0);

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

struct ManifestRow {
    std::string plant_id;
    std::string genotype;
    Treatment treatment = Treatment::control;
    int dat = 0;
    int replicate = 1;
    int image_width = 0;
    int image_height = 0;
    std::string detection_path;
    std::optional<std::string> ground_truth_path;

    friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

struct Manifest {
    std::vector<ManifestRow> rows;
};

class ManifestError : public Error {
public:
    enum class Kind {
        missing_column,
        duplicate_key,
        unknown_treatment,
        bad_integer,
        bad_value,
        field_count,
        empty,
    };

    // row is the 1-based CSV line (header = 1); column may be empty.
    ManifestError(Kind kind, std::size_t row, std::string column, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t row_;
    std::string column_;
};

inline constexpr std::string_view kManifestColumns[] = {
    "plant_id",    "genotype",     "treatment",      "dat",
    "replicate",   "image_width",  "image_height",   "detection_path",
};

Manifest parse_manifest(std::string_view csv_text);
std::string format_manifest(const Manifest& manifest);

// ---------------------------------------------------------------------------
// Dataset loading
// ---------------------------------------------------------------------------

struct LoadOptions {
    // Detections whose confidence is below this are skipped. Detections
    // without a confidence field are always kept.
    std::optional<double> min_confidence;
};

struct Dataset {
    std::vector<PlantObservation> observations;
    std::vector<Warning> warnings;
};

// Any failure while assembling a dataset; what() names the offending file.
class LoadError : public Error {
public:
    LoadError(std::filesystem::path path, const std::string& message)
        : Error(path.string() + ": " + message), path_(std::move(path)) {}

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

// Throws LoadError when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

// Paths inside the manifest are resolved relative to its directory. Any
// failure throws LoadError; nothing partial is returned.
Dataset load_dataset(const std::filesystem::path& manifest_path, const LoadOptions& options = {});

// Predicted and ground-truth tips for every manifest row that names a
// ground-truth file.
struct EvalPair {
    PlantObservation predicted;
    std::vector<TipPoint> truth;
};

std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& manifest_path,
                                      const LoadOptions& options = {});

// Writes observations as detection files under out_dir/detections plus
// out_dir/manifest.csv. Returns the manifest path.
std::filesystem::path write_dataset(const std::vector<PlantObservation>& observations,
                                    const std::filesystem::path& out_dir);

// "<index>_<sanitized plant_id>_dat<dat>.txt"; index keeps names collision-free.
std::string detection_file_name(std::size_t index, const PlantObservation& obs);

}  // namespace tiptrait::ingest
