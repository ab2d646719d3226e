#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tiptrait {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed detection text. line is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class Treatment { control, drought };

std::string_view to_string(Treatment t) noexcept;
// Case-insensitive; returns nullopt for anything but "control"/"drought".
std::optional<Treatment> parse_treatment(std::string_view text) noexcept;

// One normalized box from a detector run. Coordinates are fractions of the
// image extent.
struct TipDetection {
    int class_id = 0;
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
    std::optional<double> confidence;

    friend bool operator==(const TipDetection&, const TipDetection&) = default;
};

// Pixel-space point. Raster convention: origin top-left, y grows downward.
struct TipPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const TipPoint&, const TipPoint&) = default;
    friend auto operator<=>(const TipPoint&, const TipPoint&) = default;
};

struct PlantObservation {
    std::string plant_id;
    std::string genotype;
    Treatment treatment = Treatment::control;
    int dat = 0;
    int replicate = 1;
    int image_width = 0;
    int image_height = 0;
    std::vector<TipPoint> tips;

    friend bool operator==(const PlantObservation&, const PlantObservation&) = default;
};

// Counter-clockwise in the y-up plane (i.e. after flipping raster y).
struct ConvexHull {
    std::vector<TipPoint> vertices;
    bool degenerate = true;

    friend bool operator==(const ConvexHull&, const ConvexHull&) = default;
};

// Hull areas below this are treated as zero when forming leaves_per_hull.
inline constexpr double kMinHullArea = 1e-9;

struct TraitRecord {
    std::string plant_id;
    std::string genotype;
    Treatment treatment = Treatment::control;
    int dat = 0;
    std::size_t n_leaves = 0;
    double hull_area = 0.0;                 // px^2
    std::optional<double> leaves_per_hull;  // per px^2
    double h_spread = 0.0;                  // px
    double v_spread = 0.0;                  // px

    friend bool operator==(const TraitRecord&, const TraitRecord&) = default;
};

// Genotypes x named features, row-major.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> row_labels, std::vector<std::string> column_labels,
                  std::vector<double> values, bool standardized = false);

    std::size_t rows() const noexcept { return row_labels_.size(); }
    std::size_t cols() const noexcept { return column_labels_.size(); }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& column_labels() const noexcept { return column_labels_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool standardized() const noexcept { return standardized_; }

    std::vector<double> row(std::size_t r) const;
    std::vector<double> column(std::size_t c) const;

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

private:
    std::vector<std::string> row_labels_;
    std::vector<std::string> column_labels_;
    std::vector<double> values_;
    bool standardized_ = false;
};

// One agglomeration. Cluster ids follow the usual convention: original rows
// are 0..n-1 and the cluster created by step s gets id n+s.
struct MergeStep {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

struct TipMatch {
    std::size_t predicted = 0;
    std::size_t truth = 0;
    double distance = 0.0;

    friend bool operator==(const TipMatch&, const TipMatch&) = default;
};

struct EvalReport {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    std::vector<TipMatch> matches;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Fills precision/recall/f1 from the counts; 0/0 is taken as 1.
void finalize_rates(EvalReport& report) noexcept;

}  // namespace tiptrait
