#include "tiptrait/ingest.hpp"

#include "tiptrait/text.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace tiptrait::ingest {

namespace fs = std::filesystem;

std::string format_warning(const Warning& w)
{
    return "WARN " + w.file + ":" + std::to_string(w.line) + ": " + w.message;
}

DetectionParse parse_detection_file(std::string_view text, int image_width, int image_height)
{
    if (image_width <= 0 || image_height <= 0) {
        throw InvalidArgument("image dimensions must be positive");
    }

    DetectionParse out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const auto line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        const auto tokens = text::split_whitespace(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() != 5 && tokens.size() != 6) {
            throw ParseError(line_no, "expected 5 or 6 fields, found " + std::to_string(tokens.size()));
        }

        TipDetection d;
        const auto cls = text::parse_integer(tokens[0]);
        if (!cls || *cls < 0 || *cls > std::numeric_limits<int>::max()) {
            throw ParseError(line_no, "class id '" + std::string(tokens[0]) +
                                          "' is not a non-negative integer");
        }
        d.class_id = static_cast<int>(*cls);

        double values[5] = {};
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const auto v = text::parse_double(tokens[i]);
            if (!v) {
                throw ParseError(line_no, "non-numeric field '" + std::string(tokens[i]) + "'");
            }
            values[i - 1] = *v;
        }
        d.cx = values[0];
        d.cy = values[1];
        d.w = values[2];
        d.h = values[3];
        if (d.w <= 0.0 || d.h <= 0.0) {
            throw ParseError(line_no, "box width and height must be positive");
        }
        if (tokens.size() == 6) {
            if (values[4] < 0.0 || values[4] > 1.0) {
                throw ParseError(line_no, "confidence outside [0,1]");
            }
            d.confidence = values[4];
        }

        auto clamp = [&](double& v, const char* name) {
            if (v < 0.0 || v > 1.0) {
                out.warnings.push_back({"", line_no,
                                        std::string(name) + " " + text::format_shortest(v) +
                                            " clamped to [0,1]"});
                v = v < 0.0 ? 0.0 : 1.0;
            }
        };
        clamp(d.cx, "cx");
        clamp(d.cy, "cy");

        out.detections.push_back(d);
    }
    return out;
}

TipPoint to_pixel(const TipDetection& d, int image_width, int image_height) noexcept
{
    return {d.cx * static_cast<double>(image_width), d.cy * static_cast<double>(image_height)};
}

double to_normalized(double pixel, int extent) noexcept
{
    const auto e = static_cast<double>(extent);
    const double guess = pixel / e;
    if (guess * e == pixel) {
        return guess;
    }
    double below = guess;
    double above = guess;
    for (int step = 0; step < 8; ++step) {
        below = std::nextafter(below, -std::numeric_limits<double>::infinity());
        if (below * e == pixel) {
            return below;
        }
        above = std::nextafter(above, std::numeric_limits<double>::infinity());
        if (above * e == pixel) {
            return above;
        }
    }
    return guess;
}

std::string format_detection_file(const std::vector<TipPoint>& tips, int image_width,
                                  int image_height, double box_w, double box_h, int class_id)
{
    std::string out;
    const auto w = text::format_shortest(box_w);
    const auto h = text::format_shortest(box_h);
    for (const auto& p : tips) {
        out += std::to_string(class_id);
        out += ' ';
        out += text::format_shortest(to_normalized(p.x, image_width));
        out += ' ';
        out += text::format_shortest(to_normalized(p.y, image_height));
        out += ' ';
        out += w;
        out += ' ';
        out += h;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

ManifestError::ManifestError(Kind kind, std::size_t row, std::string column,
                             const std::string& message)
    : Error("manifest row " + std::to_string(row) + (column.empty() ? "" : ", column '" + column + "'") +
            ": " + message),
      kind_(kind),
      row_(row),
      column_(std::move(column))
{
}

namespace {

int parse_int_field(const std::string& value, std::size_t row, const std::string& column)
{
    const auto v = text::parse_integer(text::trim(value));
    if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
        throw ManifestError(ManifestError::Kind::bad_integer, row, column,
                            "'" + value + "' is not an integer");
    }
    return static_cast<int>(*v);
}

}  // namespace

Manifest parse_manifest(std::string_view csv_text)
{
    const auto records = text::parse_csv(csv_text);
    if (records.empty()) {
        throw ManifestError(ManifestError::Kind::empty, 1, "", "missing header");
    }

    std::map<std::string, std::size_t> index;
    const auto& header = records.front();
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        index.emplace(std::string(text::trim(header.fields[i])), i);
    }
    for (auto required : kManifestColumns) {
        if (!index.contains(std::string(required))) {
            throw ManifestError(ManifestError::Kind::missing_column, header.line,
                                std::string(required), "required column missing");
        }
    }
    const auto gt_column = index.find("ground_truth_path");

    Manifest manifest;
    std::set<std::pair<std::string, int>> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row = rec.line;
        if (rec.fields.size() != header.fields.size()) {
            throw ManifestError(ManifestError::Kind::field_count, row, "",
                                "expected " + std::to_string(header.fields.size()) +
                                    " fields, found " + std::to_string(rec.fields.size()));
        }
        auto field = [&](std::string_view name) -> const std::string& {
            return rec.fields[index.at(std::string(name))];
        };

        ManifestRow m;
        m.plant_id = std::string(text::trim(field("plant_id")));
        if (m.plant_id.empty()) {
            throw ManifestError(ManifestError::Kind::bad_value, row, "plant_id", "empty plant_id");
        }
        m.genotype = std::string(text::trim(field("genotype")));
        if (m.genotype.empty()) {
            throw ManifestError(ManifestError::Kind::bad_value, row, "genotype", "empty genotype");
        }
        const auto treatment = parse_treatment(text::trim(field("treatment")));
        if (!treatment) {
            throw ManifestError(ManifestError::Kind::unknown_treatment, row, "treatment",
                                "unknown treatment '" + field("treatment") + "'");
        }
        m.treatment = *treatment;
        m.dat = parse_int_field(field("dat"), row, "dat");
        m.replicate = parse_int_field(field("replicate"), row, "replicate");
        if (m.replicate <= 0) {
            throw ManifestError(ManifestError::Kind::bad_value, row, "replicate",
                                "replicate must be positive");
        }
        m.image_width = parse_int_field(field("image_width"), row, "image_width");
        m.image_height = parse_int_field(field("image_height"), row, "image_height");
        if (m.image_width <= 0) {
            throw ManifestError(ManifestError::Kind::bad_value, row, "image_width",
                                "image_width must be positive");
        }
        if (m.image_height <= 0) {
            throw ManifestError(ManifestError::Kind::bad_value, row, "image_height",
                                "image_height must be positive");
        }
        m.detection_path = std::string(text::trim(field("detection_path")));
        if (m.detection_path.empty()) {
            throw ManifestError(ManifestError::Kind::bad_value, row, "detection_path",
                                "empty detection_path");
        }
        if (gt_column != index.end()) {
            auto gt = std::string(text::trim(rec.fields[gt_column->second]));
            if (!gt.empty()) {
                m.ground_truth_path = std::move(gt);
            }
        }

        if (!seen.emplace(m.plant_id, m.dat).second) {
            throw ManifestError(ManifestError::Kind::duplicate_key, row, "plant_id",
                                "duplicate (plant_id, dat) = (" + m.plant_id + ", " +
                                    std::to_string(m.dat) + ")");
        }
        manifest.rows.push_back(std::move(m));
    }
    return manifest;
}

std::string format_manifest(const Manifest& manifest)
{
    bool with_gt = false;
    for (const auto& r : manifest.rows) {
        with_gt = with_gt || r.ground_truth_path.has_value();
    }

    std::vector<std::string> header(std::begin(kManifestColumns), std::end(kManifestColumns));
    if (with_gt) {
        header.emplace_back("ground_truth_path");
    }
    std::string out = text::csv_line(header);
    for (const auto& r : manifest.rows) {
        std::vector<std::string> fields = {
            r.plant_id,
            r.genotype,
            std::string(to_string(r.treatment)),
            std::to_string(r.dat),
            std::to_string(r.replicate),
            std::to_string(r.image_width),
            std::to_string(r.image_height),
            r.detection_path,
        };
        if (with_gt) {
            fields.push_back(r.ground_truth_path.value_or(""));
        }
        out += text::csv_line(fields);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string read_text_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LoadError(path, "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw LoadError(path, "read failed");
    }
    return buf.str();
}

namespace {

fs::path resolve(const fs::path& base_dir, const std::string& relative)
{
    fs::path p(relative);
    return p.is_absolute() ? p : base_dir / p;
}

std::vector<TipPoint> load_tips(const fs::path& path, int width, int height,
                                const LoadOptions& options, std::vector<Warning>& warnings)
{
    const auto body = read_text_file(path);
    DetectionParse parsed;
    try {
        parsed = parse_detection_file(body, width, height);
    } catch (const ParseError& e) {
        throw LoadError(path, e.what());
    }
    for (auto& w : parsed.warnings) {
        w.file = path.string();
        warnings.push_back(std::move(w));
    }
    std::vector<TipPoint> tips;
    tips.reserve(parsed.detections.size());
    for (const auto& d : parsed.detections) {
        if (options.min_confidence && d.confidence && *d.confidence < *options.min_confidence) {
            continue;
        }
        tips.push_back(to_pixel(d, width, height));
    }
    return tips;
}

Manifest load_manifest(const fs::path& manifest_path)
{
    const auto text = read_text_file(manifest_path);
    try {
        return parse_manifest(text);
    } catch (const ParseError& e) {
        throw LoadError(manifest_path, e.what());
    } catch (const ManifestError& e) {
        throw LoadError(manifest_path, e.what());
    }
}

PlantObservation observation_from(const ManifestRow& row)
{
    PlantObservation obs;
    obs.plant_id = row.plant_id;
    obs.genotype = row.genotype;
    obs.treatment = row.treatment;
    obs.dat = row.dat;
    obs.replicate = row.replicate;
    obs.image_width = row.image_width;
    obs.image_height = row.image_height;
    return obs;
}

}  // namespace

Dataset load_dataset(const fs::path& manifest_path, const LoadOptions& options)
{
    const auto manifest = load_manifest(manifest_path);
    const auto base = manifest_path.parent_path();

    Dataset ds;
    ds.observations.reserve(manifest.rows.size());
    for (const auto& row : manifest.rows) {
        auto obs = observation_from(row);
        obs.tips = load_tips(resolve(base, row.detection_path), row.image_width, row.image_height,
                             options, ds.warnings);
        ds.observations.push_back(std::move(obs));
    }
    return ds;
}

std::vector<EvalPair> load_eval_pairs(const fs::path& manifest_path, const LoadOptions& options)
{
    const auto manifest = load_manifest(manifest_path);
    const auto base = manifest_path.parent_path();

    std::vector<EvalPair> pairs;
    std::vector<Warning> ignored;
    for (const auto& row : manifest.rows) {
        if (!row.ground_truth_path) {
            continue;
        }
        EvalPair pair;
        pair.predicted = observation_from(row);
        pair.predicted.tips = load_tips(resolve(base, row.detection_path), row.image_width,
                                        row.image_height, options, ignored);
        pair.truth = load_tips(resolve(base, *row.ground_truth_path), row.image_width,
                               row.image_height, {}, ignored);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::string detection_file_name(std::size_t index, const PlantObservation& obs)
{
    std::string safe;
    for (char c : obs.plant_id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        safe.push_back(ok ? c : '_');
    }
    std::string idx = std::to_string(index);
    if (idx.size() < 4) {
        idx.insert(0, 4 - idx.size(), '0');
    }
    return idx + "_" + safe + "_dat" + std::to_string(obs.dat) + ".txt";
}

namespace {

void write_file(const fs::path& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw LoadError(path, "cannot open for writing");
    }
    out << body;
    out.flush();
    if (!out) {
        throw LoadError(path, "write failed");
    }
}

}  // namespace

fs::path write_dataset(const std::vector<PlantObservation>& observations, const fs::path& out_dir)
{
    std::error_code ec;
    fs::create_directories(out_dir / "detections", ec);
    if (ec) {
        throw LoadError(out_dir, "cannot create directory: " + ec.message());
    }

    Manifest manifest;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& obs = observations[i];
        const auto rel = fs::path("detections") / detection_file_name(i, obs);
        write_file(out_dir / rel, format_detection_file(obs.tips, obs.image_width, obs.image_height));

        ManifestRow row;
        row.plant_id = obs.plant_id;
        row.genotype = obs.genotype;
        row.treatment = obs.treatment;
        row.dat = obs.dat;
        row.replicate = obs.replicate;
        row.image_width = obs.image_width;
        row.image_height = obs.image_height;
        row.detection_path = rel.generic_string();
        manifest.rows.push_back(std::move(row));
    }
    const auto manifest_path = out_dir / "manifest.csv";
    write_file(manifest_path, format_manifest(manifest));
    return manifest_path;
}

}  // namespace tiptrait::ingest
