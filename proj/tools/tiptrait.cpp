// tiptrait: leaf-tip detections -> plant traits -> Ward dendrograms.
//
// Exit codes: 0 success, 1 data or runtime error, 2 usage error.

#include "tiptrait/clustering.hpp"
#include "tiptrait/evaluate.hpp"
#include "tiptrait/features.hpp"
#include "tiptrait/ingest.hpp"
#include "tiptrait/render.hpp"
#include "tiptrait/synth.hpp"
#include "tiptrait/text.hpp"
#include "tiptrait/traits.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tiptrait;

namespace {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level log_level()
{
    static const Level level = [] {
        const char* env = std::getenv("TIPTRAIT_LOG");
        const std::string v = env ? env : "warn";
        if (v == "error") return Level::error;
        if (v == "info") return Level::info;
        if (v == "debug") return Level::debug;
        return Level::warn;
    }();
    return level;
}

void log(Level level, const std::string& message)
{
    if (level > log_level()) {
        return;
    }
    static const char* names[] = {"ERROR", "WARN", "INFO", "DEBUG"};
    std::cerr << names[static_cast<int>(level)] << ' ' << message << '\n';
}

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Files are staged next to their destinations and only renamed into place
// once every output has been written.
class StagedOutput {
public:
    ~StagedOutput()
    {
        std::error_code ec;
        for (const auto& [tmp, _] : staged_) {
            fs::remove(tmp, ec);
        }
    }

    void add(const fs::path& dest, const std::string& body)
    {
        const auto parent = dest.parent_path();
        if (!parent.empty()) {
            std::error_code ec;
            fs::create_directories(parent, ec);
            if (ec) {
                throw DataError(parent.string() + ": cannot create directory: " + ec.message());
            }
        }
        auto tmp = dest;
        tmp += ".tmp-" + std::to_string(std::random_device{}());
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(dest.string() + ": cannot open for writing");
        }
        staged_.emplace_back(tmp, dest);
        out << body;
        out.close();
        if (!out) {
            throw DataError(dest.string() + ": write failed");
        }
    }

    void commit()
    {
        for (const auto& [tmp, dest] : staged_) {
            std::error_code ec;
            fs::rename(tmp, dest, ec);
            if (ec) {
                throw DataError(dest.string() + ": cannot move into place: " + ec.message());
            }
        }
        staged_.clear();
    }

private:
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

// ---------------------------------------------------------------------------

struct TraitsArgs {
    std::string manifest;
    std::string out;
    std::optional<double> min_confidence;
    double scale = 1.0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
};

int run_traits(const TraitsArgs& args)
{
    ingest::LoadOptions options;
    options.min_confidence = args.min_confidence;
    const auto dataset = ingest::load_dataset(args.manifest, options);
    for (const auto& w : dataset.warnings) {
        log(Level::warn, ingest::format_warning(w).substr(5));
    }
    const auto table = traits::traits_table(dataset.observations, args.jobs);
    log(Level::info, "computed traits for " + std::to_string(table.size()) + " observations");

    StagedOutput out;
    out.add(args.out, traits::format_traits_csv(table, args.scale));
    out.commit();
    return 0;
}

// ---------------------------------------------------------------------------

struct ClusterArgs {
    std::string traits;
    std::string features = "all";
    std::string treatments = "control,drought";
    bool no_standardize = false;
    std::size_t k = 1;
    std::string out_prefix;
    std::optional<int> dat_min;
    std::optional<int> dat_max;
    int svg_width = 800;
    int svg_height = 500;
    std::string orientation = "top";
    bool print_tree = false;
};

int run_cluster(const ClusterArgs& args)
{
    features::AggregationScheme scheme;
    try {
        scheme.features = features::parse_feature_list(args.features);
        scheme.treatments = features::parse_treatment_list(args.treatments);
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }
    if (args.dat_min || args.dat_max) {
        scheme.dat_range = std::pair{args.dat_min.value_or(std::numeric_limits<int>::min()),
                                     args.dat_max.value_or(std::numeric_limits<int>::max())};
    }

    std::vector<TraitRecord> records;
    try {
        records = traits::parse_traits_csv(ingest::read_text_file(args.traits));
    } catch (const ParseError& e) {
        throw DataError(args.traits + ": " + e.what());
    }

    const auto raw = features::aggregate(records, scheme);
    if (raw.rows() < 2) {
        throw DataError("need at least 2 genotypes to cluster, found " + std::to_string(raw.rows()));
    }
    if (args.k > raw.rows()) {
        throw DataError("--k " + std::to_string(args.k) + " exceeds the number of genotypes (" +
                        std::to_string(raw.rows()) + ")");
    }
    const auto matrix = args.no_standardize ? raw : features::standardize(raw);
    const auto merges = clustering::ward_linkage(clustering::distance_matrix(matrix));
    const auto labels = clustering::cut_tree(merges, args.k);
    const auto& names = matrix.row_labels();

    json doc;
    doc["labels"] = names;
    doc["features"] = matrix.column_labels();
    doc["standardized"] = matrix.standardized();
    doc["linkage"] = "ward";
    doc["height"] = "ward_distance";
    doc["merges"] = json::array();
    for (const auto& m : merges) {
        doc["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
    }

    std::string label_csv = text::csv_line({"genotype", "cluster"});
    for (std::size_t i = 0; i < names.size(); ++i) {
        label_csv += text::csv_line({names[i], std::to_string(labels[i])});
    }

    render::SvgOptions svg;
    svg.width = args.svg_width;
    svg.height = args.svg_height;
    svg.orientation = args.orientation == "left" ? render::Orientation::left : render::Orientation::top;

    const std::string prefix = args.out_prefix;
    StagedOutput out;
    out.add(prefix + ".merges.json", doc.dump(2) + "\n");
    out.add(prefix + ".newick", render::to_newick(merges, names) + "\n");
    out.add(prefix + ".svg", render::render_svg(merges, names, svg));
    out.add(prefix + ".labels.csv", label_csv);
    out.add(prefix + ".features.csv", features::format_feature_csv(matrix));
    out.commit();

    if (args.print_tree) {
        std::cout << render::render_ascii(merges, names);
    }
    log(Level::info, "clustered " + std::to_string(names.size()) + " genotypes on " +
                         std::to_string(matrix.cols()) + " features");
    return 0;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string config;
    std::string out;
};

int run_synth(const SynthArgs& args)
{
    synth::SynthConfig cfg = synth::default_config();
    if (!args.config.empty()) {
        try {
            cfg = synth::parse_synth_config(ingest::read_text_file(args.config));
        } catch (const InvalidArgument& e) {
            throw DataError(args.config + ": " + e.what());
        }
    }

    // Generate into a scratch directory first so a failure leaves nothing
    // behind, then move each file into the requested tree.
    const fs::path out_dir = args.out;
    const fs::path scratch = fs::path(out_dir.string() + ".tmp-" + std::to_string(std::random_device{}()));
    struct Cleanup {
        fs::path dir;
        ~Cleanup()
        {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{scratch};

    synth::generate_dataset(cfg, scratch);

    StagedOutput out;
    for (const auto& entry : fs::recursive_directory_iterator(scratch)) {
        if (entry.is_regular_file()) {
            out.add(out_dir / fs::relative(entry.path(), scratch), ingest::read_text_file(entry.path()));
        }
    }
    out.commit();
    log(Level::info, "wrote " + (out_dir / "manifest.csv").string());
    return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string manifest;
    std::optional<double> radius;
    std::optional<double> min_confidence;
};

json report_json(const EvalReport& r, bool with_matches)
{
    json j = {
        {"true_positives", r.true_positives},
        {"false_positives", r.false_positives},
        {"false_negatives", r.false_negatives},
        {"precision", r.precision},
        {"recall", r.recall},
        {"f1", r.f1},
    };
    if (with_matches) {
        j["matches"] = json::array();
        for (const auto& m : r.matches) {
            j["matches"].push_back({{"predicted", m.predicted}, {"truth", m.truth}, {"distance_px", m.distance}});
        }
    }
    return j;
}

int run_eval(const EvalArgs& args)
{
    if (args.radius && !(*args.radius > 0.0)) {
        std::cerr << "usage error: --radius must be positive\n";
        return 2;
    }
    ingest::LoadOptions options;
    options.min_confidence = args.min_confidence;
    const auto pairs = ingest::load_eval_pairs(args.manifest, options);
    if (pairs.empty()) {
        throw DataError(args.manifest + ": no rows carry a ground_truth_path");
    }

    json doc;
    doc["plants"] = json::array();
    std::vector<EvalReport> reports;
    for (const auto& p : pairs) {
        const double radius = args.radius.value_or(
            eval::default_match_radius(p.predicted.image_width, p.predicted.image_height));
        auto report = eval::match_tips(p.predicted.tips, p.truth, radius);
        auto j = report_json(report, true);
        j["plant_id"] = p.predicted.plant_id;
        j["genotype"] = p.predicted.genotype;
        j["treatment"] = std::string(to_string(p.predicted.treatment));
        j["dat"] = p.predicted.dat;
        j["radius_px"] = radius;
        doc["plants"].push_back(std::move(j));
        reports.push_back(std::move(report));
    }
    doc["aggregate"] = report_json(eval::combine(reports), false);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tiptrait - plant traits from leaf-tip detections and Ward clustering of genotypes"};
    app.require_subcommand(1);

    TraitsArgs traits_args;
    auto* traits_cmd = app.add_subcommand("traits", "Compute per-plant traits from a manifest of detection files");
    traits_cmd->add_option("--manifest", traits_args.manifest, "Manifest CSV")->required();
    traits_cmd->add_option("--out", traits_args.out, "Traits CSV to write")->required();
    traits_cmd->add_option("--min-confidence", traits_args.min_confidence,
                           "Skip detections below this confidence (default: keep all)")
        ->check(CLI::Range(0.0, 1.0));
    traits_cmd->add_option("--scale", traits_args.scale, "Millimetres per pixel applied to the written values")
        ->check(CLI::PositiveNumber);
    traits_cmd->add_option("--jobs", traits_args.jobs, "Worker threads (default: logical CPUs)")
        ->check(CLI::Range(1u, 1024u));

    ClusterArgs cluster_args;
    auto* cluster_cmd = app.add_subcommand("cluster", "Ward-cluster genotypes from a traits CSV");
    cluster_cmd->add_option("--traits", cluster_args.traits, "Traits CSV")->required();
    cluster_cmd->add_option("--features", cluster_args.features,
                            "'all' or comma list of n_leaves,hull_area,leaves_per_hull,h_spread,v_spread")
        ->capture_default_str();
    cluster_cmd->add_option("--treatments", cluster_args.treatments, "'all' or comma list of control,drought")
        ->capture_default_str();
    cluster_cmd->add_flag("--no-standardize", cluster_args.no_standardize, "Cluster raw feature means");
    cluster_cmd->add_option("--k", cluster_args.k, "Number of flat clusters to cut")->required()->check(
        CLI::PositiveNumber);
    cluster_cmd->add_option("--out-prefix", cluster_args.out_prefix,
                            "Writes <prefix>.merges.json/.newick/.svg/.labels.csv/.features.csv")
        ->required();
    cluster_cmd->add_option("--dat-min", cluster_args.dat_min, "Earliest day after transplanting to include");
    cluster_cmd->add_option("--dat-max", cluster_args.dat_max, "Latest day after transplanting to include");
    cluster_cmd->add_option("--svg-width", cluster_args.svg_width, "SVG canvas width (px)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster_cmd->add_option("--svg-height", cluster_args.svg_height, "SVG canvas height (px)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster_cmd->add_option("--orientation", cluster_args.orientation, "Dendrogram orientation: top or left")
        ->check(CLI::IsMember({"top", "left"}))
        ->capture_default_str();
    cluster_cmd->add_flag("--print-tree", cluster_args.print_tree, "Also print an ASCII dendrogram to stdout");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset (detections, truth, manifest)");
    synth_cmd->add_option("--config", synth_args.config, "JSON config (default: built-in ten-genotype setup)");
    synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Match detections against ground truth and report precision/recall");
    eval_cmd->add_option("--manifest", eval_args.manifest, "Manifest CSV with ground_truth_path")->required();
    eval_cmd->add_option("--radius", eval_args.radius, "Match radius in px (default: 2% of image diagonal)");
    eval_cmd->add_option("--min-confidence", eval_args.min_confidence, "Skip detections below this confidence")
        ->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*traits_cmd) {
            return run_traits(traits_args);
        }
        if (*cluster_cmd) {
            return run_cluster(cluster_args);
        }
        if (*synth_cmd) {
            return run_synth(synth_args);
        }
        if (*eval_cmd) {
            return run_eval(eval_args);
        }
    } catch (const std::exception& e) {
        log(Level::error, e.what());
        return 1;
    }
    return 2;
}
