#include "tiptrait/evaluate.hpp"
#include "tiptrait/ingest.hpp"
#include "tiptrait/synth.hpp"
#include "tiptrait/traits.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <random>

using namespace tiptrait;
using namespace tiptrait::synth;

namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> tree_bytes(const fs::path& root)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_bytes(e.path());
    }
    return out;
}

}  // namespace

TEST_CASE("identity drought factors make twins identical")
{
    const Archetype arch{"flat", 20.0, 3.0, 500.0, 90.0, 1.2, 1.0, 1.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = generate_plant(arch, Treatment::control, 45, seed);
        const auto d = generate_plant(arch, Treatment::drought, 45, seed);
        CHECK(c.truth.tips == d.truth.tips);
        CHECK(c.detected.tips == d.detected.tips);
    }
}

TEST_CASE("zero noise makes detections equal the truth")
{
    const Archetype arch{"a", 25.0, 5.0, 700.0, 100.0, 0.8, 0.7, 0.6};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (auto t : {Treatment::control, Treatment::drought}) {
            const auto p = generate_plant(arch, t, 40, seed);
            CHECK(p.detected.tips == p.truth.tips);
            CHECK(p.truth.tips.size() >= 1);
        }
    }
}

TEST_CASE("generated tips lie in the image and survive a file round trip exactly")
{
    const Archetype big{"big", 30.0, 5.0, 5000.0, 1000.0, 1.0, 1.0, 1.0};
    const ImageSize image{1200, 900};
    const DetectionNoise noise{5.0, 0.1, 0.1};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = generate_plant(big, Treatment::control, 45, seed, image, noise);
        for (const auto* tips : {&p.truth.tips, &p.detected.tips}) {
            const auto text = ingest::format_detection_file(*tips, image.width, image.height);
            const auto parsed = ingest::parse_detection_file(text, image.width, image.height);
            CHECK(parsed.warnings.empty());
            REQUIRE(parsed.detections.size() == tips->size());
            for (std::size_t i = 0; i < tips->size(); ++i) {
                const auto& t = (*tips)[i];
                CHECK(t.x >= 0.0);
                CHECK(t.x <= image.width);
                CHECK(t.y >= 0.0);
                CHECK(t.y <= image.height);
                CHECK(ingest::to_pixel(parsed.detections[i], image.width, image.height) == t);
            }
        }
    }
}

TEST_CASE("noise: drops and spurious tips change counts in the expected direction")
{
    const Archetype arch{"a", 40.0, 0.0, 600.0, 50.0, 1.0, 1.0, 1.0};
    std::size_t truth = 0, detected_drop = 0, detected_spur = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto drop = generate_plant(arch, Treatment::control, 45, seed, {}, {0.0, 0.3, 0.0});
        const auto spur = generate_plant(arch, Treatment::control, 45, seed, {}, {0.0, 0.0, 0.3});
        truth += drop.truth.tips.size();
        detected_drop += drop.detected.tips.size();
        detected_spur += spur.detected.tips.size();
        CHECK(drop.truth.tips == spur.truth.tips);
    }
    CHECK(std::abs(double(detected_drop) / truth - 0.7) < 0.05);
    CHECK(std::abs(double(detected_spur) / truth - 1.3) < 0.05);
}

TEST_CASE("drought Monte-Carlo: leaf count and hull area shrink by the factors")
{
    const Archetype arch{"spreading", 30.0, 4.0, 800.0, 120.0, 1.0, 0.7, 0.6};
    double leaves_c = 0, leaves_d = 0, area_c = 0, area_d = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = traits::compute_traits(generate_plant(arch, Treatment::control, 45, seed).truth);
        const auto d = traits::compute_traits(generate_plant(arch, Treatment::drought, 45, seed).truth);
        leaves_c += c.n_leaves;
        leaves_d += d.n_leaves;
        area_c += c.hull_area;
        area_d += d.hull_area;
    }
    CHECK(leaves_d / leaves_c == doctest::Approx(0.7).epsilon(0.02));
    CHECK(area_d < area_c);
    // 0.6^2 = 0.36 from the radius scaling, slightly less because the drought
    // plant keeps only 70% of the tips.
    const double ratio = area_d / area_c;
    CHECK(ratio > 0.30);
    CHECK(ratio < 0.37);
}

TEST_CASE("archetype and config validation")
{
    CHECK_THROWS_AS((Archetype{"x", 0.0, 1.0, 10.0, 1.0, 1.0, 1.0, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((Archetype{"x", 5.0, 1.0, 10.0, 1.0, 1.0, 0.0, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((Archetype{"x", 5.0, 1.0, 10.0, 1.0, 1.0, 1.0, 1.5}.validate()), InvalidArgument);
    CHECK_THROWS_AS((Archetype{"x", 5.0, 1.0, 10.0, 1.0, -1.0, 1.0, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((DetectionNoise{0.0, 1.0, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((DetectionNoise{-1.0, 0.0, 0.0}.validate()), InvalidArgument);

    auto cfg = default_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.groups[1].genotypes.push_back("ANJALI");
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("config parsing")
{
    const auto cfg = parse_synth_config(R"({
        "seed": 7, "replicates": 2, "dat": [35, 45], "image_width": 2000, "image_height": 1500,
        "tip_box": {"w": 0.02, "h": 0.03},
        "noise": {"jitter_sd": 2.5, "drop_rate": 0.1, "spurious_rate": 0.05},
        "archetypes": [
            {"name": "tall", "leaf_count_mean": 20, "leaf_count_sd": 2, "radius_mean": 400, "radius_sd": 40,
             "anisotropy": 1.1, "drought_leaf_factor": 0.8, "drought_radius_factor": 0.7,
             "genotypes": ["A", "B"]}
        ]})");
    CHECK(cfg.seed == 7);
    CHECK(cfg.dats == std::vector<int>{35, 45});
    CHECK(cfg.image.width == 2000);
    CHECK(cfg.tip_box_h == 0.03);
    CHECK(cfg.noise.drop_rate == 0.1);
    REQUIRE(cfg.groups.size() == 1);
    CHECK(cfg.groups[0].archetype.anisotropy == 1.1);
    CHECK(cfg.groups[0].genotypes == std::vector<std::string>{"A", "B"});
    CHECK(enumerate_plants(cfg).size() == 2 * 2 * 2 * 2);

    CHECK_THROWS_AS(parse_synth_config("{"), InvalidArgument);
    CHECK_THROWS_AS(parse_synth_config(R"({"archetypes": []})"), InvalidArgument);
    CHECK_THROWS_AS(parse_synth_config(R"({"bogus": 1, "archetypes": []})"), InvalidArgument);
    CHECK_THROWS_AS(parse_synth_config(
                        R"({"archetypes": [{"name": "a", "radius_mean": 1, "genotypes": ["x"]}]})"),
                    InvalidArgument);
    CHECK_THROWS_AS(parse_synth_config(
                        R"({"replicates": "three", "archetypes": [{"name": "a", "leaf_count_mean": 3, "radius_mean": 1, "genotypes": ["x"]}]})"),
                    InvalidArgument);
}

TEST_CASE("generate_dataset: counts, determinism and ingest round trip")
{
    const auto cfg = default_config();
    TempDir a, b;
    const auto manifest = generate_dataset(cfg, a.path());
    generate_dataset(cfg, b.path());

    CHECK(tree_bytes(a.path()) == tree_bytes(b.path()));

    const auto m = ingest::parse_manifest(read_bytes(manifest));
    CHECK(m.rows.size() == 60);

    const auto ds = ingest::load_dataset(manifest);
    CHECK(ds.warnings.empty());
    REQUIRE(ds.observations.size() == 60);
    const auto plants = generate_plants(cfg);
    for (std::size_t i = 0; i < plants.size(); ++i) {
        CHECK(ds.observations[i] == plants[i].detected);
    }

    const auto pairs = ingest::load_eval_pairs(manifest);
    REQUIRE(pairs.size() == 60);
    CHECK(pairs[5].truth == plants[5].truth.tips);

    auto other = cfg;
    other.seed += 1;
    TempDir c;
    generate_dataset(other, c.path());
    CHECK(tree_bytes(c.path()) != tree_bytes(a.path()));
}

TEST_CASE("match_tips examples")
{
    const std::vector<TipPoint> truth{{0, 0}, {10, 0}, {20, 0}, {30, 0}};
    const auto same = eval::match_tips(truth, truth, 1.0);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f1 == 1.0);
    CHECK(same.matches.size() == 4);

    const auto none = eval::match_tips(std::vector<TipPoint>{}, truth, 1.0);
    CHECK(none.precision == 1.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);
    CHECK(none.false_negatives == 4);

    const auto empty = eval::match_tips(std::vector<TipPoint>{}, std::vector<TipPoint>{}, 1.0);
    CHECK(empty.precision == 1.0);
    CHECK(empty.recall == 1.0);

    CHECK_THROWS_AS(eval::match_tips(truth, truth, 0.0), InvalidArgument);
}

TEST_CASE("dropping 10% of the truth gives recall 0.9 and precision 1")
{
    std::vector<TipPoint> truth;
    for (int i = 0; i < 50; ++i) truth.push_back({double(i * 37 % 400), double(i * 53 % 300)});
    std::vector<TipPoint> predicted;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (i % 10 != 3) predicted.push_back(truth[i]);
    }
    const auto r = eval::match_tips(predicted, truth, 1.0);
    CHECK(r.recall == 0.9);
    CHECK(r.precision == 1.0);
    CHECK(r.true_positives == 45);
    CHECK(r.false_negatives == 5);
}

TEST_CASE("greedy matching takes the closest pair first and is one-to-one")
{
    // One truth point, two predictions; the nearer wins.
    const auto r = eval::match_tips(std::vector<TipPoint>{{3, 0}, {1, 0}}, std::vector<TipPoint>{{0, 0}}, 5.0);
    REQUIRE(r.matches.size() == 1);
    CHECK(r.matches[0].predicted == 1);
    CHECK(r.matches[0].distance == 1.0);
    CHECK(r.false_positives == 1);
    CHECK(r.precision == 0.5);
    CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("matching properties: swap symmetry and radius monotonicity")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TipPoint> a(5 + trial % 20), b(3 + trial % 17);
        for (auto& p : a) p = {u(gen), u(gen)};
        for (auto& p : b) p = {u(gen), u(gen)};
        const auto ab = eval::match_tips(a, b, 15.0);
        const auto ba = eval::match_tips(b, a, 15.0);
        CHECK(ab.true_positives == ba.true_positives);
        CHECK(ab.precision == ba.recall);
        CHECK(ab.recall == ba.precision);

        double previous = 2.0;
        for (double radius : {80.0, 40.0, 20.0, 10.0, 5.0, 1.0}) {
            const auto r = eval::match_tips(a, b, radius);
            CHECK(r.recall <= previous);
            previous = r.recall;
            std::vector<bool> used(b.size(), false);
            for (const auto& m : r.matches) {
                CHECK_FALSE(used[m.truth]);
                used[m.truth] = true;
                CHECK(m.distance <= radius);
            }
        }
    }
}

TEST_CASE("combine and default radius")
{
    EvalReport a, b;
    a.true_positives = 9;
    a.false_negatives = 1;
    b.true_positives = 1;
    b.false_positives = 1;
    const std::vector<EvalReport> both{a, b};
    const auto c = eval::combine(both);
    CHECK(c.true_positives == 10);
    CHECK(c.precision == doctest::Approx(10.0 / 11.0));
    CHECK(c.recall == doctest::Approx(10.0 / 11.0));
    CHECK(eval::default_match_radius(3, 4) == doctest::Approx(0.1));
}
