#include "tiptrait/traits.hpp"

#include "tiptrait/synth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace tiptrait;
using namespace tiptrait::traits;

namespace {

PlantObservation plant(std::vector<TipPoint> tips, std::string id = "p")
{
    PlantObservation o;
    o.plant_id = std::move(id);
    o.genotype = "HEERA";
    o.dat = 45;
    o.image_width = 1000;
    o.image_height = 1000;
    o.tips = std::move(tips);
    return o;
}

}  // namespace

TEST_CASE("square of four tips")
{
    const auto r = compute_traits(plant({{0, 0}, {100, 0}, {100, 100}, {0, 100}}));
    CHECK(r.n_leaves == 4);
    CHECK(r.hull_area == 10000.0);
    REQUIRE(r.leaves_per_hull);
    CHECK(*r.leaves_per_hull == doctest::Approx(4e-4).epsilon(1e-15));
    CHECK(r.h_spread == 100.0);
    CHECK(r.v_spread == 100.0);
    CHECK(r.genotype == "HEERA");
    CHECK(r.dat == 45);
}

TEST_CASE("two tips: zero area, no ratio")
{
    const auto r = compute_traits(plant({{10, 10}, {40, 50}}));
    CHECK(r.n_leaves == 2);
    CHECK(r.hull_area == 0.0);
    CHECK_FALSE(r.leaves_per_hull);
    CHECK(r.h_spread == 30.0);
    CHECK(r.v_spread == 40.0);
}

TEST_CASE("zero tips: all-zero record")
{
    const auto r = compute_traits(plant({}));
    CHECK(r.n_leaves == 0);
    CHECK(r.hull_area == 0.0);
    CHECK_FALSE(r.leaves_per_hull);
    CHECK(r.h_spread == 0.0);
    CHECK(r.v_spread == 0.0);
}

TEST_CASE("duplicate tips count as leaves")
{
    const auto r = compute_traits(plant({{0, 0}, {0, 0}, {10, 0}, {0, 10}}));
    CHECK(r.n_leaves == 4);
    CHECK(r.hull_area == 50.0);
}

TEST_CASE("ratio identity and interior-tip removal")
{
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto tips = oracle::random_points(gen, 5 + trial % 20, 0.0, 2000.0);
        const auto r = compute_traits(plant(tips));
        REQUIRE(r.leaves_per_hull);
        CHECK(*r.leaves_per_hull * r.hull_area == doctest::Approx(double(r.n_leaves)).epsilon(1e-14));

        auto shuffled = tips;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        CHECK(compute_traits(plant(shuffled)) == r);

        // The mean of the points lies strictly inside a non-degenerate hull.
        TipPoint c{0, 0};
        for (const auto& p : tips) {
            c.x += p.x / tips.size();
            c.y += p.y / tips.size();
        }
        tips.push_back(c);
        const auto with = compute_traits(plant(tips));
        tips.pop_back();
        CHECK(with.n_leaves == r.n_leaves + 1);
        CHECK(with.hull_area == doctest::Approx(r.hull_area).epsilon(1e-12));
        CHECK(*r.leaves_per_hull < *with.leaves_per_hull);
    }
}

TEST_CASE("drought twin has fewer leaves and a smaller hull")
{
    synth::Archetype arch{"spreading", 30.0, 4.0, 800.0, 120.0, 1.0, 0.7, 0.6};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto control = synth::generate_plant(arch, Treatment::control, 45, seed);
        const auto drought = synth::generate_plant(arch, Treatment::drought, 45, seed);
        const auto rc = compute_traits(control.truth);
        const auto rd = compute_traits(drought.truth);
        CHECK(rd.n_leaves < rc.n_leaves);
        CHECK(rd.hull_area < rc.hull_area);
    }
}

TEST_CASE("traits_table keeps order and is job-count independent")
{
    CHECK(traits_table({}).empty());

    const auto plants = synth::generate_plants(synth::default_config());
    std::vector<PlantObservation> obs;
    for (const auto& p : plants) obs.push_back(p.detected);
    REQUIRE(obs.size() == 60);

    const auto serial = traits_table(obs, 1);
    CHECK(serial.size() == 60);
    CHECK(traits_table(obs, 4) == serial);
    CHECK(traits_table(obs, 64) == serial);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        CHECK(serial[i].plant_id == obs[i].plant_id);
    }

    auto permuted = obs;
    std::mt19937_64 gen(8);
    std::shuffle(permuted.begin(), permuted.end(), gen);
    auto a = traits_table(permuted, 3);
    auto key = [](const TraitRecord& x, const TraitRecord& y) {
        return std::tie(x.plant_id, x.dat) < std::tie(y.plant_id, y.dat);
    };
    auto b = serial;
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    CHECK(a == b);
}

TEST_CASE("traits csv layout")
{
    TraitRecord a;
    a.plant_id = "p,1";
    a.genotype = "RASI";
    a.treatment = Treatment::drought;
    a.dat = 50;
    a.n_leaves = 3;
    a.hull_area = 1.0 / 3.0;
    a.leaves_per_hull = 9.0;
    a.h_spread = 2.0;
    a.v_spread = 12345.6789012;
    TraitRecord b;
    b.plant_id = "q";
    b.genotype = "RASI";
    b.n_leaves = 1;

    const std::vector<TraitRecord> rows{a, b};
    const auto csv = format_traits_csv(rows);
    CHECK(csv == "plant_id,genotype,treatment,dat,n_leaves,hull_area_px2,leaves_per_hull,h_spread_px,v_spread_px\n"
                 "\"p,1\",RASI,drought,50,3,0.333333333,9,2,12345.6789\n"
                 "q,RASI,control,0,1,0,,0,0\n");

    const auto back = parse_traits_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].plant_id == "p,1");
    CHECK(back[0].leaves_per_hull == 9.0);
    CHECK_FALSE(back[1].leaves_per_hull);
    CHECK(back[1].treatment == Treatment::control);

    const auto scaled = parse_traits_csv(format_traits_csv(rows, 0.5));
    CHECK(scaled[0].h_spread == 1.0);
    CHECK(scaled[0].hull_area == doctest::Approx(1.0 / 12.0).epsilon(1e-8));
    CHECK(*scaled[0].leaves_per_hull == 36.0);
}

TEST_CASE("traits csv rejects malformed rows")
{
    CHECK_THROWS_AS(parse_traits_csv(""), ParseError);
    CHECK_THROWS_AS(parse_traits_csv("plant_id,genotype\n"), ParseError);
    const std::string header(kCsvHeader);
    CHECK_THROWS_AS(parse_traits_csv(header + "\np,G,wet,1,1,1,1,1,1\n"), ParseError);
    CHECK_THROWS_AS(parse_traits_csv(header + "\np,G,control,1,-1,1,1,1,1\n"), ParseError);
    CHECK_THROWS_AS(parse_traits_csv(header + "\np,G,control,1,1,abc,1,1,1\n"), ParseError);
}
