#include <doctest.h>

#include <sstream>
#include <string>

#include "axionsplit/errors.hpp"
#include "axionsplit/scenario.hpp"

using namespace axionsplit;
using namespace axionsplit::scenario;

namespace {

std::string dump(const Scenario& s) {
    std::ostringstream out;
    save(out, s);
    return out.str();
}

Scenario parse(const std::string& text, const std::vector<Override>& o = {}) {
    std::istringstream in(text);
    return load(in, o);
}

}  // namespace

TEST_CASE("presets are embedded and match the shipped files") {
    const auto names = preset_names();
    REQUIRE(names.size() == 4);
    for (const auto& name : names) {
        CAPTURE(name);
        const auto embedded = load_preset(name);
        const auto file = load_file(std::string(AXIONSPLIT_PRESET_DIR) + "/" + name + ".ini");
        CHECK(dump(embedded) == dump(file));
        CHECK(embedded.name == name);
    }
    CHECK_THROWS_AS(preset_text("nope"), ConfigError);
}

TEST_CASE("preset contents") {
    const auto c = load_preset("table1.confocal");
    CHECK(c.cavity.kind == cavity::CavityKind::confocal);
    CHECK(c.cavity.cavity_length == 14.0);
    CHECK(c.cavity.field_length == 10.0);
    CHECK(c.cavity.theta_split == 4e-10);
    CHECK(c.cavity.n_traversals == 15);
    CHECK(c.laser.amplitude_photons_per_s == 5e18);
    CHECK(c.analysis.fit_slope == 6.41e7);
    CHECK(c.analysis.extraction_count == 12000);

    const auto t2 = load_preset("table2.bnl-quad");
    CHECK(t2.cavity.field_length == 1.0);
    CHECK(t2.cavity.gap == 6.5);
    CHECK(t2.cavity.theta_split == 2e-14);
    CHECK(t2.cavity.mirror2 == cavity::MirrorSpec::convex(5.5));
    CHECK(t2.magnet.gradient_t_per_m == 100.0);
    CHECK(t2.analysis.fit_kind == sensitivity::FitKind::power);
    CHECK(t2.analysis.integration_time_s == 3e6);
}

TEST_CASE("round trip") {
    for (const auto& name : preset_names()) {
        const auto s = load_preset(name);
        const auto text = dump(s);
        CHECK(dump(parse(text)) == text);
    }
    // Values that need all 17 digits survive.
    const auto odd = load_preset("table1.confocal", {{"cavity.theta_split_rad", "4.0000000000000003e-10"},
                                                     {"laser.waist_m", "0.1"}});
    const auto back = parse(dump(odd));
    CHECK(back.cavity.theta_split == odd.cavity.theta_split);
    CHECK(back.laser.waist_m == 0.1);
}

TEST_CASE("overrides") {
    const auto o = parse_override("cavity.n_traversals=7");
    CHECK(o.key == "cavity.n_traversals");
    CHECK(o.value == "7");
    CHECK_THROWS_AS(parse_override("novalue"), ConfigError);
    CHECK_THROWS_AS(parse_override("=3"), ConfigError);

    const auto s = load_preset("table1.confocal", {o, {"cavity.mirror2", "convex:5.5"}});
    CHECK(s.cavity.n_traversals == 7);
    CHECK(s.cavity.mirror2 == cavity::MirrorSpec::convex(5.5));
    CHECK_THROWS_AS(load_preset("table1.confocal", {{"cavity.nope", "1"}}), ConfigError);
}

TEST_CASE("partial documents fall back to defaults") {
    const auto s = parse("[scenario]\nname = tiny\n[cavity]\nn_traversals = 3\n");
    CHECK(s.name == "tiny");
    CHECK(s.cavity.n_traversals == 3);
    CHECK(s.cavity.theta_split == 4e-10);
}

TEST_CASE("rejected documents") {
    CHECK_THROWS_AS(parse("[cavity]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[nosuch]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("loose = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity]\ntheta_split_rad = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity]\ntheta_split_rad = 1e-10x\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity]\nn_traversals = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity]\ndetector_lens = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity]\nkind = spherical\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity]\ngap_m = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("[magnet]\nfield_length_m = 9\n"), ConfigError);
    CHECK_THROWS_AS(parse("[laser]\nwaist_m = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[laser]\npower_w = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[axion]\ng_ref_gev = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[analysis]\nbin_width_m = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[analysis]\nfit_kind = cubic\n"), ConfigError);
    CHECK_THROWS_AS(parse("[cavity\n"), ConfigError);
    CHECK_THROWS_AS(load_file("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("field length and gaps stay consistent") {
    const auto s = parse("[cavity]\ngap_m = 6.5\n[magnet]\nfield_length_m = 1\n");
    CHECK(s.cavity.field_length == 1.0);
    CHECK_NOTHROW(s.cavity.validate());
}

TEST_CASE("derived views") {
    const auto s = load_preset("table1.confocal");
    const auto spec = s.analysis.histogram_spec();
    CHECK(spec.bin_count() == 30);
    const auto prof = s.profile();
    CHECK(prof.amplitude == 5e18);
    CHECK(prof.waist == 7.5e-4);
    const auto fit = s.analysis.fit();
    CHECK(fit.kind == sensitivity::FitKind::linear);
    CHECK(fit.slope == 6.41e7);
    CHECK(fit.intercept == 24793.0);
}
