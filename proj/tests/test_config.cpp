#include "doctest.h"

#include <cmath>
#include <string>

#include "wignerlab/config.hpp"
#include "wignerlab/errors.hpp"

using namespace wignerlab;

namespace {

const char* kFigure = R"(# barrier comparison
device_length = 50
segment = -1.5, 1.5, 0.2
N_x = 100
N_v = 128
R_h = 2048
Ly = 31
dy = 0.5
inflow_left = 1, 0, 0.0002
inflow_right = 0
scheme = both
)";

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("full single-mesh configuration")
{
    const auto cfg = parse_config(kFigure);
    CHECK(cfg.device_length == 50.0);
    REQUIRE(cfg.segments.size() == 1);
    CHECK(cfg.segments[0].lo == -1.5);
    CHECK(cfg.segments[0].hi == 1.5);
    CHECK(cfg.segments[0].value == 0.2);
    CHECK(*cfg.n_x == 100);
    CHECK(*cfg.n_v == 128);
    CHECK(*cfg.coherence_length == 2048.0);
    CHECK(cfg.quadrature().count() == 62);
    CHECK(cfg.scheme == SchemeSelection::both);
    CHECK(cfg.edge_rule == EdgeRule::mean);
    CHECK(cfg.inflow_left(0.0) == 1.0);
    CHECK(cfg.inflow_left(0.01) == doctest::Approx(std::exp(-0.5)));
    CHECK(cfg.inflow_right(0.3) == 0.0);
    const auto bc = cfg.boundary();
    CHECK(bc.left(0.0) == 1.0);
    CHECK(bc.right(-0.1) == 0.0);
    const auto profile = cfg.profile();
    CHECK(profile(0.0) == 0.2);
    CHECK(profile.sample(1.5) == doctest::Approx(0.1));
}

TEST_CASE("level lists and optional keys")
{
    const auto cfg = parse_config(R"(device_length = 50
segment = -1.5, 1.5, 0.2
N_x = 100
Nv_levels = 64, 128, 256
Rh_levels = 32, 64, 128
Ly = 31
dy = 1.0
inflow_left = 1, 1.5707963267948966, 0.25
scheme = improved
slice_x = -20, 0
norm_x = 5
edge_rule = closed
)");
    CHECK(cfg.nv_levels == std::vector<int>{64, 128, 256});
    CHECK(cfg.rh_levels == std::vector<double>{32, 64, 128});
    CHECK(!cfg.n_v.has_value());
    CHECK(cfg.scheme == SchemeSelection::improved);
    CHECK(cfg.slice_x == std::vector<double>{-20, 0});
    CHECK(cfg.norm_x == 5.0);
    CHECK(cfg.edge_rule == EdgeRule::closed);
    CHECK(cfg.inflow_left.center == doctest::Approx(M_PI / 2));
    CHECK(schemes_of(cfg.scheme) == std::vector<Scheme>{Scheme::improved});
    CHECK(schemes_of(SchemeSelection::both).size() == 2);
}

TEST_CASE("odd N_v is rejected with its line")
{
    const auto msg = error_of("device_length = 50\nN_v = 127\n");
    CHECK(contains(msg, "line 2"));
    CHECK(contains(msg, "even"));
}

TEST_CASE("aliasing guard at parse time")
{
    const auto msg = error_of("device_length = 50\nN_x = 10\nN_v = 64\nLy = 40\nR_h = 32\ndy = 1\n");
    CHECK(contains(msg, "line 5"));
    CHECK(contains(msg, "Ly = 40"));
    CHECK(contains(msg, "R_h = 32"));
    CHECK(contains(error_of("device_length = 50\nN_x = 10\nNv_levels = 64, 128\nRh_levels = 32, 16\nLy = 20\ndy = 1\n"),
                   "R_h = 16"));
}

TEST_CASE("other configuration errors")
{
    const std::string base = "device_length = 50\nN_x = 10\nN_v = 8\nR_h = 8\nLy = 4\ndy = 1\n";
    CHECK(error_of(base).empty());
    CHECK(contains(error_of(base + "bogus = 1\n"), "unknown key 'bogus'"));
    CHECK(contains(error_of(base + "N_x = 12\n"), "duplicate"));
    CHECK(contains(error_of("device_length = 5x0\n"), "line 1"));
    CHECK(contains(error_of("device_length = 50\nN_x = 3\n"), "N_x must be >= 4"));
    CHECK(contains(error_of("device_length = 50\nN_x = 10\nN_v = 8\nR_h = 8\nLy = 4\ndy = 0.3\n"), "integer"));
    CHECK(contains(error_of("N_x = 10\nN_v = 8\nR_h = 8\nLy = 4\ndy = 1\n"), "device_length"));
    CHECK(contains(error_of("device_length = 50\nN_x = 10\nN_v = 8\nR_h = 8\ndy = 1\n"), "'Ly'"));
    CHECK(contains(error_of("device_length = 50\nN_v = 8\nR_h = 8\nLy = 4\ndy = 1\n"), "N_x"));
    CHECK(contains(error_of("device_length = 50\nN_x = 10\nR_h = 8\nLy = 4\ndy = 1\n"), "together"));
    CHECK(contains(error_of(base + "segment = 1, 0, 0.2\n"), "line 7"));
    CHECK(contains(error_of(base + "segment = -1, 1, 0.2\nsegment = 0, 2, 0.1\n"), "overlap"));
    CHECK(contains(error_of(base + "inflow_left = 1, 0\n"), "amplitude, center, width"));
    CHECK(contains(error_of(base + "inflow_left = 1, 0, -1\n"), "width"));
    CHECK(contains(error_of(base + "scheme = fancy\n"), "scheme"));
    CHECK(contains(error_of(base + "edge_rule = open\n"), "edge_rule"));
    CHECK(contains(error_of(base + "Nv_levels = 8, 16\n"), "same number"));
    CHECK(contains(error_of(base + "N_v\n"), "key = value"));
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
