#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "geodlab/cli.hpp"
#include "geodlab/report.hpp"
#include "geodlab/svg.hpp"

using namespace geodlab;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("geodlab_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
}  // namespace

TEST_CASE("csv format") {
    ExperimentReport rep;
    rep.name = "demo";
    rep.add("a=1,r=1", 0.5, 0.5, 1e-6, TolKind::Relative);
    const std::string csv = to_csv(rep);
    REQUIRE(csv ==
            "label,measured,target,tolerance,pass\n"
            "a=1;r=1,0.5,0.5,1e-06,true\n");

    ExperimentReport empty;
    REQUIRE(to_csv(empty) == "label,measured,target,tolerance,pass\n");

    ExperimentReport fail_rep;
    fail_rep.add("x", 2.0, 1.0, 0.5, TolKind::Absolute);
    REQUIRE_FALSE(fail_rep.rows.front().pass);
    REQUIRE(to_csv(fail_rep).find(",false\n") != std::string::npos);
}

TEST_CASE("csv round trip is lossless") {
    ExperimentReport rep;
    rep.name = "round-trip";
    rep.add("theta_star", 1.2365093222591304, 1.2365, 1e-3, TolKind::Absolute);
    rep.add("tiny", 3.0000000000000004e-17, 0.0, 1e-12, TolKind::Absolute);
    rep.add("label,with,commas", -2.0, -2.0, 0.05, TolKind::Relative);
    const std::string csv = to_csv(rep);
    const ExperimentReport parsed = parse_csv(csv, rep.name);
    REQUIRE(parsed.rows.size() == rep.rows.size());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        REQUIRE(parsed.rows[i].measured == rep.rows[i].measured);
        REQUIRE(parsed.rows[i].target == rep.rows[i].target);
        REQUIRE(parsed.rows[i].tolerance == rep.rows[i].tolerance);
        REQUIRE(parsed.rows[i].pass == rep.rows[i].pass);
    }
    REQUIRE(to_csv(parsed) == csv);
    REQUIRE_THROWS_AS(parse_csv("bad header\n"), std::runtime_error);
}

TEST_CASE("tolerance overrides re-judge rows") {
    ExperimentReport rep;
    rep.add("x", 1.05, 1.0, 0.1, TolKind::Absolute);
    REQUIRE(rep.rows.front().pass);
    rep.override_tolerance("x", 0.01);
    REQUIRE_FALSE(rep.rows.front().pass);
}

TEST_CASE("svg output") {
    // Two concentric circles: padded bounding box spans [-2.1, 2.1]^2.
    std::vector<std::vector<Vec2>> circles(2);
    for (int i = 0; i <= 128; ++i) {
        const double t = 2.0 * M_PI * i / 128.0;
        circles[0].emplace_back(std::cos(t), std::sin(t));
        circles[1].emplace_back(2.0 * std::cos(t), 2.0 * std::sin(t));
    }
    const std::string svg = to_svg(circles);
    REQUIRE(svg.find("viewBox=\"-2.1 -2.1 4.2 4.2\"") != std::string::npos);
    REQUIRE(svg.find("stroke=\"red\"") != std::string::npos);
    REQUIRE(svg.find("stroke=\"green\"") != std::string::npos);

    // Three curves cycle red/green/blue in input order.
    std::vector<std::vector<Vec2>> three = {circles[0], circles[1], circles[0]};
    const std::string svg3 = to_svg(three);
    const auto red = svg3.find("stroke=\"red\"");
    const auto green = svg3.find("stroke=\"green\"");
    const auto blue = svg3.find("stroke=\"blue\"");
    REQUIRE(red != std::string::npos);
    REQUIRE(green != std::string::npos);
    REQUIRE(blue != std::string::npos);
    REQUIRE(red < green);
    REQUIRE(green < blue);

    // Single closed curve: exactly one path element.
    const std::string svg1 = to_svg({circles[0]});
    std::size_t count = 0;
    for (std::size_t pos = svg1.find("<path"); pos != std::string::npos;
         pos = svg1.find("<path", pos + 1))
        ++count;
    REQUIRE(count == 1);

    REQUIRE_THROWS_AS(to_svg({}), std::invalid_argument);
}

TEST_CASE("experiments are deterministic for a fixed seed") {
    const ExperimentResult a = exp_preservation_sphere_cylinder(7, 6);
    const ExperimentResult b = exp_preservation_sphere_cylinder(7, 6);
    REQUIRE(to_csv(a.report) == to_csv(b.report));
    const ExperimentResult c = exp_offset_curvature();
    const ExperimentResult d = exp_offset_curvature();
    REQUIRE(to_csv(c.report) == to_csv(d.report));
}

TEST_CASE("run writes byte-identical outputs for identical configs") {
    const auto dir1 = temp_dir("run1");
    const auto dir2 = temp_dir("run2");
    RunConfig cfg;
    cfg.experiment = "ellipse-foliation";
    cfg.seed = 7;
    cfg.plot = true;
    cfg.out_dir = dir1.string();
    REQUIRE(run(cfg) == 0);
    cfg.out_dir = dir2.string();
    REQUIRE(run(cfg) == 0);
    REQUIRE(slurp((dir1 / "ellipse-foliation.csv").string()) ==
            slurp((dir2 / "ellipse-foliation.csv").string()));
    REQUIRE(slurp((dir1 / "ellipse-foliation.svg").string()) ==
            slurp((dir2 / "ellipse-foliation.svg").string()));
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("run exit codes") {
    RunConfig cfg;
    cfg.experiment = "no-such-experiment";
    cfg.out_dir = temp_dir("codes").string();
    REQUIRE(run(cfg) == 2);

    // A failing row (forced by an impossible tolerance override) exits 1.
    cfg.experiment = "offset-curvature";
    cfg.tol_overrides = {{"a=1;r=1", -1.0}};
    REQUIRE(run(cfg) == 1);

    // Output directory blocked by a regular file: I/O error.
    const auto blocker = std::filesystem::path(cfg.out_dir) / "blocker";
    std::ofstream(blocker.string()) << "x";
    cfg.tol_overrides.clear();
    cfg.out_dir = (blocker / "sub").string();
    REQUIRE(run(cfg) == 3);

    // Clean run exits 0 and leaves the CSV behind.
    cfg.out_dir = temp_dir("codes_ok").string();
    REQUIRE(run(cfg) == 0);
    REQUIRE(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / "offset-curvature.csv"));
    std::filesystem::remove_all(temp_dir("codes"));
    std::filesystem::remove_all(cfg.out_dir);
}
