#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "report.hpp"
#include "richardson.hpp"
#include "svg.hpp"

namespace geodlab {

struct RunConfig {
    std::string experiment;
    std::string out_dir = "results";
    std::uint64_t seed = 42;
    double r = 1.0;
    std::vector<std::pair<std::string, double>> tol_overrides;
    bool plot = false;
};

// Transverse-deflection limit of geodesics crossing the x1 = 0 axis,
// extrapolated over the x2 ladder; the limit is minus the product of the
// principal curvatures.
inline ExperimentResult exp_deflection_limit() {
    ExperimentResult res;
    res.report.name = "deflection-limit";
    const std::vector<double> ladder = {0.1, 0.05, 0.025};
    struct Case {
        double a1, a2;
        ScalarFieldPtr h;
        const char* tag;
    };
    const std::vector<Case> cases = {
        {1.0, 2.0, zero_field(), "a=1;2"},
        {1.0, 1.0, quartic_cross_field(0.25), "a=1;1;hq"},
        {0.0, 3.0, zero_field(), "a=0;3"},
    };
    for (const Case& c : cases) {
        const LimitEstimate est = deflection_ratio_limit(c.a1, c.a2, c.h, ladder);
        const double target = -c.a1 * c.a2;
        const std::string tag(c.tag);
        if (target == 0.0)
            res.report.add(tag + ";extrapolated", est.extrapolated, 0.0, 1e-2, TolKind::Absolute);
        else
            res.report.add(tag + ";extrapolated", est.extrapolated, target, 1e-2, TolKind::Relative);
        res.report.add(tag + ";order_ge_1", (est.ok && est.fit_order >= 1.0) ? 1.0 : 0.0, 1.0, 0.0);
    }
    return res;
}

inline std::vector<std::string> experiment_names() {
    return {"offset-curvature", "preservation",   "deflection-limit", "projection-expansion",
            "rigidity-residual", "round-cylinder", "capped-cylinder",  "ellipse-foliation"};
}

inline ExperimentResult run_experiment(const std::string& name, const RunConfig& cfg) {
    if (name == "offset-curvature") return exp_offset_curvature();
    if (name == "preservation") return exp_preservation_sphere_cylinder(cfg.seed);
    if (name == "deflection-limit") return exp_deflection_limit();
    if (name == "projection-expansion") return exp_projection_expansion();
    if (name == "rigidity-residual") return exp_rigidity_residual();
    if (name == "round-cylinder") return exp_round_cylinder(cfg.r);
    if (name == "capped-cylinder") return exp_capped_cylinder(cfg.r);
    if (name == "ellipse-foliation") return exp_ellipse_foliation();
    throw std::invalid_argument("unknown experiment: " + name);
}

// Runs the named experiment (or all of them), writes <name>.csv and optional
// <name>.svg under out_dir. Exit status: 0 all rows pass, 1 any row fails,
// 2 unknown experiment, 3 I/O failure.
inline int run(const RunConfig& cfg) {
    std::vector<std::string> todo;
    if (cfg.experiment == "all") {
        todo = experiment_names();
    } else {
        const auto names = experiment_names();
        if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
            std::fprintf(stderr, "unknown experiment: %s\n", cfg.experiment.c_str());
            return 2;
        }
        todo.push_back(cfg.experiment);
    }

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "cannot create output directory %s\n", cfg.out_dir.c_str());
        return 3;
    }

    bool all_pass = true;
    for (const std::string& name : todo) {
        ExperimentResult result;
        try {
            result = run_experiment(name, cfg);
        } catch (const std::domain_error& e) {
            std::fprintf(stderr, "%s: bad parameter: %s\n", name.c_str(), e.what());
            return 2;
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "%s: bad parameter: %s\n", name.c_str(), e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s: error: %s\n", name.c_str(), e.what());
            return 3;
        }
        for (const auto& [label, tol] : cfg.tol_overrides)
            result.report.override_tolerance(label, tol);

        const std::string csv_path = cfg.out_dir + "/" + name + ".csv";
        try {
            emit_csv(result.report, csv_path);
            result.report.artifacts.push_back(csv_path);
            if (cfg.plot) {
                for (const PlotData& p : result.plots) {
                    const std::string svg_path = cfg.out_dir + "/" + p.name + ".svg";
                    emit_svg(p.curves, svg_path);
                    result.report.artifacts.push_back(svg_path);
                }
            }
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 3;
        }

        int failed = 0;
        for (const auto& row : result.report.rows) failed += row.pass ? 0 : 1;
        all_pass = all_pass && failed == 0;
        std::printf("%-22s %s (%zu rows%s)\n", name.c_str(), failed == 0 ? "PASS" : "FAIL",
                    result.report.rows.size(),
                    failed == 0 ? "" : (", " + std::to_string(failed) + " failing").c_str());
    }
    return all_pass ? 0 : 1;
}

}  // namespace geodlab
