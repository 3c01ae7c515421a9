#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "saddlesim/harness.hpp"
#include "saddlesim/io.hpp"

using namespace saddlesim;

namespace {

// one line, key=value pairs, message last so it may contain spaces
void report_error(const std::string &kind, const std::string &message) {
    std::string msg = message;
    for (auto &c : msg)
        if (c == '\n') c = ' ';
    std::fprintf(stderr, "error kind=%s message=\"%s\"\n", kind.c_str(), msg.c_str());
}

SimConfig load_config(const std::string &path, const std::vector<std::string> &sets) {
    SimConfig cfg = path.empty() ? parse_config("") : parse_config(read_text(path));
    for (const auto &s : sets) apply_override(cfg, s);
    if (const char *env = std::getenv("SADDLESIM_OUT"); env && *env) cfg.out_dir = env;
    return cfg;
}

std::vector<double> parse_re_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError("re", 0, "bad Re list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("re", 0, "empty Re list");
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Axisymmetric swirling Navier-Stokes in a no-slip cylinder"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;

    auto *run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("--config", config_path, "flat key = value config file");
    run_cmd->add_option("--set", sets, "override, key=value (repeatable)");

    std::string re_text, swirl_mode = "both";
    unsigned threads = 0;
    auto *sweep_cmd = app.add_subcommand("sweep", "run every (Re, swirl) combination");
    sweep_cmd->add_option("--config", config_path, "flat key = value config file");
    sweep_cmd->add_option("--set", sets, "override, key=value (repeatable)");
    sweep_cmd->add_option("--re", re_text, "comma-separated Reynolds numbers")->required();
    sweep_cmd->add_option("--swirl", swirl_mode, "both, on or off")
        ->check(CLI::IsMember({"both", "on", "off"}));
    sweep_cmd->add_option("--threads", threads, "worker threads, 0 = hardware count");

    std::string dir_a, dir_b;
    auto *cmp_cmd = app.add_subcommand("compare", "compare the timeseries of two run directories");
    cmp_cmd->add_option("dir_a", dir_a)->required();
    cmp_cmd->add_option("dir_b", dir_b)->required();

    int levels = 3;
    MmsOptions mms_opts;
    auto *mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence ladder");
    mms_cmd->add_option("--levels", levels, "number of refinement levels (>= 2)");
    mms_cmd->add_option("--re", mms_opts.re, "Reynolds number");
    mms_cmd->add_option("--tau0", mms_opts.tau0, "time step on the coarsest level");

    double probe_time = 0.4, probe_length = 0.1;
    int probe_samples = 101;
    std::string probe_line = "z";
    auto *probe_cmd = app.add_subcommand("probe", "vorticity magnitude and direction along a probe line");
    probe_cmd->add_option("--config", config_path, "flat key = value config file");
    probe_cmd->add_option("--set", sets, "override, key=value (repeatable)");
    probe_cmd->add_option("--time", probe_time, "sampling time");
    probe_cmd->add_option("--line", probe_line, "z: parallel to the axis at x2 = 0.05; x2: along x2 from the saddle")
        ->check(CLI::IsMember({"z", "x2"}));
    probe_cmd->add_option("--length", probe_length, "line length");
    probe_cmd->add_option("--samples", probe_samples, "number of samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report_error("usage", e.what());
        return 2;
    }

    try {
        if (*run_cmd) {
            const auto cfg = load_config(config_path, sets);
            const auto res = run(cfg);
            std::printf("timeseries %s\n", res.artifacts.timeseries.c_str());
            std::printf("turning_points %zu peak_max_v %.6g at t=%.6g\n", res.artifacts.turning_points.size(),
                        res.artifacts.peak_max_v, res.artifacts.peak_t);
        } else if (*sweep_cmd) {
            const auto cfg = load_config(config_path, sets);
            std::vector<bool> swirls;
            if (swirl_mode != "off") swirls.push_back(true);
            if (swirl_mode != "on") swirls.push_back(false);
            const auto cells = sweep(cfg, parse_re_list(re_text), swirls, threads);
            int failed = 0;
            for (const auto &c : cells) {
                std::printf("%s %s%s%s\n", c.dir.c_str(), c.ok ? "ok" : "failed", c.ok ? "" : " ", c.error.c_str());
                failed += c.ok ? 0 : 1;
            }
            if (failed) {
                report_error("sweep", std::to_string(failed) + " of " + std::to_string(cells.size()) +
                                          " cells failed");
                return 1;
            }
        } else if (*cmp_cmd) {
            std::fputs(compare_runs(dir_a, dir_b).text().c_str(), stdout);
        } else if (*mms_cmd) {
            std::fputs(format_mms_table(mms_convergence(levels, mms_opts)).c_str(), stdout);
        } else if (*probe_cmd) {
            auto cfg = load_config(config_path, sets);
            cfg.t_end = probe_time;
            const auto res = run(cfg);
            const auto grid = build_grid<double>(cfg.grid_spec());
            const double zmin = grid.z_min();
            const bool along_z = probe_line == "z";
            const Point3 base = along_z ? Point3{0, 0.05, zmin} : Point3{0, 0, zmin};
            if (probe_samples < 2) throw ParameterError("probe needs at least 2 samples");
            std::vector<double> offsets;
            for (int k = 0; k < probe_samples; ++k) offsets.push_back(probe_length * k / (probe_samples - 1));
            const auto line = sample_line(res.final_state, grid, base,
                                          along_z ? LineAxis::ParallelZ : LineAxis::ParallelX2, offsets,
                                          cfg.xi_floor);
            char name[64];
            std::snprintf(name, sizeof name, "probe_%s_t%.4f.csv", probe_line.c_str(), res.final_state.t);
            const auto path = (std::filesystem::path(cfg.out_dir) / name).string();
            write_line_sample(line, path);
            std::printf("probe %s\n", path.c_str());
        }
    } catch (const Error &e) {
        report_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception &e) {
        report_error("internal", e.what());
        return 1;
    }
    return 0;
}
