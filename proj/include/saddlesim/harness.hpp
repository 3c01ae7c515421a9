#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saddlesim/config.hpp"
#include "saddlesim/diagnostics.hpp"

namespace saddlesim {

/// Files written by one run. Paths are empty when the run kept everything
/// in memory.
struct RunArtifacts {
    std::string dir;
    std::string timeseries;
    std::string config_echo;
    std::string summary;
    std::vector<std::pair<double, std::string>> snapshots;
    std::vector<double> turning_points;
    double peak_max_v = 0;
    double peak_t = 0;
};

struct RunResult {
    FieldState<double> final_state;
    std::vector<DiagnosticsRecord> records;
    RunArtifacts artifacts;
};

/// Called after every solver step with the new state.
using StepObserver = std::function<void(const FieldState<double> &, const MeridianGrid<double> &, long step)>;

struct RunOptions {
    bool write_files = true;
    StepObserver observer;
};

/// Number of steps of size tau that cover [0, t_end]; a t_end within
/// rounding of a multiple of tau is not rounded up.
long step_count(double t_end, double tau);

/// Builds the grid and initial field, steps to t_end and records diagnostics
/// at t = 0, every record_every steps and at the final step. Failures carry
/// the failing step index.
RunResult run(const SimConfig &cfg, const RunOptions &opts = {});

/// "re<Re>_<swirl|noswirl>", Re in shortest round-trip form.
std::string sweep_dir_name(double re, bool swirl);

struct SweepCell {
    double re = 0;
    bool swirl = true;
    std::string dir;
    bool ok = false;
    std::string error;
    RunArtifacts artifacts;
};

/// Runs every (re, swirl) pair in its own subdirectory of cfg.out_dir on up
/// to `threads` workers (0 picks the hardware count). A failing cell is
/// recorded and does not stop the others. Writes sweep_summary.csv.
std::vector<SweepCell> sweep(const SimConfig &cfg, const std::vector<double> &re_list,
                             const std::vector<bool> &swirl_list, unsigned threads = 0);

struct CompareReport {
    std::size_t samples = 0;
    double corr_max_v = 0;
    double corr_dist_axis = 0;
    double max_diff_max_v = 0;
    double max_diff_dist_axis = 0;
    bool similar = false;

    std::string text() const;
};

/// Pearson correlation; two constant series count as fully correlated when
/// they are equal and uncorrelated otherwise.
double pearson(const std::vector<double> &a, const std::vector<double> &b);

/// Piecewise-linear value of (t, y) at `at`, held constant outside.
double resample(const std::vector<double> &t, const std::vector<double> &y, double at);

CompareReport compare_series(const std::vector<DiagnosticsRecord> &a, const std::vector<DiagnosticsRecord> &b);

/// Reads <dir>/timeseries.csv from both directories and compares them on
/// the coarser of the two time grids.
CompareReport compare_runs(const std::string &dir_a, const std::string &dir_b);

struct MmsRow {
    int nr = 0;
    int nz = 0;
    double h = 0;
    double tau = 0;
    double err_l2 = 0;
    double err_h1 = 0;
    double err_p = 0;
    std::optional<double> slope_l2;
    std::optional<double> slope_h1;
};

struct MmsOptions {
    double re = 100;
    double tau0 = 0.02;
    double t0 = 0.5;
    int nr0 = 17;
    int nz0 = 11;
};

/// Manufactured-solution ladder on uniform Offset grids: each level halves
/// h and tau, takes one step from the exact state at t0 and measures the
/// error at t0 + tau.
std::vector<MmsRow> mms_convergence(int levels, const MmsOptions &opts = {});

std::string format_mms_table(const std::vector<MmsRow> &rows);

} // namespace saddlesim
