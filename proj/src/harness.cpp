#include "saddlesim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

#include "saddlesim/io.hpp"
#include "saddlesim/manufactured.hpp"

namespace fs = std::filesystem;

namespace saddlesim {

namespace {

std::string shortest(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void ensure_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

} // namespace

long step_count(double t_end, double tau) {
    if (!(tau > 0)) throw ParameterError("time step must be positive");
    if (!(t_end >= 0)) throw ParameterError("t_end must be non-negative");
    const double q = t_end / tau;
    const double n = std::round(q);
    return static_cast<long>(std::abs(q - n) <= 1e-9 * std::max(1.0, q) ? n : std::ceil(q));
}

RunResult run(const SimConfig &cfg, const RunOptions &opts) {
    validate(cfg);
    const auto grid = build_grid<double>(cfg.grid_spec());
    const long steps = step_count(cfg.t_end, cfg.tau);

    RunResult res;
    auto &art = res.artifacts;
    if (opts.write_files) {
        art.dir = cfg.out_dir;
        ensure_dir(art.dir);
        art.config_echo = (fs::path(art.dir) / "config.txt").string();
        write_text(art.config_echo, echo_config(cfg));
    }

    // snapshot i is taken at the step nearest its requested time
    std::vector<std::pair<long, double>> snaps;
    for (double ts : cfg.snapshot_times)
        if (ts <= cfg.t_end + 0.5 * cfg.tau) snaps.emplace_back(std::lround(ts / cfg.tau), ts);
    auto take_snapshots = [&](const FieldState<double> &s, long step) {
        if (!opts.write_files) return;
        for (const auto &[k, ts] : snaps) {
            if (k != step) continue;
            const std::string path = (fs::path(art.dir) / ("snapshot_t" + fixed4(ts) + ".csv")).string();
            write_snapshot(s, vorticity(s, grid), grid, path);
            art.snapshots.emplace_back(ts, path);
        }
    };

    auto state = initial_field(cfg.initial_params(), grid);
    res.records.push_back(record(state, grid, cfg.r_core));
    take_snapshots(state, 0);

    if (steps > 0) {
        const AxisymmetricStepper<double> stepper(grid, cfg.re, cfg.tau, cfg.solver_settings());
        for (long k = 1; k <= steps; ++k) {
            auto next = stepper.advance(state, {}, k);
            // keep the time exact instead of accumulating tau
            next.t = static_cast<double>(k) * cfg.tau;
            state = std::move(next);
            if (opts.observer) opts.observer(state, grid, k);
            if (k % cfg.record_every == 0 || k == steps) res.records.push_back(record(state, grid, cfg.r_core));
            take_snapshots(state, k);
        }
    }

    art.turning_points = detect_turning_points(res.records, cfg.jump_threshold);
    for (const auto &r : res.records)
        if (r.t > 0 && r.max_v > art.peak_max_v) {
            art.peak_max_v = r.max_v;
            art.peak_t = r.t;
        }
    if (opts.write_files) {
        art.timeseries = (fs::path(art.dir) / "timeseries.csv").string();
        write_timeseries(res.records, art.timeseries);
        std::ostringstream os;
        os.precision(9);
        os << "steps = " << steps << "\nfinal_t = " << state.t << "\nturning_points = ";
        for (std::size_t k = 0; k < art.turning_points.size(); ++k) os << (k ? "," : "") << art.turning_points[k];
        os << "\npeak_max_v = " << art.peak_max_v << "\npeak_t = " << art.peak_t << "\n";
        art.summary = (fs::path(art.dir) / "summary.txt").string();
        write_text(art.summary, os.str());
    }
    res.final_state = std::move(state);
    return res;
}

std::string sweep_dir_name(double re, bool swirl) {
    return "re" + shortest(re) + (swirl ? "_swirl" : "_noswirl");
}

std::vector<SweepCell> sweep(const SimConfig &cfg, const std::vector<double> &re_list,
                             const std::vector<bool> &swirl_list, unsigned threads) {
    if (re_list.empty() || swirl_list.empty()) throw ParameterError("sweep needs at least one Re and one swirl value");
    std::vector<SweepCell> cells;
    for (double re : re_list)
        for (bool sw : swirl_list) {
            SweepCell c;
            c.re = re;
            c.swirl = sw;
            c.dir = (fs::path(cfg.out_dir) / sweep_dir_name(re, sw)).string();
            cells.push_back(c);
        }
    ensure_dir(cfg.out_dir);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            auto &c = cells[k];
            try {
                SimConfig one = cfg;
                one.re = c.re;
                one.swirl = c.swirl;
                one.out_dir = c.dir;
                c.artifacts = run(one).artifacts;
                c.ok = true;
            } catch (const Error &e) {
                c.error = e.kind() + ": " + e.what();
            } catch (const std::exception &e) {
                c.error = std::string("internal: ") + e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();

    std::ostringstream os;
    os.precision(9);
    os << "re,swirl,status,turning_points,peak_max_v,error\n";
    for (const auto &c : cells) {
        os << shortest(c.re) << "," << (c.swirl ? "swirl" : "noswirl") << "," << (c.ok ? "ok" : "failed") << ",";
        for (std::size_t k = 0; k < c.artifacts.turning_points.size(); ++k)
            os << (k ? ";" : "") << c.artifacts.turning_points[k];
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        os << "," << c.artifacts.peak_max_v << "," << err << "\n";
    }
    write_text((fs::path(cfg.out_dir) / "sweep_summary.csv").string(), os.str());
    return cells;
}

double pearson(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size() || a.empty()) throw ParameterError("pearson needs two series of equal, nonzero length");
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a[k];
        mb += b[k];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    if (saa == 0 || sbb == 0) return a == b ? 1.0 : 0.0;
    return sab / std::sqrt(saa * sbb);
}

double resample(const std::vector<double> &t, const std::vector<double> &y, double at) {
    if (t.empty() || t.size() != y.size()) throw ParameterError("resample needs matching nonempty series");
    if (at <= t.front()) return y.front();
    if (at >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), at);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double s = (at - t[k - 1]) / (t[k] - t[k - 1]);
    return (1 - s) * y[k - 1] + s * y[k];
}

std::string CompareReport::text() const {
    std::ostringstream os;
    os.precision(6);
    os << "samples = " << samples << "\n";
    os << "corr_max_v = " << corr_max_v << "\n";
    os << "corr_dist_axis = " << corr_dist_axis << "\n";
    os << "max_diff_max_v = " << max_diff_max_v << "\n";
    os << "max_diff_dist_axis = " << max_diff_dist_axis << "\n";
    os << "verdict = " << (similar ? "qualitatively similar" : "not similar") << "\n";
    return os.str();
}

CompareReport compare_series(const std::vector<DiagnosticsRecord> &a, const std::vector<DiagnosticsRecord> &b) {
    if (a.empty() || b.empty()) throw ParameterError("cannot compare an empty timeseries");
    const auto &coarse = a.size() <= b.size() ? a : b;
    const auto &fine = a.size() <= b.size() ? b : a;
    std::vector<double> tf, vf, df;
    for (const auto &r : fine) {
        tf.push_back(r.t);
        vf.push_back(r.max_v);
        df.push_back(r.dist_axis);
    }
    std::vector<double> v1, v2, d1, d2;
    for (const auto &r : coarse) {
        // only the overlap of the two time ranges is compared
        if (r.t < tf.front() || r.t > tf.back()) continue;
        v1.push_back(r.max_v);
        d1.push_back(r.dist_axis);
        v2.push_back(resample(tf, vf, r.t));
        d2.push_back(resample(tf, df, r.t));
    }
    if (v1.empty()) throw ParameterError("the two timeseries do not overlap in time");
    CompareReport rep;
    rep.samples = v1.size();
    rep.corr_max_v = pearson(v1, v2);
    rep.corr_dist_axis = pearson(d1, d2);
    for (std::size_t k = 0; k < v1.size(); ++k) {
        rep.max_diff_max_v = std::max(rep.max_diff_max_v, std::abs(v1[k] - v2[k]));
        rep.max_diff_dist_axis = std::max(rep.max_diff_dist_axis, std::abs(d1[k] - d2[k]));
    }
    rep.similar = rep.corr_max_v >= 0.9;
    return rep;
}

CompareReport compare_runs(const std::string &dir_a, const std::string &dir_b) {
    return compare_series(read_timeseries((fs::path(dir_a) / "timeseries.csv").string()),
                          read_timeseries((fs::path(dir_b) / "timeseries.csv").string()));
}

std::vector<MmsRow> mms_convergence(int levels, const MmsOptions &opts) {
    if (levels < 2) throw ParameterError("mms needs at least 2 levels");
    if (opts.nr0 < 3 || opts.nz0 < 3) throw ParameterError("mms base grid needs at least 3 nodes per direction");
    std::vector<MmsRow> rows;
    for (int l = 0; l < levels; ++l) {
        GridSpec spec;
        spec.nr = (opts.nr0 - 1) * (1 << l) + 1;
        spec.nz = (opts.nz0 - 1) * (1 << l) + 1;
        spec.grading = 1.0;
        const auto g = build_grid<double>(spec);
        const double tau = opts.tau0 / (1 << l);
        const auto mc = manufactured_case(opts.re, g);
        const AxisymmetricStepper<double> stepper(g, opts.re, tau);
        const auto next = stepper.advance(mc.state(g, opts.t0), mc.forcing_fn(), 1);
        const auto e = discrete_norms(next, mc, g);

        MmsRow row;
        row.nr = spec.nr;
        row.nz = spec.nz;
        row.h = g.h_max();
        row.tau = tau;
        row.err_l2 = e.l2;
        row.err_h1 = e.h1;
        row.err_p = e.p_l2;
        if (!rows.empty()) {
            const auto &prev = rows.back();
            const double ratio = std::log(prev.h / row.h);
            row.slope_l2 = std::log(prev.err_l2 / row.err_l2) / ratio;
            row.slope_h1 = std::log(prev.err_h1 / row.err_h1) / ratio;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string format_mms_table(const std::vector<MmsRow> &rows) {
    std::ostringstream os;
    os << "nr,nz,h,tau,err_l2,err_h1,err_p,slope_l2,slope_h1\n";
    char buf[256];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.8e,%.8e,%.8e,%.8e,%.8e,", r.nr, r.nz, r.h, r.tau, r.err_l2, r.err_h1,
                      r.err_p);
        os << buf;
        if (r.slope_l2) {
            std::snprintf(buf, sizeof buf, "%.4f,%.4f", *r.slope_l2, *r.slope_h1);
            os << buf;
        } else {
            os << ",";
        }
        os << "\n";
    }
    return os.str();
}

} // namespace saddlesim
