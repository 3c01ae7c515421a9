#include "saddlesim/io.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace saddlesim {

namespace {

struct FileCloser {
    void operator()(std::FILE *f) const {
        if (f) std::fclose(f);
    }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_write(const std::string &path) {
    File f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

void finish(File &f, const std::string &path) {
    if (std::ferror(f.get()) || std::fclose(f.release()) != 0) throw IoError("write to '" + path + "' failed");
}

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

void write_timeseries(const std::vector<DiagnosticsRecord> &records, const std::string &path) {
    auto f = open_write(path);
    std::fprintf(f.get(), "%s\n", kTimeseriesHeader);
    for (const auto &r : records)
        std::fprintf(f.get(), "%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e\n", r.t, r.max_v, r.arg_r, r.arg_z,
                     r.dist_axis, r.min_core_uz, r.max_core_uz, r.energy, r.max_w);
    finish(f, path);
}

std::vector<DiagnosticsRecord> read_timeseries(const std::string &path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != kTimeseriesHeader)
        throw IoError("'" + path + "' does not start with the timeseries header");
    std::vector<DiagnosticsRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        DiagnosticsRecord r;
        char tail = 0;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf%c", &r.t, &r.max_v, &r.arg_r,
                                    &r.arg_z, &r.dist_axis, &r.min_core_uz, &r.max_core_uz, &r.energy, &r.max_w, &tail);
        if (got != 9) throw IoError("'" + path + "' line " + std::to_string(line_no) + " is not a timeseries row");
        out.push_back(r);
    }
    return out;
}

void write_snapshot(const FieldState<double> &s, const VorticityField<double> &w, const MeridianGrid<double> &g,
                    const std::string &path) {
    auto f = open_write(path);
    if (ends_with(path, ".vtk")) {
        std::fprintf(f.get(), "# vtk DataFile Version 3.0\nsaddlesim meridian snapshot t=%.8e\nASCII\n", s.t);
        std::fprintf(f.get(), "DATASET STRUCTURED_GRID\nDIMENSIONS %d %d 1\nPOINTS %d double\n", g.nr(), g.nz(),
                     g.size());
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) std::fprintf(f.get(), "%.8e %.8e 0\n", g.r(i), g.z(j));
        std::fprintf(f.get(), "POINT_DATA %d\n", g.size());
        auto scalar = [&](const char *name, const VectorX<double> &v) {
            std::fprintf(f.get(), "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
            for (int k = 0; k < g.size(); ++k) std::fprintf(f.get(), "%.8e\n", v(k));
        };
        scalar("u_r", s.u_r);
        scalar("u_theta", s.u_theta);
        scalar("u_z", s.u_z);
        scalar("p", s.p);
        scalar("w_r", w.w_r);
        scalar("w_theta", w.w_theta);
        scalar("w_z", w.w_z);
    } else {
        std::fprintf(f.get(), "%s\n", kSnapshotHeader);
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) {
                const int k = g.index(i, j);
                std::fprintf(f.get(), "%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e\n", g.r(i), g.z(j), s.u_r(k),
                             s.u_theta(k), s.u_z(k), s.p(k), w.w_r(k), w.w_theta(k), w.w_z(k));
            }
    }
    finish(f, path);
}

void write_line_sample(const LineSample &line, const std::string &path) {
    auto f = open_write(path);
    std::fprintf(f.get(), "offset,w_mag,xi_1,xi_2,xi_3,valid\n");
    for (std::size_t k = 0; k < line.offsets.size(); ++k)
        std::fprintf(f.get(), "%.8e,%.8e,%.8e,%.8e,%.8e,%d\n", line.offsets[k], line.w_mag[k], line.xi[k][0],
                     line.xi[k][1], line.xi[k][2], line.valid[k] ? 1 : 0);
    finish(f, path);
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string &path, const std::string &text) {
    auto f = open_write(path);
    std::fwrite(text.data(), 1, text.size(), f.get());
    finish(f, path);
}

} // namespace saddlesim
