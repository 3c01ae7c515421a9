#pragma once

#include <string>
#include <vector>

#include "saddlesim/diagnostics.hpp"

namespace saddlesim {

inline constexpr const char *kTimeseriesHeader = "t,max_v,arg_r,arg_z,dist_axis,min_core_uz,max_core_uz,energy,max_w";
inline constexpr const char *kSnapshotHeader = "r,z,u_r,u_theta,u_z,p,w_r,w_theta,w_z";

/// One CSV row per record, every value as %.8e.
void write_timeseries(const std::vector<DiagnosticsRecord> &records, const std::string &path);
std::vector<DiagnosticsRecord> read_timeseries(const std::string &path);

/// Nodal fields on the meridian plane, z outer and r inner. A path ending in
/// ".vtk" selects a legacy-VTK structured grid instead of CSV.
void write_snapshot(const FieldState<double> &s, const VorticityField<double> &w, const MeridianGrid<double> &g,
                    const std::string &path);

/// offset,w_mag,xi_1,xi_2,xi_3,valid
void write_line_sample(const LineSample &line, const std::string &path);

/// Whole file as a string; IoError when it cannot be opened.
std::string read_text(const std::string &path);
void write_text(const std::string &path, const std::string &text);

} // namespace saddlesim
