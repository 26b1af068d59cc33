#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dst/design.hpp"
#include "dst/dynamics.hpp"
#include "dst/measures.hpp"

namespace dst::io {

using nlohmann::json;

// Flat records, one JSON object per line. phi_ss is a number or "inf".
json to_json(const MeasureReport& r);
json to_json(const DesignResult& r);
json to_json(const RunSummary& s);

// Scenario document; "graph" is either {"n":..,"edges":[[i,j,w],..]} or a
// path to a graph text file, resolved against base_dir.
DstScenario parse_scenario(const json& doc, const std::filesystem::path& base_dir);
DstScenario read_scenario_file(const std::filesystem::path& path);

MeasureCase parse_case(std::string_view s);
const char* to_string(MeasureCase c);

// "iid:SIGMA", "indep:S1,S2,..." or "file:PATH" (n x n covariance, one row
// per line).
NoiseModel parse_noise(std::string_view spec, bool gamma_scaling);

// Header: k,x_0..x_{n-1},r_0..,a_0..,r_total,a_total,a_ideal
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

// Long format k,series,value for r_total, l_total, a_total and a_ideal.
void write_plot_data(std::ostream& out, const Trajectory& t);

// %.17g
std::string format_double(double v);

}  // namespace dst::io
