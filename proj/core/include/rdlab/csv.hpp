#pragma once

// CSV persistence for fields, traces and wave profiles. Numbers use the
// shortest representation that round-trips exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rdlab/functionals.hpp"
#include "rdlab/pde_solver.hpp"
#include "rdlab/radial_grid.hpp"

namespace rdlab {

std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// "r,u"
CsvTable field_table(const RadialField& field);
/// "z,u"
CsvTable line_table(const LineField& field);
/// "t,E,dEdt_estimate,dissipation"
CsvTable energy_table(const EnergyTrace& trace);
/// "t,R_<δ>" with one column per tracked δ.
CsvTable front_table(const FrontTrace& trace);

}  // namespace rdlab
