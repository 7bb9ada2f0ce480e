#include "rdlab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rdlab/errors.hpp"

namespace rdlab {

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw NumericalAbort("format_double failed");
  return {buf, end};
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t j = 0; j < table.header.size(); ++j) os << (j ? "," : "") << table.header[j];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(row[j]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_csv(os, table);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) return t;
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      double x = 0.0;
      auto [q, ec] = std::from_chars(p, end, x);
      if (ec != std::errc()) throw ConfigError("bad number in " + path.string());
      row.push_back(x);
      p = q < end && *q == ',' ? q + 1 : q;
      if (q == end) break;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable field_table(const RadialField& field) {
  CsvTable t{{"r", "u"}, {}};
  for (std::size_t i = 0; i < field.size(); ++i) t.rows.push_back({field.grid.r(i), field[i]});
  return t;
}

CsvTable line_table(const LineField& field) {
  CsvTable t{{"z", "u"}, {}};
  for (std::size_t j = 0; j < field.size(); ++j) t.rows.push_back({field.z(j), field.values[j]});
  return t;
}

CsvTable energy_table(const EnergyTrace& trace) {
  CsvTable t{{"t", "E", "dEdt_estimate", "dissipation"}, {}};
  const auto d = trace.dEdt_estimate();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    t.rows.push_back({trace.times[k], trace.energies[k], d[k], trace.dissipation[k]});
  }
  return t;
}

CsvTable front_table(const FrontTrace& trace) {
  CsvTable t{{"t"}, {}};
  for (double d : trace.deltas) t.header.push_back("R_" + format_double(d));
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    std::vector<double> row{trace.times[k]};
    for (const auto& col : trace.radii) row.push_back(col[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace rdlab
