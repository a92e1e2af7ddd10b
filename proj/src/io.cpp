#include "fracpce/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fracpce {

CsvError::CsvError(std::size_t row, std::size_t column, const std::string& message)
    : std::runtime_error("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + message),
      row_(row),
      column_(column) {}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

SampleTable read_samples_csv(std::istream& in, std::size_t expected_columns) {
  SampleTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      bool any_numeric = false;
      double tmp;
      for (const auto& c : cells) any_numeric = any_numeric || parse_double(c, tmp);
      if (!any_numeric) {
        if (expected_columns != 0 && cells.size() != expected_columns)
          throw CsvError(lineno, std::min(cells.size(), expected_columns) + 1,
                         "header has " + std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(expected_columns));
        table.header = cells;
        if (expected_columns == 0) expected_columns = cells.size();
        continue;
      }
    }
    if (expected_columns == 0) expected_columns = cells.size();
    if (cells.size() != expected_columns)
      throw CsvError(lineno, std::min(cells.size(), expected_columns) + 1,
                     "expected " + std::to_string(expected_columns) + " columns, found " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_double(cells[j], row[j]))
        throw CsvError(lineno, j + 1, "'" + cells[j] + "' is not a number");
      if (!std::isfinite(row[j])) throw CsvError(lineno, j + 1, "value is not finite");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(lineno == 0 ? 1 : lineno, 1, "no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(expected_columns));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < expected_columns; ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

SampleTable read_samples_csv(const std::filesystem::path& path, std::size_t expected_columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_samples_csv(in, expected_columns);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

void write_results_csv(std::ostream& os, const ConvergenceResult& result, bool include_timing) {
  os << "method,n_sim,repetition,seed,epsilon,fit_residual,converged,model_evals,wall_ms\n";
  for (const auto& r : result.rows) {
    os << to_string(r.method) << ',' << r.n_sim << ',' << r.repetition << ',' << r.seed << ','
       << format_number(r.epsilon) << ',' << format_number(r.fit_residual) << ',' << (r.converged ? 1 : 0) << ','
       << r.model_evals << ',' << (include_timing ? format_number(std::round(r.wall_ms * 1000.0) / 1000.0) : "0")
       << '\n';
  }
}

void write_profile_csv(std::ostream& os, const ErrorProfile& p) {
  os << "chi,reference_cdf,fitted_cdf,divergence\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    os << format_number(p.grid[i]) << ',' << format_number(p.reference[i]) << ',' << format_number(p.approx[i]) << ','
       << format_number(p.divergence[i]) << '\n';
}

}  // namespace fracpce
