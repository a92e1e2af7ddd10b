#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpce/experiments.hpp"
#include "fracpce/sampling.hpp"

namespace fracpce {

/// Malformed sample file. Rows and columns are 1-based as a spreadsheet shows them.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t row, std::size_t column, const std::string& message);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_, column_;
};

struct SampleTable {
  std::vector<std::string> header;  // empty when the file has none
  Matrix values;
};

/// Comma-separated numbers, one sample per line. A first line with no numeric
/// cell is taken as a header. Blank lines are skipped; every row needs
/// `expected_columns` cells (0: whatever the first row has).
SampleTable read_samples_csv(std::istream& in, std::size_t expected_columns = 0);
SampleTable read_samples_csv(const std::filesystem::path& path, std::size_t expected_columns = 0);

/// Shortest round-trip decimal form; "inf"/"nan" for non-finite values.
std::string format_number(double v);

/// method,n_sim,repetition,seed,epsilon,fit_residual,converged,model_evals,wall_ms
/// With include_timing = false wall_ms is written as 0 so reruns are byte-identical.
void write_results_csv(std::ostream& os, const ConvergenceResult& result, bool include_timing = true);

/// chi,reference_cdf,fitted_cdf,divergence
void write_profile_csv(std::ostream& os, const ErrorProfile& profile);

}  // namespace fracpce
