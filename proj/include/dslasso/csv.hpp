#pragma once

#include <string>
#include <vector>

#include "dslasso/types.hpp"

namespace dslasso {

/// Reads a comma-separated file with a header row. The named column becomes
/// the response; every other column must be numeric and becomes a predictor
/// (in header order). Throws EmptyFile, MissingColumn, NonNumericCell.
/// Columns listed in drop_columns are ignored before validation.
RegressionData load_csv(const std::string& path, const std::string& response_column,
                        const std::vector<std::string>& drop_columns = {});

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_full(double v);

}  // namespace dslasso
