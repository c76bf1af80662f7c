#include "dslasso/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dslasso {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace and quotes
    auto b = field.find_first_not_of(" \t\r\"");
    auto e = field.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

RegressionData load_csv(const std::string& path, const std::string& response_column,
                        const std::vector<std::string>& drop_columns) {
  std::ifstream in(path);
  if (!in) throw EmptyFile("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyFile("empty file: " + path);
  const std::vector<std::string> header = split_line(line);
  if (header.empty()) throw EmptyFile("empty header: " + path);

  auto dropped = [&](const std::string& name) {
    return std::find(drop_columns.begin(), drop_columns.end(), name) != drop_columns.end();
  };

  int response_idx = -1;
  std::vector<int> predictor_idx;
  std::vector<std::string> predictor_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == response_column) {
      response_idx = static_cast<int>(j);
    } else if (!dropped(header[j])) {
      predictor_idx.push_back(static_cast<int>(j));
      predictor_names.push_back(header[j]);
    }
  }
  if (response_idx < 0) throw MissingColumn(response_column);

  std::vector<std::vector<double>> rows;
  std::vector<double> yvals;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row_no;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw InvalidArgument("row " + std::to_string(row_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    double v;
    if (!parse_double(cells[response_idx], v))
      throw NonNumericCell(row_no, response_column, cells[response_idx]);
    yvals.push_back(v);
    std::vector<double> xr(predictor_idx.size());
    for (std::size_t k = 0; k < predictor_idx.size(); ++k) {
      if (!parse_double(cells[predictor_idx[k]], xr[k]))
        throw NonNumericCell(row_no, predictor_names[k], cells[predictor_idx[k]]);
    }
    rows.push_back(std::move(xr));
  }
  if (rows.empty()) throw EmptyFile("no data rows in " + path);

  MatrixXd X(rows.size(), predictor_idx.size());
  VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = yvals[i];
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  RegressionData d = RegressionData::make(std::move(X), std::move(y));
  d.column_names = predictor_names;
  d.response_name = response_column;
  return d;
}

std::string format_full(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace dslasso
