#include "mpdag/estimate.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "mpdag/error.hpp"

namespace mpdag {

Eigen::Index Dataset::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<Eigen::Index>(i);
  throw EstimationError("data has no column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  Dataset d;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_row(line);
    if (d.columns.empty()) {
      std::set<std::string> seen;
      for (const auto& c : cells) {
        if (c.empty()) throw ParseError(line_no, "empty column name");
        if (!seen.insert(c).second) throw ParseError(line_no, "duplicate column '" + c + "'");
      }
      d.columns = std::move(cells);
      continue;
    }
    if (cells.size() != d.columns.size())
      throw ParseError(line_no, "expected " + std::to_string(d.columns.size()) + " cells, got " +
                                    std::to_string(cells.size()));
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size())
        throw ParseError(line_no, "not a number: '" + c + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (d.columns.empty()) throw ParseError(0, "csv has no header");
  d.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d.columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      d.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return d;
}

Dataset read_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_csv(in);
}

EffectVector gaussian_effect(const IdFormula& f, const Dataset& data,
                             const std::vector<std::string>& xs, const std::string& y) {
  validate(f);
  if (f.response.size() != 1 || *f.response.begin() != y)
    throw EstimationError("estimation needs the formula's response to be exactly '" + y + "'");
  if (NameSet(xs.begin(), xs.end()) != f.intervened || xs.size() != f.intervened.size())
    throw EstimationError("X does not match the formula's intervened set");
  if (data.rows.rows() <= data.rows.cols())
    throw EstimationError("need more rows than columns");

  const auto k = static_cast<Eigen::Index>(xs.size());
  // Each known variable as a linear function of x (intercepts dropped).
  std::map<std::string, Eigen::RowVectorXd> linear;
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(k);
    e(i) = 1.0;
    linear[xs[static_cast<std::size_t>(i)]] = e;
  }

  const Eigen::Index n = data.rows.rows();
  for (const auto& factor : f.factors) {
    const std::vector<std::string> given(factor.given.begin(), factor.given.end());
    const std::vector<std::string> targets(factor.targets.begin(), factor.targets.end());
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(given.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t j = 0; j < given.size(); ++j)
      design.col(static_cast<Eigen::Index>(j) + 1) = data.rows.col(data.column(given[j]));
    Eigen::MatrixXd response(n, static_cast<Eigen::Index>(targets.size()));
    for (std::size_t j = 0; j < targets.size(); ++j)
      response.col(static_cast<Eigen::Index>(j)) = data.rows.col(data.column(targets[j]));

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols())
      throw EstimationError("singular regression design for f(" + targets.front() + " | ...)");
    const Eigen::MatrixXd beta = qr.solve(response);  // (1 + |given|) x |targets|

    for (std::size_t t = 0; t < targets.size(); ++t) {
      Eigen::RowVectorXd lin = Eigen::RowVectorXd::Zero(k);
      for (std::size_t j = 0; j < given.size(); ++j)
        lin += beta(static_cast<Eigen::Index>(j) + 1, static_cast<Eigen::Index>(t)) * linear.at(given[j]);
      linear[targets[t]] = lin;
    }
  }
  return EffectVector{xs, linear.at(y).transpose()};
}

}  // namespace mpdag
