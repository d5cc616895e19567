#include "cgof/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cgof {

nlohmann::ordered_json report_to_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.kind == ProcedureKind::Split ? "split" : "cross";
  j["alpha"] = report.alpha;
  j["delta"] = report.delta;
  j["n"] = report.n;
  j["n_eval"] = report.n_eval;
  j["T"] = report.T;
  j["sigma2_hat"] = report.sigma2_hat;
  j["z_stat"] = report.z_stat;
  j["p_value"] = report.p_value;
  j["reject"] = report.reject;
  j["delta_min"] = report.delta_min;
  j["seed"] = report.seed;
  if (!report.per_fold.empty()) {
    auto folds = nlohmann::ordered_json::array();
    for (const FoldDetail& f : report.per_fold) {
      folds.push_back({{"T", f.T}, {"sigma2", f.sigma2}, {"size", f.size}});
    }
    j["per_fold"] = std::move(folds);
  }
  return j;
}

nlohmann::ordered_json hajek_to_json(const std::vector<HajekReport>& per_fold,
                                     double mu_hat) {
  nlohmann::ordered_json j;
  j["mu_hat"] = mu_hat;
  auto arr = nlohmann::ordered_json::array();
  for (const HajekReport& h : per_fold) {
    arr.push_back({{"residual", h.residual}, {"scaled", h.scaled}});
  }
  j["per_fold"] = std::move(arr);
  return j;
}

nlohmann::ordered_json stability_to_json(const StabilityReport& report, int n) {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["count"] = report.deltas.size();
  j["p50"] = report.p50;
  j["p90"] = report.p90;
  j["p99"] = report.p99;
  j["scaled_p99"] = report.scaled_p99;
  return j;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadArgument, "cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::BadHeader, path + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  if (table.header.empty()) fail(ErrorCode::BadHeader, path + ": empty header");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.header.size());
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc() || ptr != comma) {
        fail(ErrorCode::BadArgument,
             path + ": bad numeric cell at line " + std::to_string(line_no));
      }
      row.push_back(v);
      if (comma == end) break;
      p = comma + 1;
    }
    if (row.size() != table.header.size()) {
      fail(ErrorCode::BadArgument,
           path + ": line " + std::to_string(line_no) + " has " +
               std::to_string(row.size()) + " cells, header has " +
               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::shared_ptr<const HoldoutDataset> parse_holdout_csv(const CsvTable& table,
                                                        int label_count) {
  const std::size_t cols = table.header.size();
  if (cols < 2 || table.header.back() != "y") {
    fail(ErrorCode::BadHeader, "data file header must be x1..xd,y");
  }
  for (std::size_t j = 0; j + 1 < cols; ++j) {
    if (table.header[j] != "x" + std::to_string(j + 1)) {
      fail(ErrorCode::BadHeader, "data file header must be x1..xd,y (got '" +
                                     table.header[j] + "' at column " +
                                     std::to_string(j + 1) + ")");
    }
  }
  if (table.rows.empty()) fail(ErrorCode::BadArgument, "data file has no rows");

  const int n = static_cast<int>(table.rows.size());
  const int d = static_cast<int>(cols) - 1;
  RowMatrix features(n, d);
  std::vector<int> labels(static_cast<std::size_t>(n));
  int max_label = 0;
  for (int i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j) features(i, j) = row[static_cast<std::size_t>(j)];
    const double y = row[static_cast<std::size_t>(d)];
    if (y != std::floor(y) || y < 0) {
      fail(ErrorCode::BadArgument,
           "label at row " + std::to_string(i + 1) + " is not a nonnegative integer");
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(y);
    max_label = std::max(max_label, static_cast<int>(y));
  }
  if (label_count > 0 && max_label >= label_count) {
    fail(ErrorCode::BadArgument, "label " + std::to_string(max_label) +
                                     " has no prediction column (M = " +
                                     std::to_string(label_count) + ")");
  }
  const int m = label_count > 0 ? label_count : std::max(2, max_label + 1);
  return std::make_shared<HoldoutDataset>(std::move(features), std::move(labels), m);
}

std::vector<SimplexVector> parse_predictions_csv(const CsvTable& table,
                                                 int holdout_rows) {
  const std::size_t m = table.header.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (table.header[k] != "p" + std::to_string(k)) {
      fail(ErrorCode::BadHeader, "predictions header must be p0..p{M-1} (got '" +
                                     table.header[k] + "' at column " +
                                     std::to_string(k + 1) + ")");
    }
  }
  if (static_cast<int>(table.rows.size()) != holdout_rows) {
    fail(ErrorCode::RowCountMismatch,
         "predictions file has " + std::to_string(table.rows.size()) +
             " rows, holdout has " + std::to_string(holdout_rows));
  }
  std::vector<SimplexVector> preds;
  preds.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    preds.push_back(validate_simplex(row, static_cast<int>(m)));
  }
  return preds;
}

}  // namespace cgof
