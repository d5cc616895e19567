#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "cgof/data.hpp"
#include "cgof/testing.hpp"
#include "cgof/variance.hpp"

namespace cgof {

/// Stable JSON schema for test reports; field names and types are pinned by
/// a golden-file test.
nlohmann::ordered_json report_to_json(const TestReport& report);

nlohmann::ordered_json hajek_to_json(const std::vector<HajekReport>& per_fold,
                                     double mu_hat);
nlohmann::ordered_json stability_to_json(const StabilityReport& report, int n);

/// Parsed CSV input: header names plus numeric cells, comma-separated,
/// '.' decimal, UTF-8, header mandatory.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

/// Holdout file with header x1..xd,y. When label_count > 0 it overrides the
/// inferred count (labels must stay below it); otherwise max(label)+1 is used.
std::shared_ptr<const HoldoutDataset> parse_holdout_csv(const CsvTable& table,
                                                        int label_count = -1);

/// Predictions file with header p0..p{M-1}, one simplex row per holdout row.
std::vector<SimplexVector> parse_predictions_csv(const CsvTable& table,
                                                 int holdout_rows);

}  // namespace cgof
