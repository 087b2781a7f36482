#pragma once

#include <string>
#include <vector>

#include "panelfc/evaluation.hpp"
#include "panelfc/experiment.hpp"

namespace panelfc {

// 12 significant digits, locale independent; shared by every emitted file.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

std::string records_to_csv(const std::vector<ForecastRecord>& records);
std::vector<ForecastRecord> records_from_csv(const std::string& path);

std::string dstats_to_csv(const std::vector<ConditioningStat>& stats);
std::vector<ConditioningStat> dstats_from_csv(const std::string& path);

std::string report_to_csv(const EvaluationReport& report);
std::string dm_to_csv(const std::vector<DmResult>& results);
std::string experiment_to_csv(const std::vector<ExperimentRow>& rows);
std::string density_to_csv(const std::vector<std::pair<double, double>>& curve);

// Provenance manifest: command, seed, FNV-1a hash of the config text, flag
// map, artifact version. Deterministic byte output.
std::string manifest_json(const std::string& command, std::uint64_t seed,
                          const std::string& config_text,
                          const std::vector<std::pair<std::string, std::string>>& flags);

}  // namespace panelfc
