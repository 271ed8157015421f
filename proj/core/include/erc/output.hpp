// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "erc/discourse.hpp"
#include "erc/metrics.hpp"
#include "erc/stats.hpp"
#include "erc/sweep.hpp"

namespace erc {

std::string_view tool_version();

/// "# config_hash=<hash> tool=erc-lab/<version>"
std::string csv_meta_line(std::string_view config_hash);
/// Fixed-point rendering with `digits` decimals ("%.*f").
std::string format_fixed(double value, int digits = 6);

/// Writes `content` to a temporary sibling, then renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

struct LineSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Minimal standalone SVG line chart. No timestamps, so identical input
/// renders to identical bytes.
std::string render_line_chart(std::string_view title, std::string_view x_label,
                              std::string_view y_label, const std::vector<LineSeries>& series);

nlohmann::json to_json(const stats::StatReport& report);
nlohmann::json to_json(const SeedSummary& summary);
nlohmann::json to_json(const SaturationEntry& entry);
nlohmann::json to_json(const EmotionProfiles& profiles);
nlohmann::json to_json(const HeadlineK& headline);
nlohmann::json to_json(const AblationReport& report);
nlohmann::json to_json(const DmReport& report);

/// Columns: K, seed, wf1, val_wf1, best_epoch, epochs, f1_<class>...
std::string sweep_csv(const SweepResult& sweep, std::string_view config_hash);
/// Parses sweep_csv output back into a SweepResult (metric columns only).
SweepResult parse_sweep_csv(std::string_view text);

std::string ablation_csv(const AblationReport& report, std::string_view config_hash);
std::string occurrences_csv(const DmReport& report, std::string_view config_hash);

/// One line per emotion (per-class mean F1 over seeds) against K.
std::string sweep_svg(const SweepResult& sweep);

}  // namespace erc
