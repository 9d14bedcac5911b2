#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "entrate/campaign.hpp"

namespace entrate {

enum class ReportFormat { Columnar, Structured, Both };

/// Structured form. The only run-dependent content (wall clock and start
/// time) sits in the single-line "timestamp" string.
nlohmann::json report_to_json(const CampaignReport& report, const std::string& timestamp);
CampaignReport report_from_json(const nlohmann::json& j);

/// Serialized structured report, deterministic apart from the timestamp line.
std::string structured_report(const CampaignReport& report, const std::string& timestamp);

/// CSV tables: trials.csv, lemma1.csv, spectrum.csv, gaps.csv, n_delta.csv
/// and, for sweeps, sweep.csv. Returns name -> file contents.
std::vector<std::pair<std::string, std::string>> columnar_report(const CampaignReport& report);

/// Writes the selected formats into `dir` (created if needed) and returns
/// the written paths. Throws entrate::Error if the directory is unwritable.
std::vector<std::string> emit_report(const CampaignReport& report, const std::string& dir, ReportFormat format);

/// "2026-10-15T12:00:00Z wall_clock_s=1.25"
std::string make_timestamp(double wall_clock_seconds);

}  // namespace entrate
