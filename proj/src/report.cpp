#include "entrate/report.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace entrate {

using nlohmann::json;

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
void get_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

json summary_to_json(const SpectrumSummary& s) {
  return {{"d_s", s.d_s},
          {"d_b", s.d_b},
          {"hamiltonian_seed", s.hamiltonian_seed},
          {"d_e", s.d_e},
          {"d_g", s.d_g},
          {"d_gap", s.d_gap},
          {"delta_min", s.delta_min},
          {"nonresonant", s.nonresonant},
          {"nondegenerate", s.nondegenerate},
          {"h_eff", s.h_eff},
          {"grouping_tol", s.grouping_tol},
          {"gap_merge_tol", s.gap_merge_tol},
          {"ambiguous_clusters", s.ambiguous_clusters},
          {"d_r", s.d_r},
          {"inv_deff_exact", s.inv_deff_exact},
          {"inv_deff_bound", s.inv_deff_bound},
          {"energies", s.energies},
          {"degeneracies", s.degeneracies},
          {"gap_values", s.gap_values},
          {"gap_degens", s.gap_degens},
          {"deltas", s.deltas},
          {"n_delta", s.n_delta}};
}

SpectrumSummary summary_from_json(const json& j) {
  SpectrumSummary s;
  j.at("d_s").get_to(s.d_s);
  j.at("d_b").get_to(s.d_b);
  j.at("hamiltonian_seed").get_to(s.hamiltonian_seed);
  j.at("d_e").get_to(s.d_e);
  j.at("d_g").get_to(s.d_g);
  j.at("d_gap").get_to(s.d_gap);
  j.at("delta_min").get_to(s.delta_min);
  j.at("nonresonant").get_to(s.nonresonant);
  j.at("nondegenerate").get_to(s.nondegenerate);
  j.at("h_eff").get_to(s.h_eff);
  j.at("grouping_tol").get_to(s.grouping_tol);
  j.at("gap_merge_tol").get_to(s.gap_merge_tol);
  j.at("ambiguous_clusters").get_to(s.ambiguous_clusters);
  j.at("d_r").get_to(s.d_r);
  j.at("inv_deff_exact").get_to(s.inv_deff_exact);
  j.at("inv_deff_bound").get_to(s.inv_deff_bound);
  j.at("energies").get_to(s.energies);
  j.at("degeneracies").get_to(s.degeneracies);
  j.at("gap_values").get_to(s.gap_values);
  j.at("gap_degens").get_to(s.gap_degens);
  j.at("deltas").get_to(s.deltas);
  j.at("n_delta").get_to(s.n_delta);
  return s;
}

json record_to_json(const TrialRecord& r) {
  json lemma1 = json::array();
  for (const auto& o : r.lemma1) {
    lemma1.push_back({{"name", o.name},
                      {"norm_prime", o.norm_prime},
                      {"lhs", o.lhs},
                      {"rhs_gap_degeneracy", o.rhs_gap_degeneracy},
                      {"rhs_gap_window", o.rhs_gap_window},
                      {"holds", o.holds}});
  }
  return {{"trial", r.trial},
          {"system", r.system},
          {"seed", r.seed},
          {"ok", r.ok},
          {"failure", r.failure},
          {"d_eff", opt(r.d_eff)},
          {"lhs_lemma2", opt(r.lhs_lemma2)},
          {"rhs_lemma2", opt(r.rhs_lemma2)},
          {"lemma2_quadrature_change", opt(r.lemma2_quadrature_change)},
          {"lemma2_holds", opt(r.lemma2_holds)},
          {"lemma1", lemma1},
          {"lemma1_holds", opt(r.lemma1_holds)},
          {"lhs_theorem1", opt(r.lhs_theorem1)},
          {"near_singular_fraction", opt(r.near_singular_fraction)},
          {"theorem1_quadrature_change", opt(r.theorem1_quadrature_change)},
          {"delta", opt(r.delta)},
          {"epsilon", opt(r.epsilon)},
          {"theorem1_exceeds", opt(r.theorem1_exceeds)},
          {"trace_distance_initial", opt(r.trace_distance_initial)},
          {"trace_distance_max", opt(r.trace_distance_max)},
          {"trace_distance_mean", opt(r.trace_distance_mean)},
          {"premise_failure_fraction", opt(r.premise_failure_fraction)},
          {"levy_event", opt(r.levy_event)}};
}

TrialRecord record_from_json(const json& j) {
  TrialRecord r;
  j.at("trial").get_to(r.trial);
  j.at("system").get_to(r.system);
  j.at("seed").get_to(r.seed);
  j.at("ok").get_to(r.ok);
  j.at("failure").get_to(r.failure);
  get_opt(j, "d_eff", r.d_eff);
  get_opt(j, "lhs_lemma2", r.lhs_lemma2);
  get_opt(j, "rhs_lemma2", r.rhs_lemma2);
  get_opt(j, "lemma2_quadrature_change", r.lemma2_quadrature_change);
  get_opt(j, "lemma2_holds", r.lemma2_holds);
  for (const auto& o : j.at("lemma1")) {
    ObservableRecord rec;
    o.at("name").get_to(rec.name);
    o.at("norm_prime").get_to(rec.norm_prime);
    o.at("lhs").get_to(rec.lhs);
    o.at("rhs_gap_degeneracy").get_to(rec.rhs_gap_degeneracy);
    o.at("rhs_gap_window").get_to(rec.rhs_gap_window);
    o.at("holds").get_to(rec.holds);
    r.lemma1.push_back(std::move(rec));
  }
  get_opt(j, "lemma1_holds", r.lemma1_holds);
  get_opt(j, "lhs_theorem1", r.lhs_theorem1);
  get_opt(j, "near_singular_fraction", r.near_singular_fraction);
  get_opt(j, "theorem1_quadrature_change", r.theorem1_quadrature_change);
  get_opt(j, "delta", r.delta);
  get_opt(j, "epsilon", r.epsilon);
  get_opt(j, "theorem1_exceeds", r.theorem1_exceeds);
  get_opt(j, "trace_distance_initial", r.trace_distance_initial);
  get_opt(j, "trace_distance_max", r.trace_distance_max);
  get_opt(j, "trace_distance_mean", r.trace_distance_mean);
  get_opt(j, "premise_failure_fraction", r.premise_failure_fraction);
  get_opt(j, "levy_event", r.levy_event);
  return r;
}

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string cell(const std::optional<double>& v) { return v ? num(*v) : std::string(); }
std::string cell(const std::optional<bool>& v) { return v ? (*v ? "1" : "0") : std::string(); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return num(v.get<double>());
  return v.dump();
}

}  // namespace

std::string make_timestamp(double wall_clock_seconds) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string(buf) + " wall_clock_s=" + num(wall_clock_seconds);
}

json report_to_json(const CampaignReport& report, const std::string& timestamp) {
  json spectra = json::array();
  for (const auto& s : report.spectra) spectra.push_back(summary_to_json(s));
  json records = json::array();
  for (const auto& r : report.records) records.push_back(record_to_json(r));
  return {{"campaign", report.campaign},
          {"software", {{"name", "entrate"}, {"version", ENTRATE_VERSION}}},
          {"timestamp", timestamp},
          {"config", config_to_json(report.config)},
          {"spectra", spectra},
          {"records", records},
          {"aggregates", report.aggregates},
          {"notes", report.notes}};
}

CampaignReport report_from_json(const json& j) {
  CampaignReport r;
  j.at("campaign").get_to(r.campaign);
  json cfg = j.at("config");
  // The echo spells default tolerances as strings.
  for (const char* key : {"tol_degeneracy", "tol_gap"}) {
    if (cfg.contains(key) && cfg[key].is_string()) cfg.erase(key);
  }
  r.config = config_from_json(cfg);
  for (const auto& s : j.at("spectra")) r.spectra.push_back(summary_from_json(s));
  for (const auto& rec : j.at("records")) r.records.push_back(record_from_json(rec));
  r.aggregates = j.at("aggregates");
  j.at("notes").get_to(r.notes);
  return r;
}

std::string structured_report(const CampaignReport& report, const std::string& timestamp) {
  return report_to_json(report, timestamp).dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> columnar_report(const CampaignReport& report) {
  std::vector<std::pair<std::string, std::string>> files;

  std::ostringstream trials;
  trials << "trial,system,seed,ok,d_eff,lhs_lemma2,rhs_lemma2,lemma2_holds,lemma2_quadrature_change,"
            "lemma1_holds,lhs_thm1,near_singular_fraction,delta,epsilon,thm1_exceeds,thm1_quadrature_change,"
            "trace_distance_initial,trace_distance_max,trace_distance_mean,premise_failure_fraction,levy_event,"
            "failure\n";
  for (const auto& r : report.records) {
    trials << r.trial << ',' << r.system << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',' << cell(r.d_eff) << ','
           << cell(r.lhs_lemma2) << ',' << cell(r.rhs_lemma2) << ',' << cell(r.lemma2_holds) << ','
           << cell(r.lemma2_quadrature_change) << ',' << cell(r.lemma1_holds) << ',' << cell(r.lhs_theorem1) << ','
           << cell(r.near_singular_fraction) << ',' << cell(r.delta) << ',' << cell(r.epsilon) << ','
           << cell(r.theorem1_exceeds) << ',' << cell(r.theorem1_quadrature_change) << ','
           << cell(r.trace_distance_initial) << ',' << cell(r.trace_distance_max) << ','
           << cell(r.trace_distance_mean) << ',' << cell(r.premise_failure_fraction) << ',' << cell(r.levy_event)
           << ',' << csv_quote(r.failure) << '\n';
  }
  files.emplace_back("trials.csv", trials.str());

  std::ostringstream lemma1;
  lemma1 << "trial,system,observable,norm_prime,lhs,rhs_gap_degeneracy,window_index,rhs_gap_window,holds\n";
  for (const auto& r : report.records) {
    for (const auto& o : r.lemma1) {
      const std::size_t rows = std::max<std::size_t>(1, o.rhs_gap_window.size());
      for (std::size_t w = 0; w < rows; ++w) {
        lemma1 << r.trial << ',' << r.system << ',' << o.name << ',' << num(o.norm_prime) << ',' << num(o.lhs)
               << ',' << num(o.rhs_gap_degeneracy) << ',';
        if (w < o.rhs_gap_window.size()) {
          lemma1 << w << ',' << num(o.rhs_gap_window[w]);
        } else {
          lemma1 << ',';
        }
        lemma1 << ',' << (o.holds ? 1 : 0) << '\n';
      }
    }
  }
  files.emplace_back("lemma1.csv", lemma1.str());

  std::ostringstream spectrum, gaps, curve;
  spectrum << "system,d_b,n,energy,degeneracy\n";
  gaps << "system,d_b,gap,degeneracy\n";
  curve << "system,d_b,delta,n_delta\n";
  for (std::size_t k = 0; k < report.spectra.size(); ++k) {
    const auto& s = report.spectra[k];
    for (std::size_t n = 0; n < s.energies.size(); ++n) {
      spectrum << k << ',' << s.d_b << ',' << n << ',' << num(s.energies[n]) << ',' << s.degeneracies[n] << '\n';
    }
    for (std::size_t n = 0; n < s.gap_values.size(); ++n) {
      gaps << k << ',' << s.d_b << ',' << num(s.gap_values[n]) << ',' << s.gap_degens[n] << '\n';
    }
    for (std::size_t n = 0; n < s.deltas.size(); ++n) {
      curve << k << ',' << s.d_b << ',' << num(s.deltas[n]) << ',' << s.n_delta[n] << '\n';
    }
  }
  files.emplace_back("spectrum.csv", spectrum.str());
  files.emplace_back("gaps.csv", gaps.str());
  files.emplace_back("n_delta.csv", curve.str());

  if (report.aggregates.contains("rows")) {
    static const char* cols[] = {"d_b",      "h_eff",       "d_gap",     "nonresonant", "mean_lhs_theorem1",
                                 "se_lhs_theorem1", "eq25_rhs", "eq26_rhs", "eq26_over_h", "below_eq25"};
    std::ostringstream sweep;
    for (std::size_t c = 0; c < std::size(cols); ++c) sweep << (c ? "," : "") << cols[c];
    sweep << '\n';
    for (const auto& row : report.aggregates.at("rows")) {
      for (std::size_t c = 0; c < std::size(cols); ++c) sweep << (c ? "," : "") << json_cell(row.value(cols[c], json()));
      sweep << '\n';
    }
    files.emplace_back("sweep.csv", sweep.str());
  }
  return files;
}

std::vector<std::string> emit_report(const CampaignReport& report, const std::string& dir, ReportFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("unwritable output path '" + dir + "': " + ec.message());

  std::vector<std::pair<std::string, std::string>> files;
  if (format != ReportFormat::Columnar) {
    files.emplace_back(report.campaign + "_report.json",
                       structured_report(report, make_timestamp(report.wall_clock_seconds)));
  }
  if (format != ReportFormat::Structured) {
    for (auto& f : columnar_report(report)) files.push_back(std::move(f));
  }
  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) throw Error("unwritable output path '" + path.string() + "'");
    written.push_back(path.string());
  }
  return written;
}

}  // namespace entrate
