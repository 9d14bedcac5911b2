#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "entrate/campaign.hpp"
#include "entrate/config.hpp"
#include "entrate/matrix_io.hpp"
#include "entrate/report.hpp"
#include "entrate/seeds.hpp"
#include "oracles.hpp"

using namespace entrate;
using nlohmann::json;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.d_s = 2;
  cfg.d_b = 8;
  cfg.trials = 6;
  cfg.samples = 64;
  cfg.horizon = Horizon::finite(5.0);
  cfg.master_seed = 99;
  cfg.workers = 2;
  return cfg;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\":") != std::string::npos) continue;
    out += line + "\n";
  }
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("entrate_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config defaults and JSON parsing") {
  const ExperimentConfig d = config_from_json(json::object());
  CHECK(d.model == "random");
  CHECK(d.samples == 256);
  CHECK(d.eta == 0.2);
  CHECK_FALSE(d.tol_degeneracy.has_value());
  CHECK(d.entropy_floor == 1e-12);
  CHECK_FALSE(d.horizon.infinite);

  const ExperimentConfig c = config_from_json(json::parse(
      R"({"d_s": 2, "d_b": 32, "horizon": "inf", "eta": 0.1, "trials": 7, "tol_gap": 1e-8, "deltas": [0.5, 1.0]})"));
  CHECK(c.d_b == 32);
  CHECK(c.horizon.infinite);
  CHECK(c.trials == 7);
  CHECK(*c.tol_gap == 1e-8);
  CHECK(c.deltas == std::vector<double>{0.5, 1.0});
  CHECK(config_from_json(json::parse(R"({"horizon": 12.5})")).horizon.value == 12.5);

  CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"d_x": 2})")), doctest::Contains("unknown config key"),
                       ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"d_s": "two"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"horizon": "soon"})")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config validation") {
  auto invalid = [](auto mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  invalid([](ExperimentConfig& c) { c.d_s = 1; });
  invalid([](ExperimentConfig& c) { c.trials = 0; });
  invalid([](ExperimentConfig& c) { c.samples = 1; });
  invalid([](ExperimentConfig& c) { c.eta = -0.1; });
  invalid([](ExperimentConfig& c) { c.model = "magic"; });
  invalid([](ExperimentConfig& c) { c.model = "diagonal"; });
  invalid([](ExperimentConfig& c) { c.model = "file"; });
  invalid([](ExperimentConfig& c) { c.tol_gap = 0.0; });
  invalid([](ExperimentConfig& c) { c.deltas = {1.0, -1.0}; });
  invalid([](ExperimentConfig& c) { c.d_b_list = {8, 1}; });
  invalid([](ExperimentConfig& c) { c.subspace = "half"; });
  invalid([](ExperimentConfig& c) { c.horizon = Horizon::finite(0.0); });
  ExperimentConfig ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("parse_horizon") {
  CHECK(parse_horizon("inf").infinite);
  CHECK(parse_horizon("infinity").infinite);
  CHECK(parse_horizon("10").value == 10.0);
  CHECK(parse_horizon("2.5e1").value == 25.0);
  CHECK_THROWS_AS(parse_horizon("0"), ConfigError);
  CHECK_THROWS_AS(parse_horizon("-3"), ConfigError);
  CHECK_THROWS_AS(parse_horizon("10s"), ConfigError);
}

TEST_CASE("config echo round trip") {
  ExperimentConfig cfg = small_config();
  cfg.tol_degeneracy = 1e-7;
  cfg.deltas = {0.25};
  json echo = config_to_json(cfg);
  CHECK(echo.at("tol_gap") == "1e-9*spread");
  CHECK(echo.contains("units"));
  CHECK_FALSE(echo.contains("workers"));
  echo.erase("tol_gap");
  const ExperimentConfig back = config_from_json(echo);
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, SeedStream::Trials, 5) == derive_seed(1, SeedStream::Trials, 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t m : {1u, 2u})
    for (auto s : {SeedStream::Trials, SeedStream::Hamiltonian, SeedStream::Observable})
      for (std::uint64_t i = 0; i < 100; ++i) seen.insert(derive_seed(m, s, i));
  CHECK(seen.size() == 600);
}

TEST_CASE("run_trials keeps index order and isolates faults") {
  for (unsigned workers : {1u, 3u, 8u}) {
    const auto recs = run_trials(20, workers, [](Index i) {
      if (i == 7) throw Error("trial seven exploded");
      TrialRecord r;
      r.d_eff = static_cast<double>(i) * 0.5;
      return r;
    });
    REQUIRE(recs.size() == 20);
    for (Index i = 0; i < 20; ++i) {
      CHECK(recs[static_cast<std::size_t>(i)].trial == i);
      if (i == 7) {
        CHECK_FALSE(recs[7].ok);
        CHECK(recs[7].failure == "trial seven exploded");
      } else {
        CHECK(recs[static_cast<std::size_t>(i)].ok);
        CHECK(*recs[static_cast<std::size_t>(i)].d_eff == 0.5 * static_cast<double>(i));
      }
    }
  }
}

TEST_CASE("spectrum analysis examples") {
  ExperimentConfig cfg;
  cfg.model = "diagonal";
  cfg.d_s = 2;
  cfg.d_b = 2;
  cfg.energies = {0, 1, 3, 7};
  cfg.deltas = {0.5, 1.5};
  const CampaignReport r = run_spectrum_analysis(cfg);
  REQUIRE(r.spectra.size() == 1);
  const SpectrumSummary& s = r.spectra[0];
  CHECK(s.n_delta == std::vector<Index>{1, 2});
  CHECK(oracle::brute_force_n_delta(cfg.energies, 1.5) == 2);
  CHECK(s.d_gap == 1);
  CHECK(s.nonresonant);
  CHECK(r.aggregates.at("spectrum").at("gap_count") == 12);
  CHECK(r.aggregates.at("spectrum").at("gap_count_expected") == 12);
  CHECK_FALSE(r.violations_found());

  cfg.energies = {0, 1, 2, 2};
  const CampaignReport e = run_spectrum_analysis(cfg);
  CHECK_FALSE(e.spectra[0].nonresonant);
  CHECK(e.spectra[0].d_e == 3);

  cfg.energies = {0, 0, 0, 0};
  CHECK_THROWS_WITH_AS(run_spectrum_analysis(cfg), doctest::Contains("gapless spectrum"), Error);
  cfg.energies = {0, 1, 2};
  CHECK_THROWS_WITH_AS(run_spectrum_analysis(cfg), doctest::Contains("dimension mismatch"), Error);
}

TEST_CASE("spectrum analysis from Hamiltonian files") {
  const auto dir = scratch_dir("files");
  std::filesystem::create_directories(dir);
  CMatrix hs = CMatrix::Zero(2, 2);
  hs(0, 0) = 1.0;
  hs(1, 1) = -1.0;
  io::save_matrix((dir / "hs.txt").string(), hs);
  io::save_matrix((dir / "hb.txt").string(), CMatrix::Zero(2, 2));
  io::save_matrix((dir / "hint.txt").string(), CMatrix::Zero(4, 4));
  ExperimentConfig cfg;
  cfg.model = "file";
  cfg.d_s = 2;
  cfg.d_b = 2;
  cfg.h_s_file = (dir / "hs.txt").string();
  cfg.h_b_file = (dir / "hb.txt").string();
  cfg.h_int_file = (dir / "hint.txt").string();
  const CampaignReport r = run_spectrum_analysis(cfg);
  CHECK(r.spectra[0].energies == std::vector<double>{-1.0, 1.0});
  CHECK(r.spectra[0].degeneracies == std::vector<Index>{2, 2});
  CHECK(r.spectra[0].h_eff == doctest::Approx(1.0));

  CMatrix bad = CMatrix::Zero(4, 4);
  bad(0, 1) = 1.0;
  io::save_matrix((dir / "hint.txt").string(), bad);
  CHECK_THROWS_WITH_AS(run_spectrum_analysis(cfg), doctest::Contains("non-Hermitian part"), Error);
  cfg.h_int_file = (dir / "missing.txt").string();
  CHECK_THROWS_AS(run_spectrum_analysis(cfg), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("lemma 2 campaign") {
  const CampaignReport r = run_lemma2_campaign(small_config());
  REQUIRE(r.records.size() == 6);
  CHECK(r.aggregates.at("violations") == 0);
  CHECK_FALSE(r.violations_found());
  for (const auto& rec : r.records) {
    CHECK(rec.ok);
    CHECK(*rec.lemma2_holds);
    CHECK(*rec.lhs_lemma2 <= *rec.rhs_lemma2);
  }

  ExperimentConfig ground = small_config();
  ground.initial_state = "ground";
  const CampaignReport g = run_lemma2_campaign(ground);
  for (const auto& rec : g.records) {
    CHECK(*rec.lhs_lemma2 <= 1e-12);
    CHECK(*rec.d_eff == doctest::Approx(1.0));
  }

  ExperimentConfig inf = small_config();
  inf.horizon = Horizon::unbounded();
  inf.measure_horizon = 5.0;
  const CampaignReport i = run_lemma2_campaign(inf);
  CHECK_FALSE(i.violations_found());
  CHECK(std::any_of(i.notes.begin(), i.notes.end(), [](const std::string& n) { return n.find("infinite horizon") != std::string::npos; }));
}

TEST_CASE("a trial that fails is recorded without aborting the campaign") {
  ExperimentConfig cfg = small_config();
  cfg.initial_state = "/nonexistent/state.txt";
  const CampaignReport r = run_lemma2_campaign(cfg);
  REQUIRE(r.records.size() == 6);
  for (const auto& rec : r.records) {
    CHECK_FALSE(rec.ok);
    CHECK(rec.failure.find("cannot open state file") != std::string::npos);
  }
  CHECK(r.aggregates.at("failed") == 6);
  CHECK(std::any_of(r.notes.begin(), r.notes.end(), [](const std::string& n) { return n.find("failed") != std::string::npos; }));
}

TEST_CASE("initial state from a file") {
  const auto dir = scratch_dir("state");
  std::filesystem::create_directories(dir);
  const QuantumState s = haar_random_state(SubspaceProjector::full(16), 5, Dims{2, 8});
  save_state((dir / "psi.txt").string(), s);
  ExperimentConfig cfg = small_config();
  cfg.trials = 2;
  cfg.initial_state = (dir / "psi.txt").string();
  const CampaignReport r = run_lemma2_campaign(cfg);
  CHECK(r.records[0].ok);
  CHECK(*r.records[0].lhs_lemma2 == *r.records[1].lhs_lemma2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("lemma 1 campaign") {
  ExperimentConfig cfg = small_config();
  const CampaignReport r = run_lemma1_campaign(cfg);
  CHECK_FALSE(r.violations_found());
  REQUIRE(r.spectra[0].deltas.size() == 5);
  for (const auto& rec : r.records) {
    REQUIRE(rec.lemma1.size() == 2);
    CHECK(rec.lemma1[0].name == "system_z");
    CHECK(rec.lemma1[0].norm_prime == doctest::Approx(1.0));
    CHECK(rec.lemma1[1].rhs_gap_window.size() == 5);
    CHECK(*rec.lemma1_holds);
  }
}

TEST_CASE("theorem 1 campaign") {
  ExperimentConfig cfg = small_config();
  cfg.d_b = 32;
  cfg.eta = 0.1;
  cfg.samples = 32;
  cfg.trials = 3;
  const CampaignReport r = run_theorem1_campaign(cfg);
  CHECK(r.aggregates.at("vacuous") == true);
  CHECK(r.aggregates.at("epsilon").get<double>() == doctest::Approx(1.9215788783046464));
  CHECK(std::any_of(r.notes.begin(), r.notes.end(), [](const std::string& n) { return n.find("vacuous bound") != std::string::npos; }));
  CHECK(r.aggregates.at("eta_admissible") == true);

  cfg.d_b = 16;
  cfg.eta = 0.2;
  const CampaignReport e = run_theorem1_campaign(cfg);
  CHECK(e.aggregates.at("eta_admissible") == false);
  CHECK(std::any_of(e.notes.begin(), e.notes.end(), [](const std::string& n) { return n.find("eta inadmissible") != std::string::npos; }));

  cfg.d_s = 3;
  CHECK_THROWS_WITH_AS(run_theorem1_campaign(cfg), doctest::Contains("d_S^3 = 27 > d_B = 16"), ConfigError);
}

TEST_CASE("levy campaign") {
  ExperimentConfig cfg = small_config();
  cfg.d_b = 512;
  cfg.eta = 0.3;
  cfg.trials = 50;
  const CampaignReport r = run_levy_campaign(cfg);
  CHECK(r.aggregates.at("levy_rhs").get<double>() == doctest::Approx(0.006302223196888883));
  CHECK(r.aggregates.at("event_count") == 0);
  CHECK_FALSE(r.violations_found());
}

TEST_CASE("ensemble campaign") {
  ExperimentConfig cfg = small_config();
  cfg.trials = 400;
  cfg.measure_rate = false;
  const CampaignReport r = run_ensemble_average_campaign(cfg);
  CHECK(r.aggregates.at("inv_deff_exact").get<double>() == doctest::Approx(2.0 / 17.0));
  CHECK(r.aggregates.at("exact_le_bound") == true);
  CHECK(r.aggregates.contains("z_score"));
  CHECK_FALSE(r.aggregates.contains("eq25_rhs"));

  ExperimentConfig deg = small_config();
  deg.model = "diagonal";
  deg.d_b = 4;
  deg.energies = {0, 1, 3, 7, 0, 1, 3, 7};
  deg.trials = 4;
  deg.samples = 16;
  const CampaignReport d = run_ensemble_average_campaign(deg);
  CHECK(d.spectra[0].d_g == 2);
  CHECK(d.aggregates.at("inv_deff_exact").get<double>() == doctest::Approx(4.0 * 6.0 / 72.0));
  CHECK_FALSE(d.aggregates.contains("eq26_rhs"));
  CHECK(std::any_of(d.notes.begin(), d.notes.end(), [](const std::string& n) { return n.find("eq26 comparison skipped") != std::string::npos; }));
  CHECK(std::any_of(d.notes.begin(), d.notes.end(), [](const std::string& n) { return n.find("eq25 comparison skipped") != std::string::npos; }));
}

TEST_CASE("d_B sweep") {
  ExperimentConfig cfg = small_config();
  cfg.d_b_list = {8, 16, 32};
  cfg.trials = 3;
  cfg.samples = 32;
  const CampaignReport r = run_db_scaling_sweep(cfg);
  REQUIRE(r.spectra.size() == 3);
  REQUIRE(r.records.size() == 9);
  CHECK(r.records[4].system == 1);
  CHECK(r.records[4].trial == 1);
  const json& rows = r.aggregates.at("rows");
  REQUIRE(rows.size() == 3);
  CHECK(r.aggregates.at("eq26_over_h_halves_per_doubling") == true);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].at("eq26_over_h").get<double>() == 0.5 * rows[k - 1].at("eq26_over_h").get<double>());
  }
  const auto files = columnar_report(r);
  CHECK(std::any_of(files.begin(), files.end(), [](const auto& f) { return f.first == "sweep.csv"; }));

  cfg.d_b_list.clear();
  CHECK_THROWS_WITH_AS(run_db_scaling_sweep(cfg), doctest::Contains("d_b_list"), ConfigError);
}

TEST_CASE("structured report round trip reproduces the aggregates bit for bit") {
  ExperimentConfig cfg = small_config();
  for (auto run : {run_lemma2_campaign, run_lemma1_campaign, run_theorem1_campaign}) {
    cfg.d_b = 8;
    const CampaignReport r = run(cfg);
    const json j = report_to_json(r, "T");
    const CampaignReport back = report_from_json(json::parse(j.dump(2)));
    CHECK(back.aggregates == r.aggregates);
    CHECK(compute_aggregates(back) == r.aggregates);
    CHECK(report_to_json(back, "T") == j);
  }
}

TEST_CASE("identical configs give byte-identical structured reports") {
  ExperimentConfig a = small_config();
  a.workers = 1;
  ExperimentConfig b = small_config();
  b.workers = 4;
  const CampaignReport ra = run_theorem1_campaign(a);
  const CampaignReport rb = run_theorem1_campaign(b);
  CHECK(structured_report(ra, "fixed") == structured_report(rb, "fixed"));

  const auto da = scratch_dir("det_a");
  const auto db = scratch_dir("det_b");
  emit_report(ra, da.string(), ReportFormat::Both);
  emit_report(rb, db.string(), ReportFormat::Both);
  for (const auto& entry : std::filesystem::directory_iterator(da)) {
    const auto name = entry.path().filename();
    const std::string x = read_file(entry.path());
    const std::string y = read_file(db / name);
    if (name.extension() == ".json") {
      CHECK(without_timestamp(x) == without_timestamp(y));
      CHECK(x.find("\"timestamp\": \"") != std::string::npos);
    } else {
      CHECK(x == y);
    }
  }
  std::filesystem::remove_all(da);
  std::filesystem::remove_all(db);

  ExperimentConfig c = small_config();
  c.master_seed = 100;
  CHECK(structured_report(run_theorem1_campaign(c), "fixed") != structured_report(ra, "fixed"));
}

TEST_CASE("empty campaign writes header-only tables") {
  CampaignReport empty;
  empty.campaign = "lemma2";
  empty.aggregates = compute_aggregates(empty);
  CHECK(empty.aggregates.at("trials") == 0);
  CHECK_FALSE(empty.violations_found());
  for (const auto& [name, content] : columnar_report(empty)) {
    CHECK(std::count(content.begin(), content.end(), '\n') == 1);
    CHECK(content.find(',') != std::string::npos);
  }
  const auto dir = scratch_dir("empty");
  const auto written = emit_report(empty, dir.string(), ReportFormat::Columnar);
  CHECK(written.size() == 5);
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit_report reports unwritable paths") {
  const auto dir = scratch_dir("blocked");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  CampaignReport empty;
  empty.campaign = "lemma2";
  CHECK_THROWS_WITH_AS(emit_report(empty, (dir / "file" / "sub").string(), ReportFormat::Both),
                       doctest::Contains("unwritable output path"), Error);
  std::filesystem::remove_all(dir);
}
