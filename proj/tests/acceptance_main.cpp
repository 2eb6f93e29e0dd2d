// Acceptance suite: one checker per criterion, each printing a PASS/FAIL
// line. Runs fully offline; the pipeline criteria drive the mock provider
// and the CLI binary passed via --cli.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "fixread/analysis.hpp"
#include "fixread/bundle.hpp"
#include "fixread/classify.hpp"
#include "fixread/csv.hpp"
#include "fixread/features.hpp"
#include "fixread/labeling.hpp"
#include "fixread/parallel.hpp"
#include "fixread/rng.hpp"
#include "fixread/synth.hpp"
#include "fixread/tokenize.hpp"

namespace fs = std::filesystem;
using namespace fixread;

namespace {

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_near(double actual, double expected, double tol, const std::string& what) {
    if (!(std::abs(actual - expected) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.10g, want %.10g +/- %.3g",
                    what.c_str(), actual, expected, tol);
      failures.push_back(buf);
    }
  }
};

std::string g_golden_dir;
std::string g_cli_path;
bool g_write_golden = false;

fs::path scratch_dir() {
  static fs::path dir = [] {
    auto p = fs::temp_directory_path() / "fixread_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::vector<double> sine(double freq_hz, int samples, double rate = 500.0) {
  std::vector<double> x(samples);
  for (int t = 0; t < samples; ++t) {
    x[t] = std::sin(2.0 * std::numbers::pi * freq_hz * t / rate);
  }
  return x;
}

EegEpoch epoch_from(const std::vector<std::vector<double>>& channels) {
  EegEpoch e;
  e.epoch_id = 0;
  e.channels = static_cast<int>(channels.size());
  e.samples = static_cast<int>(channels[0].size());
  for (const auto& ch : channels) {
    for (double v : ch) e.data.push_back(static_cast<float>(v));
  }
  return e;
}

// ---------------------------------------------------------------- 1 ----

void criterion_analytic_identities(Check& check) {
  // H(X|X) = 0
  Rng rng(1);
  std::vector<double> x(400);
  for (double& v : x) v = rng.normal();
  const auto ce = features::cond_entropy_matrix(features::view_of(epoch_from({x, x})), 8);
  check.expect_near(ce.at(0, 0), 0.0, 1e-9, "H(X|X) diagonal");
  check.expect_near(ce.at(0, 1), 0.0, 1e-9, "H(X|X) duplicated channel");

  // PLV(x,x) = 1; PLV(x, circular quarter-period shift of x) = 1
  const auto tone = sine(12.5, 500);  // 25 full cycles: shift theorem is exact
  std::vector<double> shifted(500);
  for (int t = 0; t < 500; ++t) shifted[t] = tone[(t + 10) % 500];  // 90 degrees
  const auto plv = features::plv_matrix(features::view_of(epoch_from({tone, tone, shifted})));
  check.expect_near(plv.at(0, 1), 1.0, 1e-9, "PLV(x,x)");
  check.expect_near(plv.at(0, 2), 1.0, 1e-9, "PLV(x, shifted x)");

  // clustering coefficient: complete graph all ones, star center zero
  features::Adjacency complete;
  complete.n = 6;
  complete.edge.assign(36, 1);
  for (int i = 0; i < 6; ++i) complete.edge[i * 6 + i] = 0;
  for (double c : features::clustering_from_adjacency(complete)) {
    check.expect_near(c, 1.0, 1e-9, "clustering on complete graph");
  }
  features::Adjacency star;
  star.n = 6;
  star.edge.assign(36, 0);
  for (int leaf = 1; leaf < 6; ++leaf) {
    star.edge[leaf] = 1;
    star.edge[leaf * 6] = 1;
  }
  check.expect_near(features::clustering_from_adjacency(star)[0], 0.0, 1e-9,
                    "clustering on star center");

  // pure 10 Hz tone: >= 95% of band-summed power in alpha
  const auto bp = features::band_power(features::view_of(epoch_from({sine(10.0, 500)})));
  double total = 0.0;
  for (double v : bp) total += v;
  check.expect(bp[2] / total >= 0.95, "alpha share of band-summed power >= 0.95");

  // PCA orthonormality at 1e-8
  RowMatrix data(40, 12);
  Rng prng(2);
  for (double& v : data.data) v = prng.normal();
  const auto model = features::fit_pca(data, 8);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      double dot = 0.0;
      for (int c = 0; c < 12; ++c) {
        dot += model.components.at(a, c) * model.components.at(b, c);
      }
      check.expect_near(dot, a == b ? 1.0 : 0.0, 1e-8, "PCA row orthonormality");
    }
  }
}

// ---------------------------------------------------------------- 2 ----

void criterion_oracle_equivalence(Check& check) {
  // band power vs direct DFT + trapezoid, within 1%
  Rng rng(42);
  std::vector<double> noise(75);
  for (double& v : noise) v = rng.normal();
  const auto bp = features::band_power(features::view_of(epoch_from({noise})));
  for (int b = 0; b < kBandCount; ++b) {
    const double expected = oracles::direct_dft_band_power(
        noise, 500.0, 512, kBands[b].low_hz, kBands[b].high_hz);
    check.expect(std::abs(bp[b] - expected) <= 0.01 * std::abs(expected) + 1e-12,
                 "band power vs direct-DFT oracle, band " +
                     std::string{kBands[b].name});
  }

  // conditional entropy vs the Eq.-3 oracle and the analytic 3-bit limit
  {
    Rng urng(7);
    const int t = 100000;
    std::vector<double> x(t), y(t);
    for (int i = 0; i < t; ++i) {
      x[i] = urng.uniform01();
      y[i] = urng.uniform01();
    }
    const auto ce =
        features::cond_entropy_matrix(features::view_of(epoch_from({x, y})), 8);
    check.expect_near(ce.at(0, 1), oracles::cond_entropy_direct(x, y, 8), 1e-9,
                      "H(X|Y) vs direct-definition oracle");
    check.expect_near(ce.at(0, 1), 3.0, 0.05, "H(X|Y) analytic limit log2(8)");
  }

  // PCA projections vs dense Jacobi eigendecomposition, 1e-8 up to sign
  {
    RowMatrix data(50, 10);
    Rng prng(500);
    for (double& v : data.data) v = prng.normal();
    const auto model = features::fit_pca(data, 5);
    const auto oracle = oracles::pca_project_oracle(data, 5);
    double worst = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
      const auto projected = model.apply(data.row(i));
      for (int j = 0; j < 5; ++j) {
        worst = std::max(worst,
                         std::abs(std::abs(projected[j]) - std::abs(oracle.at(i, j))));
      }
    }
    check.expect(worst <= 1e-8, "PCA projections vs eigendecomposition oracle");
  }

  // paired p-value vs a 1e5-draw permutation oracle, within 0.02
  {
    Rng prng(88);
    std::vector<double> a(12), b(12);
    for (int i = 0; i < 12; ++i) {
      a[i] = prng.normal(5.0, 1.0);
      b[i] = a[i] - prng.normal(0.5, 1.2);
    }
    const double p_t = analysis::paired_pvalue(a, b);
    const double p_perm = oracles::permutation_pvalue(a, b, 100000, 99);
    check.expect_near(p_t, p_perm, 0.02, "paired t-test vs permutation oracle");
  }

  // clustering coefficients: exact match against brute force on every
  // graph with up to 6 nodes
  for (int n = 1; n <= 6; ++n) {
    const int pairs = n * (n - 1) / 2;
    const std::uint64_t graphs = 1ULL << pairs;
    bool all_equal = true;
    for (std::uint64_t code = 0; code < graphs; ++code) {
      features::Adjacency adj;
      adj.n = n;
      adj.edge.assign(static_cast<std::size_t>(n) * n, 0);
      int bit = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++bit) {
          if (code & (1ULL << bit)) {
            adj.edge[static_cast<std::size_t>(i) * n + j] = 1;
            adj.edge[static_cast<std::size_t>(j) * n + i] = 1;
          }
        }
      }
      if (features::clustering_from_adjacency(adj) !=
          oracles::clustering_bruteforce(adj.edge, n)) {
        all_equal = false;
        break;
      }
    }
    check.expect(all_equal, "clustering exact on all graphs with " +
                                std::to_string(n) + " nodes");
  }
}

// ---------------------------------------------------------------- 3 ----

classify::LabeledSet pipeline_to_balanced_set(const SynthConfig& config, Check& check,
                                              const char* label) {
  const auto synth = synth_session(config, default_jobs());

  // two truthful mock labelers sharing the generator's bucket seed; their
  // joint selection reproduces the ground truth
  labeling::MockBehavior behavior = labeling::MockBehavior::truthful();
  behavior.hrw_fraction = config.hrw_fraction;
  labeling::LabelOptions options;
  options.backoff_base_s = 0.0;

  labeling::MockProvider provider_a(synth.bundle, config.seed, behavior, "mockA");
  options.source = GroupingSource::ModelA;
  const auto run_a = labeling::label_corpus(provider_a, synth.bundle, options);
  labeling::MockProvider provider_b(synth.bundle, config.seed, behavior, "mockB");
  options.source = GroupingSource::ModelB;
  const auto run_b = labeling::label_corpus(provider_b, synth.bundle, options);

  std::map<SentenceId, const WordGrouping*> by_id;
  for (const auto& g : run_b.groupings) by_id[g.sentence_id] = &g;
  std::vector<WordGrouping> joint;
  for (const auto& g : run_a.groupings) {
    auto it = by_id.find(g.sentence_id);
    if (it != by_id.end()) joint.push_back(labeling::joint_select(g, *it->second));
  }
  check.expect(joint.size() == synth.bundle.sentences.size(),
               std::string{label} + ": joint labels cover the corpus");

  const auto raw = features::compute_raw_features(synth.bundle, 8, default_jobs());
  auto set = classify::build_labeled_set(synth.bundle, raw, joint,
                                         features::FeatureTag::Combined90);
  return classify::balance_classes(set, config.seed);
}

void criterion_end_to_end(Check& check) {
  SynthConfig config;
  config.n_sentences = 60;
  config.words_per_sentence = 10;
  config.channels = 105;
  config.seed = 2024;
  config.hrw_fraction = 0.4;
  config.class_effect = {1.0, 1.0, 1.0, 1.0, 4.0};
  config.emit_frp = false;

  const std::vector<classify::ClassifierKind> kinds(classify::kAllClassifiers.begin(),
                                                    classify::kAllClassifiers.end());

  auto balanced = pipeline_to_balanced_set(config, check, "separable");
  check.expect(balanced.size() >= 400,
               "balanced set has >= 400 epochs (got " +
                   std::to_string(balanced.size()) + ")");
  const auto report = classify::cross_validate(balanced, kinds, config.seed);
  const auto [best_kind, best_acc] = classify::best_of(report);
  check.expect(best_acc >= 0.85,
               "best classifier mean accuracy >= 0.85 (got " +
                   std::to_string(best_acc) + " with " +
                   std::string{classify::classifier_name(best_kind)} + ")");

  // shuffled labels on the separable set: chance for every classifier
  classify::CvOptions shuffled;
  shuffled.shuffle_labels = true;
  const auto chance_report = classify::cross_validate(balanced, kinds, config.seed, shuffled);
  for (const auto& result : chance_report.results) {
    check.expect(result.mean >= 0.40 && result.mean <= 0.60,
                 "shuffled labels: " +
                     std::string{classify::classifier_name(result.kind)} + " mean " +
                     std::to_string(result.mean) + " in [0.40, 0.60]");
  }

  // class_effect identical to 1: the groups share one distribution
  SynthConfig null_config = config;
  null_config.class_effect = {1.0, 1.0, 1.0, 1.0, 1.0};
  null_config.seed = 2025;
  auto null_set = pipeline_to_balanced_set(null_config, check, "null");
  const auto null_report = classify::cross_validate(null_set, kinds, null_config.seed);
  for (const auto& result : null_report.results) {
    check.expect(result.mean >= 0.40 && result.mean <= 0.60,
                 "null effect: " +
                     std::string{classify::classifier_name(result.kind)} + " mean " +
                     std::to_string(result.mean) + " in [0.40, 0.60]");
  }
}

// ---------------------------------------------------------------- 4 ----

void criterion_labeling_semantics(Check& check) {
  SynthConfig config;
  config.n_sentences = 24;
  config.words_per_sentence = 8;
  config.channels = 2;
  config.seed = 99;
  config.emit_frp = false;
  const auto synth = synth_session(config);

  labeling::LabelOptions options;
  options.backoff_base_s = 0.0;

  {
    labeling::MockProvider provider(synth.bundle, 99, labeling::MockBehavior::truthful());
    const auto result = labeling::label_corpus(provider, synth.bundle, options);
    const auto path = scratch_dir() / "mistakes_truthful.csv";
    labeling::save_mistakes(result.mistakes, path.string());
    const auto loaded = labeling::load_mistakes(path.string());
    check.expect(loaded.empty(), "truthful mock leaves mistakes.csv empty");
    check.expect(result.groupings.size() == 24, "truthful mock labels every sentence");
  }

  {
    const SentenceId k = synth.bundle.sentences[7].sentence_id;
    labeling::MockProvider provider(synth.bundle, 99,
                                    labeling::MockBehavior::adversarial(k));
    const auto result = labeling::label_corpus(provider, synth.bundle, options);
    check.expect(result.mistakes.size() == 1, "adversarial mock logs exactly one mistake");
    check.expect(!result.mistakes.empty() && result.mistakes[0].sentence_id == k,
                 "the mistake names the adversarial sentence");
    int forced = 0;
    for (const auto& g : result.groupings) {
      if (g.forced) {
        ++forced;
        check.expect(g.sentence_id == k, "the forced grouping is the adversarial one");
      }
    }
    check.expect(forced == 1, "exactly one grouping is marked forced");
  }

  // joint_select properties on 1,000 random grouping pairs
  Rng rng(4242);
  bool commutative = true, idempotent = true, bounded = true, partitioned = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(12));
    WordGrouping a, b;
    a.sentence_id = b.sentence_id = trial;
    a.relation = b.relation = kAllRelations[rng.below(8)];
    for (int i = 0; i < n; ++i) {
      (rng.bernoulli(0.4) ? a.hrw : a.lrw).insert(i);
      (rng.bernoulli(0.4) ? b.hrw : b.lrw).insert(i);
    }
    const auto ab = labeling::joint_select(a, b);
    const auto ba = labeling::joint_select(b, a);
    if (ab.hrw != ba.hrw || ab.lrw != ba.lrw) commutative = false;
    if (labeling::joint_select(a, a).hrw != a.hrw) idempotent = false;
    if (ab.hrw.size() > std::min(a.hrw.size(), b.hrw.size())) bounded = false;
    if (ab.hrw.size() + ab.lrw.size() != static_cast<std::size_t>(n)) partitioned = false;
  }
  check.expect(commutative, "joint_select commutes");
  check.expect(idempotent, "joint_select is idempotent");
  check.expect(bounded, "joint HRW size is bounded by both inputs");
  check.expect(partitioned, "joint grouping partitions the sentence");
}

// ---------------------------------------------------------------- 5 ----

void table_shape_artifacts(const fs::path& dir) {
  fs::create_directories(dir);

  SynthConfig config;
  config.n_sentences = 20;
  config.words_per_sentence = 8;
  config.channels = 10;
  config.seed = 7;
  config.hrw_fraction = 0.4;
  config.class_effect = {1.0, 1.0, 1.0, 1.0, 2.0};
  config.emit_frp = false;

  std::vector<SessionBundle> bundles;
  std::vector<WordGrouping> ground_truth;
  for (const char* subject : {"S01", "S02", "S03"}) {
    config.subject_id = subject;
    auto result = synth_session(config, default_jobs());
    ground_truth = std::move(result.ground_truth);
    bundles.push_back(std::move(result.bundle));
  }

  const auto table = analysis::fixation_stats(bundles, ground_truth);
  analysis::render_gaze_stats(table, (dir / "gaze_stats.csv").string(), config.seed);

  const auto raw = features::compute_raw_features(bundles[0], 8, default_jobs());
  auto set = classify::build_labeled_set(bundles[0], raw, ground_truth,
                                         features::FeatureTag::Combined90);
  const auto balanced = classify::balance_classes(set, config.seed);
  const std::vector<classify::ClassifierKind> kinds(classify::kAllClassifiers.begin(),
                                                    classify::kAllClassifiers.end());
  std::vector<classify::CvReport> reports;
  for (auto tag : {features::FeatureTag::Combined90, features::FeatureTag::Bp30,
                   features::FeatureTag::CondEn30, features::FeatureTag::Plv30}) {
    auto tagged = balanced;
    tagged.tag = tag;
    reports.push_back(classify::cross_validate(tagged, kinds, config.seed));
  }
  classify::render_cv_table(reports, (dir / "cv_table.csv").string(), config.seed);
}

std::vector<std::string> data_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;  // provenance comments excluded
    lines.push_back(line);
  }
  return lines;
}

void criterion_table_shapes(Check& check) {
  const fs::path dir = scratch_dir() / "tables";
  table_shape_artifacts(dir);

  if (g_write_golden) {
    fs::create_directories(g_golden_dir);
    fs::copy_file(dir / "cv_table.csv", fs::path{g_golden_dir} / "cv_table.golden.csv",
                  fs::copy_options::overwrite_existing);
    fs::copy_file(dir / "gaze_stats.csv",
                  fs::path{g_golden_dir} / "gaze_stats.golden.csv",
                  fs::copy_options::overwrite_existing);
    std::printf("  (golden files rewritten)\n");
  }

  for (const char* name : {"cv_table", "gaze_stats"}) {
    const auto produced = data_lines(dir / (std::string{name} + ".csv"));
    const auto golden =
        data_lines(fs::path{g_golden_dir} / (std::string{name} + ".golden.csv"));
    check.expect(produced == golden,
                 std::string{name} + ".csv matches the golden file");
  }

  // structural spot checks independent of the golden bytes
  const auto cv_rows = read_csv((dir / "cv_table.csv").string());
  check.expect(cv_rows.size() == 12, "cv_table has 11 classifier rows plus header");
  check.expect(cv_rows[0].size() == 5, "cv_table has 4 feature-set columns");
  bool cells_ok = true;
  for (std::size_t r = 1; r < cv_rows.size(); ++r) {
    for (std::size_t c = 1; c < cv_rows[r].size(); ++c) {
      if (cv_rows[r][c].find(" ± ") == std::string::npos) cells_ok = false;
    }
  }
  check.expect(cells_ok, "cv_table cells are 'mean ± sd'");

  const auto gaze_rows = read_csv((dir / "gaze_stats.csv").string());
  check.expect(gaze_rows.size() == 5, "gaze_stats has header + 4 rows");
  check.expect(gaze_rows.size() == 5 && gaze_rows[1][0] == "High RW" &&
                   gaze_rows[2][0] == "Low RW" && gaze_rows[3][0] == "Total Sample Size" &&
                   gaze_rows[4][0] == "P-value",
               "gaze_stats row labels match the table layout");
  check.expect(gaze_rows[0].size() == 9,
               "gaze_stats has word-count, incl./excl. fixation and 5 duration columns");
}

// ---------------------------------------------------------------- 6 ----

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + g_cli_path + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void run_pipeline(const fs::path& dir, Check& check) {
  const std::string out = dir.string();
  const std::string bundle = (dir / "S01").string();
  const std::string gp = (dir / "labels").string();
  std::vector<std::pair<std::string, std::string>> steps = {
      {"synth", "synth --seed 11 --out " + out +
                    " --sentences 24 --words 8 --channels 16 --subjects 2 "
                    "--class-effect 1,1,1,1,3 --hrw-fraction 0.4 --force"},
      {"label", "label --seed 11 --bundle " + bundle + " --out " + gp +
                    " --model mockA --model-b mockB --force"},
      {"features", "features --seed 11 --bundle " + bundle + " --groupings " + gp +
                       "/groupings_joint.jsonl --out " + (dir / "feat").string() +
                       " --force"},
      {"train", "train --seed 11 --bundle " + bundle + " --groupings " + gp +
                    "/groupings_joint.jsonl --out " + (dir / "cv").string() + " --force"},
      {"stats", "stats --seed 11 --bundle " + bundle + " --bundle " +
                    (dir / "S02").string() + " --groupings " + gp +
                    "/groupings_joint.jsonl --out " + (dir / "cv").string() + " --force"},
      {"frp", "frp --seed 11 --bundle " + bundle + " --groupings " + gp +
                  "/groupings_joint.jsonl --out " + (dir / "frp").string() +
                  " --channels 0 --force"},
      {"report", "report --seed 11 --bundle " + bundle + " --groupings " + gp +
                     "/groupings_joint.jsonl --results " + (dir / "cv").string() +
                     " --out " + (dir / "report").string() + " --force"},
  };
  for (const auto& [name, args] : steps) {
    const int code = run_cli(args);
    check.expect(code == 0, "pipeline step '" + name + "' exits 0 (got " +
                                std::to_string(code) + ")");
    if (code != 0) return;
  }
}

void criterion_determinism(Check& check) {
  check.expect(!g_cli_path.empty() && fs::exists(g_cli_path),
               "CLI binary available at --cli path");
  if (g_cli_path.empty() || !fs::exists(g_cli_path)) return;

  const fs::path run1 = scratch_dir() / "run1";
  const fs::path run2 = scratch_dir() / "run2";
  run_pipeline(run1, check);
  run_pipeline(run2, check);
  if (!check.failures.empty()) return;

  // every CSV the pipeline wrote must match byte-for-byte once the
  // version-comment lines are stripped
  std::size_t compared = 0;
  for (auto it = fs::recursive_directory_iterator(run1);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file() || it->path().extension() != ".csv") continue;
    const auto rel = fs::relative(it->path(), run1);
    const auto other = run2 / rel;
    if (!fs::exists(other)) {
      check.expect(false, "second run missing " + rel.string());
      continue;
    }
    if (data_lines(it->path()) != data_lines(other)) {
      check.expect(false, rel.string() + " differs between runs");
    }
    ++compared;
  }
  check.expect(compared >= 10, "pipeline produced at least 10 CSV artifacts (got " +
                                   std::to_string(compared) + ")");
}

// ---------------------------------------------------------------- 7 ----

void criterion_frp_suite(Check& check) {
  // exact window geometry
  RowMatrix continuous(3, 400);
  Rng rng(5);
  for (double& v : continuous.data) v = rng.normal();
  const auto window = analysis::extract_frp_window(continuous, 120);
  check.expect(window.data.size() == 3u * 250u, "FRP window is exactly 250 samples");
  check.expect(FrpEpoch::kOnsetIndex == 50, "fixation onset sits at index 50");
  check.expect_near(window.channel(1)[50], continuous.at(1, 120), 1e-6,
                    "onset sample aligns with the requested fixation sample");
  bool oob = false;
  try {
    analysis::extract_frp_window(continuous, 49);
  } catch (const error&) {
    oob = true;
  }
  check.expect(oob, "window before sample 50 is out of bounds");

  // null false-positive density of the significance mask: 0.05 +/- 0.03
  Rng nrng(31337);
  std::vector<FrpEpoch> group_a, group_b;
  for (int i = 0; i < 80; ++i) {
    for (auto* group : {&group_a, &group_b}) {
      FrpEpoch e;
      e.channels = 1;
      e.data.resize(FrpEpoch::kSamples);
      for (auto& v : e.data) v = static_cast<float>(nrng.normal());
      group->push_back(std::move(e));
    }
  }
  const auto mask = analysis::pointwise_significance(group_a, group_b, 0, 0.05);
  int hits = 0;
  for (bool m : mask) hits += m ? 1 : 0;
  const double density = static_cast<double>(hits) / FrpEpoch::kSamples;
  check.expect_near(density, 0.05, 0.03, "null significance density");

  // ERP image with smooth = 1 is the identity
  const auto identity = analysis::erp_image(group_a, 0, 1);
  bool equal = true;
  for (std::size_t i = 0; i < group_a.size(); ++i) {
    for (int t = 0; t < FrpEpoch::kSamples; ++t) {
      if (identity.image.at(i, t) != static_cast<double>(group_a[i].channel(0)[t])) {
        equal = false;
      }
    }
  }
  check.expect(equal, "erp_image(smooth=1) reproduces the trials");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--golden-dir" && i + 1 < argc) g_golden_dir = argv[++i];
    else if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    else if (arg == "--write-golden") g_write_golden = true;
  }
  if (g_golden_dir.empty()) {
    std::fprintf(stderr, "usage: fixread_acceptance --golden-dir DIR [--cli PATH] "
                         "[--write-golden]\n");
    return 2;
  }

  const std::vector<Criterion> criteria = {
      {1, "analytic identities", criterion_analytic_identities},
      {2, "oracle equivalence", criterion_oracle_equivalence},
      {3, "end-to-end synthetic separability", criterion_end_to_end},
      {4, "word-grouping protocol semantics", criterion_labeling_semantics},
      {5, "table shapes against golden files", criterion_table_shapes},
      {6, "pipeline determinism", criterion_determinism},
      {7, "FRP suite", criterion_frp_suite},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string{"exception: "} + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (check.failures.empty()) {
      std::printf("[PASS] criterion %d: %s (%.1fs)\n", criterion.id, criterion.name,
                  seconds);
    } else {
      ++failed;
      std::printf("[FAIL] criterion %d: %s (%.1fs)\n", criterion.id, criterion.name,
                  seconds);
      for (const auto& f : check.failures) {
        std::printf("       - %s\n", f.c_str());
      }
    }
    std::fflush(stdout);
  }
  if (failed) {
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
