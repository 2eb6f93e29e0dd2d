#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "commands.hpp"
#include "fixread/errors.hpp"
#include "fixread/version.hpp"

// Exit codes: 0 success, 2 configuration error, 3 missing upstream
// artifact, 4 provider failure, 1 anything else.

namespace {

using namespace fixread;
using namespace fixread::cli;

void add_global(CLI::App* cmd, GlobalOptions& g) {
  cmd->add_option("--seed", g.seed, "Run seed; all randomness flows from it")
      ->capture_default_str();
  cmd->add_option("--out", g.out, "Output directory")->required();
  cmd->add_option("--jobs", g.jobs, "Worker threads (0 = logical cores)")
      ->capture_default_str();
  cmd->add_flag("--force", g.force, "Allow writing into a non-empty output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixread: word-level neural-state pipeline (synthetic sessions, "
               "LLM-style word labeling, EEG features, balanced cross-validation, "
               "fixation statistics, FRP analysis)"};
  app.set_version_flag("--version", std::string{"fixread "} + kVersion);
  app.set_config("--config", "", "TOML config file; command-line flags win");
  app.require_subcommand(1);

  GlobalOptions g_synth, g_label, g_features, g_train, g_stats, g_frp, g_report;
  SynthOptions synth_opts;
  LabelOptionsCli label_opts;
  FeatureOptions feature_opts;
  TrainOptions train_opts;
  StatsOptions stats_opts;
  FrpOptions frp_opts;
  ReportOptions report_opts;

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic session bundle");
  add_global(synth, g_synth);
  synth->add_option("--sentences", synth_opts.sentences)->capture_default_str();
  synth->add_option("--words", synth_opts.words, "Words per sentence")
      ->capture_default_str();
  synth->add_option("--channels", synth_opts.channels)->capture_default_str();
  synth->add_option("--rate", synth_opts.rate, "Sampling rate in Hz")
      ->capture_default_str();
  synth->add_option("--hrw-fraction", synth_opts.hrw_fraction)->capture_default_str();
  synth->add_option("--class-effect", synth_opts.class_effect,
                    "Per-band HRW power multipliers delta,theta,alpha,beta,gamma")
      ->capture_default_str();
  synth->add_option("--subjects", synth_opts.subjects, "Subject bundles to generate")
      ->capture_default_str();
  synth->add_flag("--no-frp", synth_opts.no_frp, "Skip the 500 ms FRP windows");

  auto* label = app.add_subcommand("label", "Group words with a provider (mock or HTTP)");
  add_global(label, g_label);
  label->add_option("--bundle", label_opts.bundle, "Session bundle directory");
  label->add_option("--model", label_opts.model, "Model name (first model)")
      ->capture_default_str();
  label->add_option("--model-b", label_opts.model_b,
                    "Second model name; enables joint selection");
  label->add_option("--mock-a", label_opts.mock_a.behavior,
                    "Mock behavior: truthful | adversarial:K | noisy:P")
      ->capture_default_str();
  label->add_option("--mock-b", label_opts.mock_b.behavior)->capture_default_str();
  label->add_option("--mock-seed-a", label_opts.mock_a.seed,
                    "Bucket seed of model A (0 = run seed)");
  label->add_option("--mock-seed-b", label_opts.mock_b.seed,
                    "Bucket seed of model B (0 = run seed)");
  label->add_option("--hrw-fraction", label_opts.hrw_fraction,
                    "Mock HRW bucket fraction")
      ->capture_default_str();
  label->add_option("--endpoint", label_opts.endpoint,
                    "Chat-completion endpoint URL; leaves mock mode");
  label->add_option("--api-key-env", label_opts.api_key_env,
                    "Environment variable holding the API key")
      ->capture_default_str();
  label->add_option("--timeout", label_opts.timeout_s)->capture_default_str();
  label->add_option("--temperature", label_opts.temperature)->capture_default_str();
  label->add_option("--repeats", label_opts.repeats,
                    "Extra runs for condition-accuracy averaging")
      ->capture_default_str();
  label->add_option("--retries", label_opts.retries)->capture_default_str();
  label->add_option("--backoff", label_opts.backoff_s,
                    "Backoff base seconds (0 disables; real providers default 1.0)")
      ->capture_default_str();
  label->add_option("--relations", label_opts.relations,
                    "Relation filter (AWARD, EDUCATION, ...)")
      ->delimiter(',');
  label->add_option("--joint", label_opts.joint_inputs,
                    "Two grouping files to intersect into groupings_joint.jsonl")
      ->expected(2);

  auto* features_cmd = app.add_subcommand("features", "Extract the four feature tables");
  add_global(features_cmd, g_features);
  features_cmd->add_option("--bundle", feature_opts.bundle)->required();
  features_cmd->add_option("--groupings", feature_opts.groupings)->required();
  features_cmd->add_option("--bins", feature_opts.bins, "Conditional-entropy bins")
      ->capture_default_str();
  features_cmd->add_option("--dim", feature_opts.dim, "Reduced dimension per feature")
      ->capture_default_str();

  auto* train = app.add_subcommand("train", "Balanced 5-fold cross-validation");
  add_global(train, g_train);
  train->add_option("--bundle", train_opts.bundle)->required();
  train->add_option("--groupings", train_opts.groupings)->required();
  train->add_option("--sets", train_opts.sets,
                    "Feature sets: combined, bp, conden, plv")
      ->delimiter(',')
      ->capture_default_str();
  train->add_option("--classifiers", train_opts.classifiers,
                    "Subset of LDA, QDA, LOGREG, GAUSS_NB, KERNEL_NB, SVM_*")
      ->delimiter(',');
  train->add_option("--folds", train_opts.folds)->capture_default_str();
  train->add_option("--bins", train_opts.bins)->capture_default_str();
  train->add_option("--dim", train_opts.dim)->capture_default_str();
  train->add_flag("--shuffle-labels", train_opts.shuffle_labels,
                  "Chance-level control: shuffle labels before folding");

  auto* stats = app.add_subcommand("stats", "Eye-fixation statistics table");
  add_global(stats, g_stats);
  stats->add_option("--bundle", stats_opts.bundles, "Bundle directory (repeatable)")
      ->required();
  stats->add_option("--groupings", stats_opts.groupings)->required();

  auto* frp = app.add_subcommand("frp", "Fixation-related potential analysis");
  add_global(frp, g_frp);
  frp->add_option("--bundle", frp_opts.bundle)->required();
  frp->add_option("--groupings", frp_opts.groupings)->required();
  frp->add_option("--channels", frp_opts.channels, "Channel indices")
      ->delimiter(',')
      ->capture_default_str();
  frp->add_option("--smooth", frp_opts.smooth, "ERP-image smoothing width")
      ->capture_default_str();
  frp->add_option("--alpha", frp_opts.alpha, "Significance level")
      ->capture_default_str();
  frp->add_flag("--svg", frp_opts.svg, "Also render SVG figures");

  auto* report = app.add_subcommand("report", "Assemble tables and epoch counts");
  add_global(report, g_report);
  report->add_option("--bundle", report_opts.bundles, "Bundle directory (repeatable)")
      ->required();
  report->add_option("--groupings", report_opts.groupings,
                     "Grouping files (repeatable)")
      ->required();
  report->add_option("--results", report_opts.results,
                     "Directory holding cv_table.csv and gaze_stats.csv");

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return cmd_synth(g_synth, synth_opts);
    if (label->parsed()) return cmd_label(g_label, label_opts);
    if (features_cmd->parsed()) return cmd_features(g_features, feature_opts);
    if (train->parsed()) return cmd_train(g_train, train_opts);
    if (stats->parsed()) return cmd_stats(g_stats, stats_opts);
    if (frp->parsed()) return cmd_frp(g_frp, frp_opts);
    if (report->parsed()) return cmd_report(g_report, report_opts);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const missing_artifact_error& e) {
    std::fprintf(stderr, "missing artifact: %s\n", e.what());
    return 3;
  } catch (const provider_exhausted_error& e) {
    std::fprintf(stderr, "provider failure: %s\n", e.what());
    return 4;
  } catch (const transport_error& e) {
    std::fprintf(stderr, "provider failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
