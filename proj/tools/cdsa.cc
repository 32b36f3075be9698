// Command-line front end: ingest, metrics, evaluate, chart, baseline.
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdsa/error.h"
#include "cdsa/pipeline.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Flags {
  std::string config;
  std::vector<std::string> domains;
  std::vector<std::string> metrics;
  std::vector<std::string> ks;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string stopwords;
  std::string adjectives;
  std::string sentiment_lexicon;
  std::string lexicon_format;
  std::vector<std::string> vectors;
  std::string matrix;
  std::string metrics_dir;
};

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

cdsa::RunConfig build_config(const Flags& f) {
  cdsa::RunConfig config =
      f.config.empty() ? cdsa::RunConfig{} : cdsa::load_config(f.config);
  auto set = [&](const char* key, const std::string& value) {
    if (!value.empty()) cdsa::apply_setting(config, key, value);
  };
  set("domains", joined(f.domains));
  set("metrics", joined(f.metrics));
  set("k", joined(f.ks));
  set("out", f.out);
  set("stopwords", f.stopwords);
  set("adjectives", f.adjectives);
  set("sentiment_lexicon", f.sentiment_lexicon);
  set("sentiment_lexicon_format", f.lexicon_format);
  set("accuracy_matrix", f.matrix);
  set("metrics_dir", f.metrics_dir);
  for (const std::string& v : f.vectors) cdsa::apply_setting(config, "vectors", v);
  if (f.seed) cdsa::apply_setting(config, "seed", std::to_string(*f.seed));
  return config;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--domains", f.domains, "ID=path corpus list")->delimiter(',');
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--stopwords", f.stopwords, "stopword list");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source-domain recommendation for cross-domain sentiment "
               "analysis"};
  app.require_subcommand(1);
  Flags f;

  auto* ingest = app.add_subcommand("ingest", "load corpora, write summary");
  add_common(ingest, f);

  auto* metrics = app.add_subcommand("metrics", "compute pairwise metrics");
  add_common(metrics, f);
  metrics->add_option("--metrics", f.metrics, "LM1..LM4, ULM1..ULM7, NGRAM")
      ->delimiter(',');
  metrics->add_option("--adjectives", f.adjectives, "adjective list");
  metrics->add_option("--sentiment-lexicon", f.sentiment_lexicon,
                      "sentiment lexicon (TSV or SentiWordNet)");
  metrics->add_option("--lexicon-format", f.lexicon_format,
                      "auto, tsv or sentiwordnet");
  metrics->add_option("--vectors", f.vectors, "METRIC=dir, repeatable");

  auto* evaluate = app.add_subcommand("evaluate", "score metric rankings");
  add_common(evaluate, f);
  evaluate->add_option("--metrics", f.metrics, "metrics to evaluate")
      ->delimiter(',');
  evaluate->add_option("--k", f.ks, "K values")->delimiter(',');
  evaluate->add_option("--matrix", f.matrix,
                       "accuracy matrix CSV, or 'generate'");
  evaluate->add_option("--metrics-dir", f.metrics_dir,
                       "where metrics_<ID>.csv live (default: --out)");

  auto* chart = app.add_subcommand("chart", "recommendation chart");
  add_common(chart, f);
  chart->add_option("--matrix", f.matrix, "accuracy matrix CSV, or 'generate'");

  auto* baseline = app.add_subcommand("baseline", "train/test accuracy matrix");
  add_common(baseline, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const cdsa::RunConfig config = build_config(f);
    if (*ingest) {
      cdsa::cmd_ingest(config, std::cerr);
    } else if (*metrics) {
      for (const auto& p : cdsa::cmd_metrics(config, std::cerr)) {
        std::cout << p.string() << '\n';
      }
    } else if (*evaluate) {
      cdsa::cmd_evaluate(config, std::cerr);
    } else if (*chart) {
      cdsa::cmd_chart(config, std::cerr);
    } else if (*baseline) {
      cdsa::cmd_baseline(config, std::cerr);
    }
  } catch (const cdsa::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
