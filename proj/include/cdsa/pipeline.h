#ifndef CDSA_PIPELINE_H_
#define CDSA_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdsa/baseline.h"
#include "cdsa/embedding_metrics.h"
#include "cdsa/evaluation.h"
#include "cdsa/labelled_metrics.h"
#include "cdsa/lexstats.h"
#include "cdsa/metric.h"

namespace cdsa {

enum class LexiconFormat { kAuto, kTsv, kSentiWordNet };

// Everything a batch run needs. Built from a key = value config file plus
// command-line overrides; see README for the keys.
struct RunConfig {
  std::vector<std::pair<std::string, std::filesystem::path>> corpora;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> adjectives;
  std::optional<std::filesystem::path> sentiment_lexicon;
  LexiconFormat sentiment_lexicon_format = LexiconFormat::kAuto;
  std::map<MetricId, std::filesystem::path> vectors;  // metric -> directory
  std::string accuracy_matrix;  // CSV path, or "generate"
  std::vector<MetricId> metrics;
  std::vector<std::size_t> ks = kDefaultKs;
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> metrics_dir;  // defaults to out
  std::uint64_t seed = 42;
  std::size_t test_vectors = kTestVectorCount;
  LabelledOptions labelled;
  BaselineOptions baseline;

  std::filesystem::path metric_input_dir() const {
    return metrics_dir ? *metrics_dir : out;
  }
};

// Applies one setting. Relative paths are resolved against `base`.
// Throws InputError for unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value,
                   const std::filesystem::path& base = {});

// '#' comments, blank lines, and "key = value" lines.
RunConfig read_config(std::istream& in, const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);

SentimentLexicon load_sentiment_lexicon(const std::filesystem::path& path,
                                        LexiconFormat format);

// "<dir>/<domain>.vec"
std::filesystem::path vector_file(const std::filesystem::path& dir,
                                  std::string_view domain);

struct CorpusSummary {
  std::string domain;
  std::size_t reviews = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t tokens = 0;
  std::size_t vocabulary = 0;
  bool balanced = true;
};

// Loads every configured corpus in order; errors name the domain.
std::vector<Corpus> load_corpora(const RunConfig& config, std::ostream& log);

// Writes <out>/corpus_summary.csv.
std::vector<CorpusSummary> cmd_ingest(const RunConfig& config,
                                      std::ostream& log);

// Writes <out>/metrics_<ID>.csv per selected metric (plus
// <out>/ngram_overlap.csv for NGRAM). Inputs are checked before any metric
// is computed. Returns the files written.
std::vector<std::filesystem::path> cmd_metrics(const RunConfig& config,
                                               std::ostream& log);

// Writes chart.{csv,md} and, when metrics are selected, eval_report.{csv,md}
// and eval_breakdown.csv.
RecommendationReport cmd_evaluate(const RunConfig& config, std::ostream& log);

// Writes chart.{csv,md} for the configured accuracy matrix.
std::vector<ChartRow> cmd_chart(const RunConfig& config, std::ostream& log);

// Writes <out>/accuracy_matrix.csv from the baseline classifier.
AccuracyMatrix cmd_baseline(const RunConfig& config, std::ostream& log);

}  // namespace cdsa

#endif  // CDSA_PIPELINE_H_
