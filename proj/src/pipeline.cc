#include "cdsa/pipeline.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cdsa/csv.h"
#include "cdsa/error.h"

namespace cdsa {
namespace fs = std::filesystem;
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    std::string_view item = trim(value.substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InputError("setting '" + std::string(key) +
                     "' expects a non-negative integer, got '" +
                     std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InputError("setting '" + std::string(key) + "' expects a number");
  }
  return out;
}

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p{std::string(value)};
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

MetricId require_metric(std::string_view name) {
  auto id = parse_metric(name);
  if (!id) throw InputError("unknown metric '" + std::string(name) + "'");
  return *id;
}

void set_corpus(RunConfig& config, std::string domain, fs::path path) {
  for (auto& [d, p] : config.corpora) {
    if (d == domain) {
      p = std::move(path);
      return;
    }
  }
  config.corpora.emplace_back(std::move(domain), std::move(path));
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << contents;
  if (!out) throw InputError("failed writing " + path.string());
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) {
    throw InputError("cannot create output directory " + config.out.string() +
                     ": " + ec.message());
  }
}

void flush_warnings(std::ostream& log, std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) log << "warning: " << w << '\n';
  warnings.clear();
}

Normalizer make_normalizer(const RunConfig& config) {
  return config.stopwords ? Normalizer::from_file(*config.stopwords)
                          : Normalizer();
}

std::vector<std::string> domain_ids(const RunConfig& config) {
  std::vector<std::string> ids;
  for (const auto& [d, p] : config.corpora) ids.push_back(d);
  return ids;
}

bool has_metric(const RunConfig& config, bool (*pred)(MetricId)) {
  return std::any_of(config.metrics.begin(), config.metrics.end(), pred);
}

AccuracyMatrix obtain_matrix(const RunConfig& config, std::ostream& log) {
  if (config.accuracy_matrix.empty()) {
    throw InputError("no accuracy matrix configured (accuracy_matrix)");
  }
  if (config.accuracy_matrix == "generate") return cmd_baseline(config, log);
  return load_accuracy_matrix(config.accuracy_matrix);
}

void write_chart_files(const RunConfig& config,
                       const std::vector<ChartRow>& rows) {
  std::ostringstream csv_out, md_out;
  write_chart_csv(csv_out, rows);
  write_chart_markdown(md_out, rows);
  write_file(config.out / "chart.csv", csv_out.str());
  write_file(config.out / "chart.md", md_out.str());
}

}  // namespace

void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value, const fs::path& base) {
  key = trim(key);
  value = trim(value);
  const std::string k(key);
  if (k.starts_with("corpus.")) {
    const std::string domain = k.substr(7);
    if (domain.empty()) throw InputError("corpus key needs a domain id");
    set_corpus(config, domain, resolve(base, value));
  } else if (k == "domains") {
    config.corpora.clear();
    for (const std::string& item : split_list(value)) {
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InputError("domains entries must look like ID=path, got '" +
                         item + "'");
      }
      set_corpus(config, item.substr(0, eq),
                 resolve(base, trim(std::string_view(item).substr(eq + 1))));
    }
  } else if (k.starts_with("vectors.")) {
    config.vectors[require_metric(k.substr(8))] = resolve(base, value);
  } else if (k == "vectors") {
    // METRIC=dir[,METRIC=dir...]
    for (const std::string& item : split_list(value)) {
      auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw InputError("vectors entries must look like METRIC=dir");
      }
      config.vectors[require_metric(item.substr(0, eq))] =
          resolve(base, trim(std::string_view(item).substr(eq + 1)));
    }
  } else if (k == "stopwords") {
    config.stopwords = resolve(base, value);
  } else if (k == "adjectives") {
    config.adjectives = resolve(base, value);
  } else if (k == "sentiment_lexicon") {
    config.sentiment_lexicon = resolve(base, value);
  } else if (k == "sentiment_lexicon_format") {
    if (value == "auto") {
      config.sentiment_lexicon_format = LexiconFormat::kAuto;
    } else if (value == "tsv") {
      config.sentiment_lexicon_format = LexiconFormat::kTsv;
    } else if (value == "sentiwordnet") {
      config.sentiment_lexicon_format = LexiconFormat::kSentiWordNet;
    } else {
      throw InputError("sentiment_lexicon_format must be auto, tsv or "
                       "sentiwordnet");
    }
  } else if (k == "accuracy_matrix") {
    config.accuracy_matrix = value == "generate"
                                 ? std::string(value)
                                 : resolve(base, value).string();
  } else if (k == "metrics") {
    config.metrics.clear();
    for (const std::string& m : split_list(value)) {
      MetricId id = require_metric(m);
      if (std::find(config.metrics.begin(), config.metrics.end(), id) ==
          config.metrics.end()) {
        config.metrics.push_back(id);
      }
    }
  } else if (k == "k") {
    config.ks.clear();
    for (const std::string& item : split_list(value)) {
      const auto kv = parse_unsigned<std::size_t>(key, item);
      if (kv == 0) throw InputError("K values must be positive");
      config.ks.push_back(kv);
    }
  } else if (k == "out") {
    config.out = resolve(base, value);
  } else if (k == "metrics_dir") {
    config.metrics_dir = resolve(base, value);
  } else if (k == "seed") {
    config.seed = parse_unsigned<std::uint64_t>(key, value);
    config.baseline.seed = config.seed;
  } else if (k == "test_vectors") {
    config.test_vectors = parse_unsigned<std::size_t>(key, value);
  } else if (k == "polarity_mode") {
    if (value == "occurrence") {
      config.labelled.polarity_mode = PolarityMode::kOccurrence;
    } else if (value == "document_frequency") {
      config.labelled.polarity_mode = PolarityMode::kDocumentFrequency;
    } else {
      throw InputError("polarity_mode must be occurrence or document_frequency");
    }
  } else if (k == "polar_threshold") {
    config.labelled.polar_threshold = parse_real(key, value);
  } else if (k == "polarity_min_count") {
    config.labelled.polarity_min_count = parse_unsigned<std::size_t>(key, value);
  } else if (k == "baseline.epochs") {
    config.baseline.epochs = parse_unsigned<std::size_t>(key, value);
  } else if (k == "baseline.splits") {
    config.baseline.splits = parse_unsigned<std::size_t>(key, value);
  } else if (k == "baseline.test_size") {
    config.baseline.test_size = parse_unsigned<std::size_t>(key, value);
  } else {
    throw InputError("unknown setting '" + k + "'");
  }
}

RunConfig read_config(std::istream& in, const fs::path& base) {
  RunConfig config;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string_view view = trim(raw);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("config line " + std::to_string(line) +
                       ": expected key = value");
    }
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1), base);
    } catch (const InputError& e) {
      throw InputError("config line " + std::to_string(line) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  return read_config(in, path.parent_path());
}

SentimentLexicon load_sentiment_lexicon(const fs::path& path,
                                        LexiconFormat format) {
  if (format == LexiconFormat::kAuto) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sentiment lexicon " + path.string());
    std::string line;
    format = LexiconFormat::kTsv;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      if (std::count(line.begin(), line.end(), '\t') >= 4) {
        format = LexiconFormat::kSentiWordNet;
      }
      break;
    }
  }
  return format == LexiconFormat::kSentiWordNet ? load_sentiwordnet(path)
                                                : load_sentiment_tsv(path);
}

fs::path vector_file(const fs::path& dir, std::string_view domain) {
  return dir / (std::string(domain) + ".vec");
}

std::vector<Corpus> load_corpora(const RunConfig& config, std::ostream& log) {
  if (config.corpora.empty()) throw InputError("no corpora configured");
  const Normalizer normalizer = make_normalizer(config);
  std::vector<Corpus> corpora;
  std::vector<std::string> warnings;
  for (const auto& [domain, path] : config.corpora) {
    try {
      if (!fs::exists(path)) {
        throw InputError("corpus file " + path.string() + " does not exist");
      }
      Corpus c = load_corpus(path, format_from_path(path), normalizer,
                             &warnings);
      if (c.domain() != domain) {
        throw InputError("file records domain '" + c.domain() + "'");
      }
      corpora.push_back(std::move(c));
    } catch (const InputError& e) {
      throw InputError("domain " + domain + ": " + e.what());
    }
    flush_warnings(log, warnings);
  }
  return corpora;
}

std::vector<CorpusSummary> cmd_ingest(const RunConfig& config,
                                      std::ostream& log) {
  const std::vector<Corpus> corpora = load_corpora(config, log);
  std::vector<CorpusSummary> rows;
  for (const Corpus& c : corpora) {
    CorpusSummary s;
    s.domain = c.domain();
    s.reviews = c.size();
    s.positive = c.review_count(Polarity::kPositive);
    s.negative = c.review_count(Polarity::kNegative);
    s.tokens = c.token_count();
    s.vocabulary = c.word_counts().size();
    s.balanced = s.positive == s.negative;
    if (!s.balanced) {
      log << "warning: domain " << s.domain << " is unbalanced (" << s.positive
          << " positive, " << s.negative << " negative)\n";
    }
    rows.push_back(std::move(s));
  }
  ensure_out_dir(config);
  std::ostringstream out;
  out << "domain,reviews,positive,negative,tokens,vocabulary,"
         "mean_review_length,balanced\n";
  char mean[32];
  for (const CorpusSummary& s : rows) {
    std::snprintf(mean, sizeof(mean), "%.2f",
                  static_cast<double>(s.tokens) / static_cast<double>(s.reviews));
    out << csv::join({s.domain, std::to_string(s.reviews),
                      std::to_string(s.positive), std::to_string(s.negative),
                      std::to_string(s.tokens), std::to_string(s.vocabulary),
                      mean, s.balanced ? "yes" : "no"})
        << '\n';
  }
  write_file(config.out / "corpus_summary.csv", out.str());
  return rows;
}

std::vector<fs::path> cmd_metrics(const RunConfig& config, std::ostream& log) {
  if (config.metrics.empty()) throw InputError("no metrics selected");
  if (config.corpora.size() < 2) {
    throw InputError("metrics need at least 2 domains");
  }
  const std::vector<std::string> domains = domain_ids(config);

  // Pre-flight: every input of every selected metric must exist.
  for (MetricId m : config.metrics) {
    const std::string name(to_string(m));
    if (uses_word_vectors(m) || uses_sentence_vectors(m)) {
      auto it = config.vectors.find(m);
      if (it == config.vectors.end()) {
        throw InputError(name + " selected but no vector directory given "
                         "(--vectors " + name + "=<dir>)");
      }
      for (const std::string& d : domains) {
        const fs::path file = vector_file(it->second, d);
        if (!fs::exists(file)) {
          throw InputError(name + ": missing vector file " + file.string() +
                           " for domain " + d);
        }
      }
    }
    if (uses_word_vectors(m) &&
        (!config.adjectives || !fs::exists(*config.adjectives))) {
      throw InputError(name + " needs an adjective list (--adjectives)");
    }
    if (uses_sentence_vectors(m) &&
        (!config.sentiment_lexicon || !fs::exists(*config.sentiment_lexicon))) {
      throw InputError(name +
                       " needs a sentiment lexicon (--sentiment-lexicon)");
    }
  }
  for (const auto& [domain, path] : config.corpora) {
    if (!fs::exists(path)) {
      throw InputError("domain " + domain + ": corpus file " + path.string() +
                       " does not exist");
    }
  }

  const std::vector<Corpus> corpora = load_corpora(config, log);
  std::optional<AdjectiveLexicon> adjectives;
  std::optional<SentimentLexicon> lexicon;
  if (has_metric(config, uses_word_vectors)) {
    adjectives = load_adjectives(*config.adjectives);
  }
  if (has_metric(config, uses_sentence_vectors)) {
    lexicon = load_sentiment_lexicon(*config.sentiment_lexicon,
                                     config.sentiment_lexicon_format);
  }

  ensure_out_dir(config);
  std::vector<fs::path> written;
  std::vector<std::string> warnings;
  for (MetricId m : config.metrics) {
    std::vector<MetricResult> rows;
    if (is_labelled(m)) {
      rows = labelled_metric_matrix(m, corpora, config.labelled);
    } else if (m == MetricId::kNGRAM) {
      rows = ngram_metric_matrix(corpora);
      std::ostringstream overlap;
      write_overlap_csv(overlap, ngram_overlap_matrix(corpora));
      const fs::path file = config.out / "ngram_overlap.csv";
      write_file(file, overlap.str());
      written.push_back(file);
    } else if (uses_word_vectors(m)) {
      std::vector<WordVectorTable> tables;
      for (const std::string& d : domains) {
        tables.push_back(load_word_vectors(vector_file(config.vectors.at(m), d), d));
      }
      rows = word_metric_matrix(m, tables, *adjectives);
    } else {
      const SelectionMode mode = m == MetricId::kULM7 ? SelectionMode::kTopScore
                                                      : SelectionMode::kHeldOut;
      std::vector<SentenceVectorSet> sets;
      for (std::size_t i = 0; i < domains.size(); ++i) {
        SentenceVectorSet all = load_sentence_vectors(
            vector_file(config.vectors.at(m), domains[i]), domains[i]);
        sets.push_back(select_test_vectors(corpora[i], *lexicon, all,
                                           config.test_vectors, mode,
                                           &warnings));
        if (sets.back().vectors.empty()) {
          throw InputError(std::string(to_string(m)) + ": no review of domain " +
                           domains[i] + " passes the sentiment filter");
        }
      }
      flush_warnings(log, warnings);
      rows = sentence_metric_matrix(m, sets);
    }
    for (const MetricResult& r : rows) {
      if (!r.value) {
        log << "notice: " << to_string(m) << " has no value for (" << r.source
            << ", " << r.target << "); ranked last\n";
      }
    }
    std::ostringstream out;
    write_metric_csv(out, rows);
    const fs::path file =
        config.out / ("metrics_" + std::string(to_string(m)) + ".csv");
    write_file(file, out.str());
    written.push_back(file);
  }
  return written;
}

RecommendationReport cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const AccuracyMatrix matrix = obtain_matrix(config, log);
  std::map<std::string, std::vector<MetricResult>> results;
  for (MetricId m : config.metrics) {
    const fs::path file = config.metric_input_dir() /
                          ("metrics_" + std::string(to_string(m)) + ".csv");
    std::ifstream in(file);
    if (!in) {
      throw InputError("cannot open " + file.string() +
                       " (run the metrics command first)");
    }
    try {
      results[std::string(to_string(m))] = read_metric_csv(in);
    } catch (const InputError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
  }
  RecommendationReport report =
      recommendation_report(matrix, results, config.ks);

  ensure_out_dir(config);
  write_chart_files(config, report.chart);
  if (results.empty()) {
    log << "notice: no metrics selected; wrote the recommendation chart only\n";
    return report;
  }
  std::ostringstream csv_out, md_out, breakdown;
  write_eval_csv(csv_out, report.evaluations);
  write_eval_markdown(md_out, report.evaluations);
  write_eval_breakdown_csv(breakdown, report.evaluations);
  write_file(config.out / "eval_report.csv", csv_out.str());
  write_file(config.out / "eval_report.md", md_out.str());
  write_file(config.out / "eval_breakdown.csv", breakdown.str());
  return report;
}

std::vector<ChartRow> cmd_chart(const RunConfig& config, std::ostream& log) {
  const std::vector<ChartRow> rows = chart(obtain_matrix(config, log));
  ensure_out_dir(config);
  write_chart_files(config, rows);
  return rows;
}

AccuracyMatrix cmd_baseline(const RunConfig& config, std::ostream& log) {
  const std::vector<Corpus> corpora = load_corpora(config, log);
  BaselineOptions options = config.baseline;
  options.seed = config.seed;
  std::vector<std::string> warnings;
  AccuracyMatrix matrix = train_eval_baseline(corpora, options, &warnings);
  flush_warnings(log, warnings);
  ensure_out_dir(config);
  std::ostringstream out;
  write_accuracy_matrix(out, matrix);
  write_file(config.out / "accuracy_matrix.csv", out.str());
  // Re-read so downstream users see exactly the persisted 2-decimal values.
  std::istringstream in(out.str());
  return read_accuracy_matrix(in);
}

}  // namespace cdsa
