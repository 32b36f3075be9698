#ifndef CDSA_EMBEDDING_METRICS_H_
#define CDSA_EMBEDDING_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cdsa/corpus.h"
#include "cdsa/lexstats.h"
#include "cdsa/metric.h"

namespace cdsa {

using Vector = std::vector<double>;

// One vector per word, as emitted by word2vec/GloVe/fastText in text mode
// (contextual models must be averaged per word beforehand).
struct WordVectorTable {
  std::string domain;
  std::size_t dims = 0;
  std::unordered_map<std::string, Vector> entries;

  const Vector* find(std::string_view word) const;
};

// Optional "<count> <dims>" header, then "word v1 ... vd" per line.
// Inconsistent widths and zero vectors are rejected with the line number.
WordVectorTable load_word_vectors(const std::filesystem::path& path,
                                  std::string domain);
WordVectorTable read_word_vectors(std::istream& in, std::string domain);

struct SentenceVectorSet {
  std::string domain;
  std::size_t dims = 0;
  std::vector<std::pair<std::string, Vector>> vectors;  // (review id, vector)
};

// "<review id> v1 ... vd" per line; ids follow Review::id().
SentenceVectorSet load_sentence_vectors(const std::filesystem::path& path,
                                        std::string domain);
SentenceVectorSet read_sentence_vectors(std::istream& in, std::string domain);

class AdjectiveLexicon {
 public:
  AdjectiveLexicon() = default;
  explicit AdjectiveLexicon(std::vector<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// One word per line, lowercased; '#' starts a comment.
AdjectiveLexicon load_adjectives(const std::filesystem::path& path);

// 1 - arccos(cos)/pi, with the cosine clamped to [-1, 1].
double angular_similarity(std::span<const double> a, std::span<const double> b);

// Mean angular similarity over adjectives present in both tables plus the
// Jaccard coefficient of the two tables' adjective sets.
double word_metric(const WordVectorTable& source,
                   const WordVectorTable& target,
                   const AdjectiveLexicon& adjectives);

// Angular similarity of the two sets' mean vectors.
double sentence_metric(const SentenceVectorSet& source,
                       const SentenceVectorSet& target);

enum class SelectionMode {
  // Highest |sentiment score| first (sentence-encoder metric).
  kTopScore,
  // Last `count` qualifying reviews in corpus order (held-out test slice).
  kHeldOut,
};

inline constexpr std::size_t kTestVectorCount = 500;

// Picks the vectors of reviews that pass filter_reviews. Uses every
// qualifying review, with a warning, when fewer than `count` qualify.
SentenceVectorSet select_test_vectors(
    const Corpus& corpus, const SentimentLexicon& lexicon,
    const SentenceVectorSet& vectors, std::size_t count = kTestVectorCount,
    SelectionMode mode = SelectionMode::kHeldOut,
    std::vector<std::string>* warnings = nullptr);

// All ordered pairs for a word-vector metric (ULM1/3/4/6) or a
// sentence-vector metric (ULM2/5/7). Inputs are in domain order.
std::vector<MetricResult> word_metric_matrix(
    MetricId metric, std::span<const WordVectorTable> tables,
    const AdjectiveLexicon& adjectives);
std::vector<MetricResult> sentence_metric_matrix(
    MetricId metric, std::span<const SentenceVectorSet> sets);

}  // namespace cdsa

#endif  // CDSA_EMBEDDING_METRICS_H_
