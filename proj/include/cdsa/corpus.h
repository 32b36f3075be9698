#ifndef CDSA_CORPUS_H_
#define CDSA_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cdsa {

enum class Polarity { kPositive, kNegative };

std::string_view to_string(Polarity polarity);
std::optional<Polarity> parse_polarity(std::string_view label);

struct Review {
  std::string domain;
  Polarity label = Polarity::kPositive;
  std::vector<std::string> tokens;
  // Position of the record in its source file (0-based), kept stable when
  // empty reviews are dropped so that external vector files stay aligned.
  std::size_t index = 0;

  // "<domain>:<index>", the key used by sentence-vector files.
  std::string id() const;
};

struct WordCounts {
  std::size_t positive = 0;       // occurrences in positive reviews
  std::size_t negative = 0;       // occurrences in negative reviews
  std::size_t positive_docs = 0;  // positive reviews containing the word
  std::size_t negative_docs = 0;

  std::size_t total() const { return positive + negative; }
};

// N-gram -> count. Keys are the n-gram tokens joined by a single space.
using NgramCounts = std::unordered_map<std::string, std::size_t>;

inline constexpr int kMaxNgramOrder = 4;

std::string join_ngram(std::span<const std::string> tokens);
std::vector<std::string_view> split_ngram(std::string_view ngram);

// A domain's labelled, normalized reviews plus cached token statistics.
// Immutable after construction.
class Corpus {
 public:
  // Throws InputError if a review has no tokens or belongs to another domain.
  Corpus(std::string domain, std::vector<Review> reviews);

  const std::string& domain() const { return domain_; }
  const std::vector<Review>& reviews() const { return reviews_; }
  std::size_t size() const { return reviews_.size(); }
  bool empty() const { return reviews_.empty(); }

  std::size_t review_count(Polarity label) const;
  std::size_t token_count(Polarity label) const;
  std::size_t token_count() const;

  const std::unordered_map<std::string, WordCounts>& word_counts() const {
    return words_;
  }
  const WordCounts* find_word(std::string_view word) const;

  // order in 1..kMaxNgramOrder; throws std::out_of_range otherwise.
  const NgramCounts& ngram_counts(int order) const;
  std::size_t ngram_total(int order) const;

 private:
  std::string domain_;
  std::vector<Review> reviews_;
  std::unordered_map<std::string, WordCounts> words_;
  std::array<NgramCounts, kMaxNgramOrder> ngrams_;
  std::array<std::size_t, kMaxNgramOrder> ngram_totals_{};
  std::array<std::size_t, 2> reviews_by_label_{};
  std::array<std::size_t, 2> tokens_by_label_{};
};

// Lowercases, strips every non-alphabetic character, splits on whitespace
// and drops stopwords. Output order follows the input.
class Normalizer {
 public:
  // Uses the bundled English stopword list.
  Normalizer();
  explicit Normalizer(const std::vector<std::string>& stopwords);

  // One stopword per line; '#' starts a comment.
  static Normalizer from_file(const std::filesystem::path& path);

  std::vector<std::string> operator()(std::string_view text) const;
  bool is_stopword(std::string_view token) const;
  std::size_t stopword_count() const { return stopwords_.size(); }

 private:
  std::unordered_set<std::string> stopwords_;
};

// Splits on whitespace and cleans each token (lowercase, alphabetic only)
// without stopword removal.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> normalize(std::string_view text);

const std::vector<std::string>& default_stopwords();

enum class CorpusFormat { kJsonl, kCsv };

// ".csv" -> kCsv, everything else -> kJsonl.
CorpusFormat format_from_path(const std::filesystem::path& path);

// Records whose text normalizes to nothing are dropped and reported through
// `warnings`. All records must share one domain.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const Normalizer& normalizer = Normalizer(),
                   std::vector<std::string>* warnings = nullptr);
Corpus read_corpus(std::istream& in, CorpusFormat format,
                   const Normalizer& normalizer = Normalizer(),
                   std::vector<std::string>* warnings = nullptr);

// The k most frequent n-grams of the given order, count descending, ties
// in ascending lexicographic order.
std::vector<std::string> top_k_ngrams(const Corpus& corpus, int order,
                                      std::size_t k);

inline const std::vector<int> kDefaultOverlapOrders = {2, 3, 4};

// Fraction of shared entries among the top-k n-grams of each order.
double ngram_overlap(const Corpus& a, const Corpus& b, std::size_t k = 10,
                     const std::vector<int>& orders = kDefaultOverlapOrders);

struct NgramOverlapMatrix {
  std::vector<std::string> domains;
  std::vector<double> values;  // row-major; diagonal is NaN

  double at(std::size_t i, std::size_t j) const {
    return values[i * domains.size() + j];
  }
};

NgramOverlapMatrix ngram_overlap_matrix(
    std::span<const Corpus> corpora, std::size_t k = 10,
    const std::vector<int>& orders = kDefaultOverlapOrders);

// Upper triangle populated with 2-decimal values, the rest left empty.
void write_overlap_csv(std::ostream& out, const NgramOverlapMatrix& matrix);

}  // namespace cdsa

#endif  // CDSA_CORPUS_H_
