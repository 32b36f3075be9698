#ifndef CDSA_LEXSTATS_H_
#define CDSA_LEXSTATS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdsa/corpus.h"

namespace cdsa {

// Probability of a word's occurrences falling in positive (p) and negative
// (n) reviews.
struct WordPolarity {
  double p = 0.5;
  double n = 0.5;
};

enum class PolarityMode {
  // p = c_p / (c_p + c_n) over token occurrences.
  kOccurrence,
  // Class-conditional document frequencies, renormalized to sum to one:
  // p = (d_p/R_p) / (d_p/R_p + d_n/R_n), R_x = reviews with label x.
  kDocumentFrequency,
};

struct PolarityTable {
  std::string domain;
  std::map<std::string, WordPolarity, std::less<>> entries;

  const WordPolarity* find(std::string_view word) const;
};

PolarityTable polarity_table(const Corpus& corpus, std::size_t min_count = 1,
                             PolarityMode mode = PolarityMode::kOccurrence);

using WordSet = std::set<std::string, std::less<>>;

inline constexpr double kPolarThreshold = 0.5;

// Words with |p - n| >= threshold.
WordSet polar_words(const PolarityTable& table,
                    double threshold = kPolarThreshold);

// Chi-square statistic of a word against an even split between classes.
// Throws std::invalid_argument when both counts are zero.
double chi_square(std::size_t positive, std::size_t negative);

struct SignificantWordSet {
  std::string domain;
  WordSet words;
};

inline constexpr std::size_t kSignificantMinCount = 10;
inline constexpr double kSignificantMinChi2 = 1.0;

SignificantWordSet significant_words(
    const Corpus& corpus, std::size_t min_count = kSignificantMinCount,
    double min_chi2 = kSignificantMinChi2);

// Guards logarithms against zero probabilities.
inline constexpr double kProbabilityFloor = 1e-6;
double clamp_probability(double p, double floor = kProbabilityFloor);

struct SentimentScores {
  double positive = 0;
  double negative = 0;
};

class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  explicit SentimentLexicon(
      std::unordered_map<std::string, SentimentScores> entries);

  const SentimentScores* find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_map<std::string, SentimentScores> entries_;
};

// TSV: word, pos_score, neg_score. '#' lines and a header line whose score
// columns are not numeric are skipped.
SentimentLexicon load_sentiment_tsv(const std::filesystem::path& path);
SentimentLexicon read_sentiment_tsv(std::istream& in);

// SentiWordNet 3.0 distribution: POS, ID, PosScore, NegScore, SynsetTerms,
// Gloss. Scores are averaged over every sense of a term, any POS.
SentimentLexicon load_sentiwordnet(const std::filesystem::path& path);
SentimentLexicon read_sentiwordnet(std::istream& in);

// Harmonic mean of positive word scores minus harmonic mean of the magnitudes
// of negative word scores, where a word scores pos - neg. Each token
// occurrence counts once; words outside the lexicon are ignored.
double review_score(std::span<const std::string> tokens,
                    const SentimentLexicon& lexicon);

struct ScoredReview {
  std::size_t position;  // index into Corpus::reviews()
  double score;
};

inline constexpr double kScoreThreshold = 0.01;
inline constexpr std::size_t kMaxReviewLength = 100;

// Reviews with |score| > threshold and at most max_len tokens, in corpus
// order.
std::vector<ScoredReview> filter_reviews(const Corpus& corpus,
                                         const SentimentLexicon& lexicon,
                                         double threshold = kScoreThreshold,
                                         std::size_t max_len = kMaxReviewLength);

}  // namespace cdsa

#endif  // CDSA_LEXSTATS_H_
