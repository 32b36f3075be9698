#include "cdsa/lexstats.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdsa/error.h"

namespace cdsa {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

void check_score(double v, std::size_t line) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError("line " + std::to_string(line) +
                     ": sentiment score outside [0,1]");
  }
}

double harmonic_mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double inv = 0;
  for (double v : values) inv += 1.0 / v;
  return static_cast<double>(values.size()) / inv;
}

}  // namespace

const WordPolarity* PolarityTable::find(std::string_view word) const {
  auto it = entries.find(word);
  return it == entries.end() ? nullptr : &it->second;
}

PolarityTable polarity_table(const Corpus& corpus, std::size_t min_count,
                             PolarityMode mode) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  PolarityTable table{corpus.domain(), {}};
  const double pos_reviews = static_cast<double>(
      std::max<std::size_t>(1, corpus.review_count(Polarity::kPositive)));
  const double neg_reviews = static_cast<double>(
      std::max<std::size_t>(1, corpus.review_count(Polarity::kNegative)));
  for (const auto& [word, wc] : corpus.word_counts()) {
    if (wc.total() < min_count || wc.total() == 0) continue;
    WordPolarity wp;
    if (mode == PolarityMode::kOccurrence) {
      const double total = static_cast<double>(wc.total());
      wp.p = static_cast<double>(wc.positive) / total;
      wp.n = static_cast<double>(wc.negative) / total;
    } else {
      const double rp = static_cast<double>(wc.positive_docs) / pos_reviews;
      const double rn = static_cast<double>(wc.negative_docs) / neg_reviews;
      wp.p = rp / (rp + rn);
      wp.n = rn / (rp + rn);
    }
    table.entries.emplace(word, wp);
  }
  return table;
}

WordSet polar_words(const PolarityTable& table, double threshold) {
  // Tolerance keeps exact boundary cases such as (0.75, 0.25) inclusive.
  constexpr double kSlack = 1e-12;
  WordSet out;
  for (const auto& [word, wp] : table.entries) {
    if (std::abs(wp.p - wp.n) >= threshold - kSlack) out.insert(word);
  }
  return out;
}

double chi_square(std::size_t positive, std::size_t negative) {
  if (positive + negative == 0) {
    throw std::invalid_argument("chi_square: word has no occurrences");
  }
  const double cp = static_cast<double>(positive);
  const double cn = static_cast<double>(negative);
  const double mu = (cp + cn) / 2.0;
  return ((cp - mu) * (cp - mu) + (cn - mu) * (cn - mu)) / mu;
}

SignificantWordSet significant_words(const Corpus& corpus,
                                     std::size_t min_count, double min_chi2) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  SignificantWordSet out{corpus.domain(), {}};
  for (const auto& [word, wc] : corpus.word_counts()) {
    if (wc.total() < min_count || wc.total() == 0) continue;
    if (chi_square(wc.positive, wc.negative) >= min_chi2) {
      out.words.insert(word);
    }
  }
  return out;
}

double clamp_probability(double p, double floor) {
  return std::clamp(p, floor, 1.0 - floor);
}

SentimentLexicon::SentimentLexicon(
    std::unordered_map<std::string, SentimentScores> entries)
    : entries_(std::move(entries)) {
  for (const auto& [word, s] : entries_) {
    if (!(s.positive >= 0 && s.positive <= 1 && s.negative >= 0 &&
          s.negative <= 1)) {
      throw std::invalid_argument("sentiment score for '" + word +
                                  "' outside [0,1]");
    }
  }
}

const SentimentScores* SentimentLexicon::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

SentimentLexicon read_sentiment_tsv(std::istream& in) {
  std::unordered_map<std::string, SentimentScores> entries;
  std::string raw;
  std::size_t line = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view view = trim(raw);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_tabs(view);
    SentimentScores s;
    bool ok = fields.size() == 3 && parse_double(fields[1], s.positive) &&
              parse_double(fields[2], s.negative);
    if (!ok) {
      if (first && fields.size() == 3) {  // header
        first = false;
        continue;
      }
      throw InputError("line " + std::to_string(line) +
                       ": expected word<TAB>pos_score<TAB>neg_score");
    }
    first = false;
    check_score(s.positive, line);
    check_score(s.negative, line);
    entries[lowercase(trim(fields[0]))] = s;
  }
  if (entries.empty()) throw InputError("sentiment lexicon has no entries");
  return SentimentLexicon(std::move(entries));
}

SentimentLexicon read_sentiwordnet(std::istream& in) {
  struct Sum {
    double positive = 0, negative = 0;
    std::size_t senses = 0;
  };
  std::unordered_map<std::string, Sum> sums;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw.front() == '#') continue;
    auto fields = split_tabs(raw);
    if (fields.size() < 5) {
      throw InputError("line " + std::to_string(line) +
                       ": expected POS, ID, PosScore, NegScore, SynsetTerms");
    }
    double pos = 0, neg = 0;
    if (!parse_double(fields[2], pos) || !parse_double(fields[3], neg)) {
      // The distribution ends with an empty record of bare tabs.
      if (trim(fields[2]).empty() && trim(fields[3]).empty()) continue;
      throw InputError("line " + std::to_string(line) + ": bad score");
    }
    check_score(pos, line);
    check_score(neg, line);
    std::istringstream terms{std::string(fields[4])};
    std::string term;
    while (terms >> term) {
      // "good#3" -> "good"
      if (auto hash = term.rfind('#'); hash != std::string::npos) {
        term.erase(hash);
      }
      if (term.empty()) continue;
      Sum& s = sums[lowercase(term)];
      s.positive += pos;
      s.negative += neg;
      ++s.senses;
    }
  }
  std::unordered_map<std::string, SentimentScores> entries;
  for (const auto& [word, s] : sums) {
    const double n = static_cast<double>(s.senses);
    entries[word] = {s.positive / n, s.negative / n};
  }
  if (entries.empty()) throw InputError("sentiment lexicon has no entries");
  return SentimentLexicon(std::move(entries));
}

SentimentLexicon load_sentiment_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sentiment lexicon " + path.string());
  try {
    return read_sentiment_tsv(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SentimentLexicon load_sentiwordnet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open SentiWordNet file " + path.string());
  try {
    return read_sentiwordnet(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

double review_score(std::span<const std::string> tokens,
                    const SentimentLexicon& lexicon) {
  if (lexicon.empty()) throw std::invalid_argument("empty sentiment lexicon");
  std::vector<double> positive, negative;
  for (const std::string& tok : tokens) {
    const SentimentScores* s = lexicon.find(tok);
    if (!s) continue;
    const double signed_score = s->positive - s->negative;
    if (signed_score > 0) {
      positive.push_back(signed_score);
    } else if (signed_score < 0) {
      negative.push_back(-signed_score);
    }
  }
  return harmonic_mean(positive) - harmonic_mean(negative);
}

std::vector<ScoredReview> filter_reviews(const Corpus& corpus,
                                         const SentimentLexicon& lexicon,
                                         double threshold,
                                         std::size_t max_len) {
  std::vector<ScoredReview> out;
  const auto& reviews = corpus.reviews();
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (reviews[i].tokens.size() > max_len) continue;
    const double score = review_score(reviews[i].tokens, lexicon);
    if (std::abs(score) > threshold) out.push_back({i, score});
  }
  return out;
}

}  // namespace cdsa
