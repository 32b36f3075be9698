#include "cdsa/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cdsa/csv.h"
#include "cdsa/error.h"
#include "json.hpp"
#include "numfmt.h"

namespace cdsa {
namespace {

std::size_t label_slot(Polarity p) { return p == Polarity::kPositive ? 0 : 1; }

// Decodes one UTF-8 code point starting at text[i] and advances i. Invalid
// sequences yield U+FFFD and consume a single byte.
char32_t decode_utf8(std::string_view text, std::size_t& i) {
  auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(text[k]);
  };
  unsigned char lead = byte(i);
  if (lead < 0x80) {
    ++i;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + extra >= text.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += extra + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_space(char32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Letters of any script. Symbol, punctuation, digit and emoji blocks are
// excluded; digits outside ASCII are not distinguished from letters.
bool is_alpha(char32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp == 0xD7 || cp == 0xF7 || cp == 0xFFFD) return false;
  if (cp >= 0xC0 && cp <= 0x1FFF) return true;
  if (cp >= 0x3040 && cp <= 0xD7FF) return true;
  if (cp >= 0xF900 && cp <= 0xFDFF) return true;
  if (cp >= 0xFE70 && cp <= 0xFEFF) return true;
  if ((cp >= 0xFF21 && cp <= 0xFF3A) || (cp >= 0xFF41 && cp <= 0xFF5A)) {
    return true;
  }
  if (cp >= 0xFF66 && cp <= 0xFFDC) return true;
  if (cp >= 0x10000 && cp <= 0x1EFFF) return true;
  return cp >= 0x20000 && cp <= 0x3FFFF;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 0x20;
  return cp;
}

std::vector<std::string> clean_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = decode_utf8(text, i);
    if (is_space(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (is_alpha(cp)) {
      encode_utf8(to_lower(cp), current);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string line_prefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

struct RawRecord {
  std::string domain;
  std::string label;
  std::string text;
};

Polarity require_polarity(const std::string& label, std::size_t line) {
  auto p = parse_polarity(label);
  if (!p) {
    throw InputError(line_prefix(line) + "unknown label '" + label +
                     "' (expected positive or negative)");
  }
  return *p;
}

template <typename NextRecord>
Corpus build_corpus(NextRecord next, const Normalizer& normalizer,
                    std::vector<std::string>* warnings) {
  std::vector<Review> reviews;
  std::optional<std::string> domain;
  std::size_t record_index = 0;
  std::size_t line = 0;
  RawRecord rec;
  while (next(rec, line)) {
    Polarity label = require_polarity(rec.label, line);
    if (rec.domain.empty()) {
      throw InputError(line_prefix(line) + "empty domain");
    }
    if (!domain) {
      domain = rec.domain;
    } else if (*domain != rec.domain) {
      throw InputError(line_prefix(line) + "domain '" + rec.domain +
                       "' differs from '" + *domain +
                       "'; one corpus file holds one domain");
    }
    Review review{rec.domain, label, normalizer(rec.text), record_index};
    if (review.tokens.empty()) {
      if (warnings) {
        warnings->push_back(line_prefix(line) + "review " + review.id() +
                            " has no tokens after normalization; dropped");
      }
    } else {
      reviews.push_back(std::move(review));
    }
    ++record_index;
  }
  if (!domain) throw InputError("corpus file contains no records");
  if (reviews.empty()) {
    throw InputError("corpus '" + *domain +
                     "' has no reviews left after normalization");
  }
  return Corpus(*domain, std::move(reviews));
}

}  // namespace

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::kPositive ? "positive" : "negative";
}

std::optional<Polarity> parse_polarity(std::string_view label) {
  if (label == "positive") return Polarity::kPositive;
  if (label == "negative") return Polarity::kNegative;
  return std::nullopt;
}

std::string Review::id() const {
  return domain + ":" + std::to_string(index);
}

std::string join_ngram(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string_view> split_ngram(std::string_view ngram) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= ngram.size()) {
    std::size_t end = ngram.find(' ', start);
    if (end == std::string_view::npos) end = ngram.size();
    parts.push_back(ngram.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

Corpus::Corpus(std::string domain, std::vector<Review> reviews)
    : domain_(std::move(domain)), reviews_(std::move(reviews)) {
  std::unordered_set<std::string_view> seen;
  for (const Review& r : reviews_) {
    if (r.domain != domain_) {
      throw InputError("review " + r.id() + " does not belong to domain '" +
                       domain_ + "'");
    }
    if (r.tokens.empty()) {
      throw InputError("review " + r.id() + " has no tokens");
    }
    const std::size_t slot = label_slot(r.label);
    ++reviews_by_label_[slot];
    tokens_by_label_[slot] += r.tokens.size();

    seen.clear();
    for (const std::string& tok : r.tokens) {
      WordCounts& wc = words_[tok];
      const bool first = seen.insert(tok).second;
      if (r.label == Polarity::kPositive) {
        ++wc.positive;
        if (first) ++wc.positive_docs;
      } else {
        ++wc.negative;
        if (first) ++wc.negative_docs;
      }
    }

    for (int n = 1; n <= kMaxNgramOrder; ++n) {
      if (r.tokens.size() < static_cast<std::size_t>(n)) break;
      auto& counts = ngrams_[n - 1];
      for (std::size_t i = 0; i + n <= r.tokens.size(); ++i) {
        ++counts[join_ngram(std::span(r.tokens).subspan(i, n))];
        ++ngram_totals_[n - 1];
      }
    }
  }
}

std::size_t Corpus::review_count(Polarity label) const {
  return reviews_by_label_[label_slot(label)];
}

std::size_t Corpus::token_count(Polarity label) const {
  return tokens_by_label_[label_slot(label)];
}

std::size_t Corpus::token_count() const {
  return tokens_by_label_[0] + tokens_by_label_[1];
}

const WordCounts* Corpus::find_word(std::string_view word) const {
  auto it = words_.find(std::string(word));
  return it == words_.end() ? nullptr : &it->second;
}

const NgramCounts& Corpus::ngram_counts(int order) const {
  if (order < 1 || order > kMaxNgramOrder) {
    throw std::out_of_range("n-gram order must be in 1..4, got " +
                            std::to_string(order));
  }
  return ngrams_[order - 1];
}

std::size_t Corpus::ngram_total(int order) const {
  if (order < 1 || order > kMaxNgramOrder) {
    throw std::out_of_range("n-gram order must be in 1..4, got " +
                            std::to_string(order));
  }
  return ngram_totals_[order - 1];
}

Normalizer::Normalizer() : Normalizer(default_stopwords()) {}

Normalizer::Normalizer(const std::vector<std::string>& stopwords) {
  // Entries are cleaned like tokens so that "don't" also removes "dont".
  for (const std::string& w : stopwords) {
    for (std::string& tok : clean_tokens(w)) stopwords_.insert(std::move(tok));
  }
}

Normalizer Normalizer::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    for (std::string& tok : clean_tokens(line)) words.push_back(std::move(tok));
  }
  return Normalizer(words);
}

std::vector<std::string> Normalizer::operator()(std::string_view text) const {
  std::vector<std::string> tokens = clean_tokens(text);
  std::erase_if(tokens, [&](const std::string& t) { return is_stopword(t); });
  return tokens;
}

bool Normalizer::is_stopword(std::string_view token) const {
  return stopwords_.contains(std::string(token));
}

std::vector<std::string> tokenize(std::string_view text) {
  return clean_tokens(text);
}

std::vector<std::string> normalize(std::string_view text) {
  static const Normalizer kDefault;
  return kDefault(text);
}

CorpusFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

Corpus read_corpus(std::istream& in, CorpusFormat format,
                   const Normalizer& normalizer,
                   std::vector<std::string>* warnings) {
  if (format == CorpusFormat::kJsonl) {
    std::size_t physical = 0;
    auto next = [&](RawRecord& rec, std::size_t& line) {
      std::string raw;
      while (std::getline(in, raw)) {
        ++physical;
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        line = physical;
        nlohmann::json obj;
        try {
          obj = nlohmann::json::parse(raw);
        } catch (const nlohmann::json::parse_error& e) {
          throw InputError(line_prefix(line) + "malformed JSON record: " +
                           e.what());
        }
        if (!obj.is_object()) {
          throw InputError(line_prefix(line) + "record is not a JSON object");
        }
        auto field = [&](const char* name) {
          auto it = obj.find(name);
          if (it == obj.end() || !it->is_string()) {
            throw InputError(line_prefix(line) + "missing string field '" +
                             name + "'");
          }
          return it->get<std::string>();
        };
        rec.domain = field("domain");
        rec.label = field("label");
        rec.text = field("text");
        return true;
      }
      return false;
    };
    return build_corpus(next, normalizer, warnings);
  }

  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw InputError("corpus file contains no records");
  std::size_t domain_col = 0, label_col = 0, text_col = 0;
  {
    int found = 0;
    for (std::size_t i = 0; i < header->size(); ++i) {
      const std::string& h = (*header)[i];
      if (h == "domain") domain_col = i, found |= 1;
      if (h == "label") label_col = i, found |= 2;
      if (h == "text") text_col = i, found |= 4;
    }
    if (found != 7) {
      throw InputError(line_prefix(reader.line()) +
                       "CSV header must name columns domain,label,text");
    }
  }
  auto next = [&](RawRecord& rec, std::size_t& line) {
    auto fields = reader.next();
    if (!fields) return false;
    line = reader.line();
    if (fields->size() != header->size()) {
      throw InputError(line_prefix(line) + "expected " +
                       std::to_string(header->size()) + " fields, found " +
                       std::to_string(fields->size()));
    }
    rec.domain = (*fields)[domain_col];
    rec.label = (*fields)[label_col];
    rec.text = (*fields)[text_col];
    return true;
  };
  return build_corpus(next, normalizer, warnings);
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const Normalizer& normalizer,
                   std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file " + path.string());
  try {
    return read_corpus(in, format, normalizer, warnings);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> top_k_ngrams(const Corpus& corpus, int order,
                                      std::size_t k) {
  const NgramCounts& counts = corpus.ngram_counts(order);
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  using Entry = std::pair<const std::string*, std::size_t>;
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [gram, n] : counts) entries.emplace_back(&gram, n);
  auto better = [](const Entry& a, const Entry& b) {
    if (a.second != b.second) return a.second > b.second;
    return *a.first < *b.first;
  };
  const std::size_t take = std::min(k, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + take, entries.end(),
                    better);
  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(*entries[i].first);
  return out;
}

namespace {

std::size_t shared_count(std::vector<std::string> a,
                         std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return common.size();
}

void check_overlap_args(std::size_t k, const std::vector<int>& orders) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (orders.empty()) throw std::invalid_argument("no n-gram orders given");
}

}  // namespace

double ngram_overlap(const Corpus& a, const Corpus& b, std::size_t k,
                     const std::vector<int>& orders) {
  check_overlap_args(k, orders);
  std::size_t hits = 0;
  for (int n : orders) {
    hits += shared_count(top_k_ngrams(a, n, k), top_k_ngrams(b, n, k));
  }
  return static_cast<double>(hits) / static_cast<double>(k * orders.size());
}

NgramOverlapMatrix ngram_overlap_matrix(std::span<const Corpus> corpora,
                                        std::size_t k,
                                        const std::vector<int>& orders) {
  check_overlap_args(k, orders);
  const std::size_t n = corpora.size();
  // top[i][o] = top-k list of corpus i for orders[o]
  std::vector<std::vector<std::vector<std::string>>> top(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int order : orders) top[i].push_back(top_k_ngrams(corpora[i], order, k));
  }
  NgramOverlapMatrix m;
  for (const Corpus& c : corpora) m.domains.push_back(c.domain());
  m.values.assign(n * n, std::numeric_limits<double>::quiet_NaN());
  const double denom = static_cast<double>(k * orders.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t hits = 0;
      for (std::size_t o = 0; o < orders.size(); ++o) {
        hits += shared_count(top[i][o], top[j][o]);
      }
      m.values[i * n + j] = m.values[j * n + i] =
          static_cast<double>(hits) / denom;
    }
  }
  return m;
}

void write_overlap_csv(std::ostream& out, const NgramOverlapMatrix& matrix) {
  const std::size_t n = matrix.domains.size();
  std::vector<std::string> row{""};
  row.insert(row.end(), matrix.domains.begin(), matrix.domains.end());
  out << csv::join(row) << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    row.assign(1, matrix.domains[i]);
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(j > i ? internal::format_fixed(matrix.at(i, j), 2) : "");
    }
    out << csv::join(row) << '\n';
  }
}

}  // namespace cdsa
