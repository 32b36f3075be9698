#include "cdsa/embedding_metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cdsa/error.h"
#include "parallel.h"

namespace cdsa {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string at_line(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

double norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Reads "key v1 ... vd" lines. Calls emit(key, vector, line) per entry.
template <typename Emit>
std::size_t read_keyed_vectors(std::istream& in, bool allow_header,
                               Emit emit) {
  std::size_t dims = 0;
  std::size_t line = 0;
  bool first = true;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    auto fields = split_ws(raw);
    if (fields.empty()) continue;
    if (first && allow_header && fields.size() == 2) {
      std::size_t count = 0, declared = 0;
      if (parse_size(fields[0], count) && parse_size(fields[1], declared)) {
        if (declared == 0) throw InputError(at_line(line) + "zero dimensions");
        dims = declared;
        first = false;
        continue;
      }
    }
    first = false;
    const std::size_t width = fields.size() - 1;
    if (width == 0) throw InputError(at_line(line) + "entry has no values");
    if (dims == 0) dims = width;
    if (width != dims) {
      throw InputError(at_line(line) + "expected " + std::to_string(dims) +
                       " values, found " + std::to_string(width));
    }
    Vector v(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      std::string_view f = fields[d + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[d]);
      if (ec != std::errc() || ptr != f.data() + f.size() ||
          !std::isfinite(v[d])) {
        throw InputError(at_line(line) + "bad number '" + std::string(f) + "'");
      }
    }
    if (norm(v) == 0) throw InputError(at_line(line) + "zero vector");
    emit(std::string(fields[0]), std::move(v), line);
  }
  return dims;
}

Vector mean_vector(const SentenceVectorSet& set) {
  Vector mean(set.dims, 0.0);
  for (const auto& [id, v] : set.vectors) {
    for (std::size_t d = 0; d < set.dims; ++d) mean[d] += v[d];
  }
  for (double& x : mean) x /= static_cast<double>(set.vectors.size());
  return mean;
}

}  // namespace

const Vector* WordVectorTable::find(std::string_view word) const {
  auto it = entries.find(std::string(word));
  return it == entries.end() ? nullptr : &it->second;
}

WordVectorTable read_word_vectors(std::istream& in, std::string domain) {
  WordVectorTable table{std::move(domain), 0, {}};
  table.dims = read_keyed_vectors(
      in, true, [&](std::string word, Vector v, std::size_t line) {
        if (!table.entries.emplace(word, std::move(v)).second) {
          throw InputError(at_line(line) + "duplicate word '" + word + "'");
        }
      });
  if (table.entries.empty()) throw InputError("word vector file is empty");
  return table;
}

WordVectorTable load_word_vectors(const std::filesystem::path& path,
                                  std::string domain) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open word vector file " + path.string());
  try {
    return read_word_vectors(in, std::move(domain));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SentenceVectorSet read_sentence_vectors(std::istream& in, std::string domain) {
  SentenceVectorSet set{std::move(domain), 0, {}};
  std::unordered_set<std::string> seen;
  set.dims = read_keyed_vectors(
      in, false, [&](std::string id, Vector v, std::size_t line) {
        if (!seen.insert(id).second) {
          throw InputError(at_line(line) + "duplicate review id '" + id + "'");
        }
        set.vectors.emplace_back(std::move(id), std::move(v));
      });
  if (set.vectors.empty()) throw InputError("sentence vector file is empty");
  return set;
}

SentenceVectorSet load_sentence_vectors(const std::filesystem::path& path,
                                        std::string domain) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open sentence vector file " + path.string());
  }
  try {
    return read_sentence_vectors(in, std::move(domain));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

AdjectiveLexicon::AdjectiveLexicon(std::vector<std::string> words) {
  for (std::string& w : words) {
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (!w.empty()) words_.insert(std::move(w));
  }
}

bool AdjectiveLexicon::contains(std::string_view word) const {
  return words_.contains(std::string(word));
}

AdjectiveLexicon load_adjectives(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open adjective list " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    for (std::string_view w : split_ws(line)) words.emplace_back(w);
  }
  AdjectiveLexicon lexicon(std::move(words));
  if (lexicon.size() == 0) {
    throw InputError(path.string() + ": adjective list is empty");
  }
  return lexicon;
}

double angular_similarity(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vectors differ in dimensionality");
  }
  const double na = norm(a), nb = norm(b);
  if (na == 0 || nb == 0) throw std::invalid_argument("zero vector");
  // angle = 2 atan2(|a/|a| - b/|b||, |a/|a| + b/|b||): equal to
  // arccos(cos) but accurate for nearly parallel vectors, and always in
  // [0, pi] so no clamping is needed.
  double diff = 0, sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] / na, y = b[i] / nb;
    diff += (x - y) * (x - y);
    sum += (x + y) * (x + y);
  }
  const double angle = 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
  return 1.0 - angle / std::numbers::pi;
}

double word_metric(const WordVectorTable& source,
                   const WordVectorTable& target,
                   const AdjectiveLexicon& adjectives) {
  if (source.dims != target.dims) {
    throw InputError("word vectors of '" + source.domain + "' and '" +
                     target.domain + "' differ in dimensionality");
  }
  std::size_t in_source = 0, in_target = 0, common = 0;
  double sum = 0;
  for (const auto& [word, v] : source.entries) {
    if (!adjectives.contains(word)) continue;
    ++in_source;
    if (const Vector* u = target.find(word)) {
      ++common;
      sum += angular_similarity(v, *u);
    }
  }
  for (const auto& [word, v] : target.entries) {
    if (adjectives.contains(word)) ++in_target;
  }
  if (common == 0) {
    throw UnrankablePair("no common adjectives between '" + source.domain +
                         "' and '" + target.domain + "'");
  }
  const double mean = sum / static_cast<double>(common);
  const double j = static_cast<double>(common) /
                   static_cast<double>(in_source + in_target - common);
  return mean + j;
}

double sentence_metric(const SentenceVectorSet& source,
                       const SentenceVectorSet& target) {
  if (source.vectors.empty() || target.vectors.empty()) {
    throw std::invalid_argument("empty sentence vector set");
  }
  if (source.dims != target.dims) {
    throw InputError("sentence vectors of '" + source.domain + "' and '" +
                     target.domain + "' differ in dimensionality");
  }
  const Vector a = mean_vector(source);
  const Vector b = mean_vector(target);
  constexpr double kTiny = 1e-12;
  if (norm(a) < kTiny || norm(b) < kTiny) {
    throw UnrankablePair("mean sentence vector is numerically zero for '" +
                         (norm(a) < kTiny ? source.domain : target.domain) +
                         "'");
  }
  return angular_similarity(a, b);
}

SentenceVectorSet select_test_vectors(const Corpus& corpus,
                                      const SentimentLexicon& lexicon,
                                      const SentenceVectorSet& vectors,
                                      std::size_t count, SelectionMode mode,
                                      std::vector<std::string>* warnings) {
  std::unordered_map<std::string_view, const Vector*> by_id;
  for (const auto& [id, v] : vectors.vectors) by_id.emplace(id, &v);

  std::vector<ScoredReview> qualifying = filter_reviews(corpus, lexicon);
  if (qualifying.size() < count && warnings) {
    warnings->push_back("domain '" + corpus.domain() + "': only " +
                        std::to_string(qualifying.size()) +
                        " reviews pass the sentiment filter; using all of "
                        "them instead of " +
                        std::to_string(count));
  }
  const std::size_t take = std::min(count, qualifying.size());
  if (mode == SelectionMode::kTopScore) {
    std::stable_sort(qualifying.begin(), qualifying.end(),
                     [](const ScoredReview& a, const ScoredReview& b) {
                       return std::abs(a.score) > std::abs(b.score);
                     });
    qualifying.resize(take);
  } else {
    qualifying.erase(qualifying.begin(),
                     qualifying.end() - static_cast<std::ptrdiff_t>(take));
  }

  SentenceVectorSet out{vectors.domain, vectors.dims, {}};
  for (const ScoredReview& r : qualifying) {
    const std::string id = corpus.reviews()[r.position].id();
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw InputError("no sentence vector for review " + id);
    }
    out.vectors.emplace_back(id, *it->second);
  }
  return out;
}

namespace {

template <typename Item, typename Fn>
std::vector<MetricResult> pair_matrix(MetricId metric,
                                      std::span<const Item> items, Fn fn) {
  const std::size_t n = items.size();
  std::vector<MetricResult> out(n * n);
  internal::parallel_for(n * n, [&](std::size_t cell) {
    const std::size_t s = cell / n, t = cell % n;
    if (s == t) return;
    MetricResult& r = out[cell];
    r.metric = metric;
    r.source = items[s].domain;
    r.target = items[t].domain;
    try {
      r.value = fn(items[s], items[t]);
    } catch (const UnrankablePair&) {
      r.value.reset();
    }
  });
  std::erase_if(out, [](const MetricResult& r) { return r.source.empty(); });
  return out;
}

}  // namespace

std::vector<MetricResult> word_metric_matrix(
    MetricId metric, std::span<const WordVectorTable> tables,
    const AdjectiveLexicon& adjectives) {
  if (!uses_word_vectors(metric)) {
    throw std::invalid_argument(std::string(to_string(metric)) +
                                " is not a word-vector metric");
  }
  return pair_matrix(metric, tables,
                     [&](const WordVectorTable& s, const WordVectorTable& t) {
                       return word_metric(s, t, adjectives);
                     });
}

std::vector<MetricResult> sentence_metric_matrix(
    MetricId metric, std::span<const SentenceVectorSet> sets) {
  if (!uses_sentence_vectors(metric)) {
    throw std::invalid_argument(std::string(to_string(metric)) +
                                " is not a sentence-vector metric");
  }
  return pair_matrix(metric, sets, [](const SentenceVectorSet& s,
                                      const SentenceVectorSet& t) {
    return sentence_metric(s, t);
  });
}

}  // namespace cdsa
