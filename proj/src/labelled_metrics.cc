#include "cdsa/labelled_metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdsa/error.h"
#include "parallel.h"

namespace cdsa {
namespace {

struct CommonPolar {
  std::vector<std::pair<const WordPolarity*, const WordPolarity*>> pairs;
  std::size_t w1 = 0;
  std::size_t w2 = 0;
};

CommonPolar common_polar(const PolarityTable& s, const PolarityTable& t,
                         double threshold) {
  const WordSet ps = polar_words(s, threshold);
  const WordSet pt = polar_words(t, threshold);
  CommonPolar out;
  out.w1 = ps.size();
  out.w2 = pt.size();
  for (const std::string& w : ps) {
    if (pt.contains(w)) out.pairs.emplace_back(s.find(w), t.find(w));
  }
  if (out.pairs.empty()) {
    throw UnrankablePair("no common polar words between '" + s.domain +
                         "' and '" + t.domain + "'");
  }
  return out;
}

bool contains_polar(std::string_view ngram, const WordSet& polar) {
  for (std::string_view tok : split_ngram(ngram)) {
    if (polar.contains(tok)) return true;
  }
  return false;
}

double plogp(double p) { return p > 0 ? p * std::log(p) : 0.0; }

// Accumulates -sum p log p split by polar containment.
struct EntropyParts {
  double polar = 0;
  double other = 0;

  void add(double p, bool is_polar) {
    (is_polar ? polar : other) -= plogp(p);
  }
  double weighted(int order, double w) const {
    return order == 1 ? polar * w : polar * w + other / w;
  }
};

void check_order_weight(int order, double weight) {
  if (order < 1 || order > kMaxNgramOrder) {
    throw std::out_of_range("n-gram order must be in 1..4");
  }
  if (!(weight > 0)) throw std::invalid_argument("weight must be positive");
}

}  // namespace

std::size_t lm1_overlap(const SignificantWordSet& source,
                        const SignificantWordSet& target) {
  std::size_t n = 0;
  for (const std::string& w : source.words) n += target.words.contains(w);
  return n;
}

double jaccard(std::size_t common, std::size_t w1, std::size_t w2) {
  if (common == 0) throw UnrankablePair("no common polar words");
  if (common > std::min(w1, w2)) {
    throw std::invalid_argument("common count exceeds a polar set size");
  }
  return static_cast<double>(common) / static_cast<double>(w1 + w2 - common);
}

double skld(const WordPolarity& a, const WordPolarity& b, double floor) {
  const double p1 = clamp_probability(a.p, floor);
  const double n1 = clamp_probability(a.n, floor);
  const double p2 = clamp_probability(b.p, floor);
  const double n2 = clamp_probability(b.n, floor);
  const double forward = n1 * std::log(n1 / n2) + p1 * std::log(p1 / p2);
  const double backward = n2 * std::log(n2 / n1) + p2 * std::log(p2 / p1);
  return (forward + backward) / 2.0;
}

double lm2_skld(const PolarityTable& source, const PolarityTable& target,
                double polar_threshold, double floor) {
  const CommonPolar common = common_polar(source, target, polar_threshold);
  double sum = 0;
  for (const auto& [a, b] : common.pairs) sum += skld(*a, *b, floor);
  const double mean = sum / static_cast<double>(common.pairs.size());
  return mean + 1.0 / jaccard(common.pairs.size(), common.w1, common.w2);
}

double lm3_chameleon(const PolarityTable& source, const PolarityTable& target,
                     double polar_threshold) {
  const CommonPolar common = common_polar(source, target, polar_threshold);
  double sum = 0;
  for (const auto& [a, b] : common.pairs) {
    sum += std::abs(a->p - b->p) + std::abs(a->n - b->n);
  }
  const double mean = sum / static_cast<double>(common.pairs.size());
  return mean + 1.0 / jaccard(common.pairs.size(), common.w1, common.w2);
}

double weighted_entropy(const Corpus& corpus, const WordSet& polar, int order,
                        double weight) {
  check_order_weight(order, weight);
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  const std::size_t total = corpus.ngram_total(order);
  if (total == 0) return 0.0;
  EntropyParts parts;
  for (const auto& [gram, count] : corpus.ngram_counts(order)) {
    const bool is_polar = contains_polar(gram, polar);
    if (order == 1 && !is_polar) continue;
    parts.add(static_cast<double>(count) / static_cast<double>(total),
              is_polar);
  }
  return parts.weighted(order, weight);
}

double mixed_weighted_entropy(const Corpus& source, const Corpus& target,
                              const WordSet& polar, int order, double weight) {
  check_order_weight(order, weight);
  const NgramCounts& a = source.ngram_counts(order);
  const NgramCounts& b = target.ngram_counts(order);
  const double total = static_cast<double>(source.ngram_total(order) +
                                           target.ngram_total(order));
  if (total == 0) return 0.0;
  EntropyParts parts;
  auto add = [&](const std::string& gram, std::size_t count) {
    const bool is_polar = contains_polar(gram, polar);
    if (order == 1 && !is_polar) return;
    parts.add(static_cast<double>(count) / total, is_polar);
  };
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    add(gram, count + (it == b.end() ? 0 : it->second));
  }
  for (const auto& [gram, count] : b) {
    if (!a.contains(gram)) add(gram, count);
  }
  return parts.weighted(order, weight);
}

double combined_entropy(const Corpus& corpus, const WordSet& polar,
                        const LabelledOptions& options) {
  double e = 0;
  for (int n = 1; n <= kMaxNgramOrder; ++n) {
    e += weighted_entropy(corpus, polar, n, options.entropy_weights[n - 1]);
  }
  return e;
}

namespace {

WordSet source_polar(const Corpus& source, const LabelledOptions& options) {
  return polar_words(polarity_table(source, options.polarity_min_count,
                                    options.polarity_mode),
                     options.polar_threshold);
}

double entropy_change(const Corpus& source, const Corpus& target,
                      const WordSet& polar, double before,
                      const LabelledOptions& options) {
  if (before == 0) {
    throw UnrankablePair("source '" + source.domain() +
                         "' has zero weighted entropy");
  }
  double after = 0;
  for (int n = 1; n <= kMaxNgramOrder; ++n) {
    after += mixed_weighted_entropy(source, target, polar, n,
                                    options.entropy_weights[n - 1]);
  }
  return std::abs(after - before) / before * 100.0;
}

}  // namespace

double lm4_entropy_change(const Corpus& source, const Corpus& target,
                          const LabelledOptions& options) {
  if (source.empty() || target.empty()) {
    throw std::invalid_argument("empty corpus");
  }
  const WordSet polar = source_polar(source, options);
  return entropy_change(source, target, polar,
                        combined_entropy(source, polar, options), options);
}

std::vector<MetricResult> labelled_metric_matrix(
    MetricId metric, std::span<const Corpus> corpora,
    const LabelledOptions& options) {
  if (!is_labelled(metric)) {
    throw std::invalid_argument("not a labelled metric: " +
                                std::string(to_string(metric)));
  }
  const std::size_t n = corpora.size();

  // Per-domain inputs, computed once.
  std::vector<PolarityTable> tables(n);
  std::vector<SignificantWordSet> significant(n);
  std::vector<WordSet> polar(n);
  std::vector<double> base_entropy(n);
  internal::parallel_for(n, [&](std::size_t i) {
    if (metric == MetricId::kLM1) {
      significant[i] =
          significant_words(corpora[i], options.significant_min_count,
                            options.significant_min_chi2);
    } else {
      tables[i] = polarity_table(corpora[i], options.polarity_min_count,
                                 options.polarity_mode);
    }
    if (metric == MetricId::kLM4) {
      polar[i] = polar_words(tables[i], options.polar_threshold);
      base_entropy[i] = combined_entropy(corpora[i], polar[i], options);
    }
  });

  std::vector<MetricResult> out(n * n);
  internal::parallel_for(n * n, [&](std::size_t cell) {
    const std::size_t s = cell / n, t = cell % n;
    if (s == t) return;
    MetricResult& r = out[cell];
    r.metric = metric;
    r.source = corpora[s].domain();
    r.target = corpora[t].domain();
    try {
      switch (metric) {
        case MetricId::kLM1:
          r.value = static_cast<double>(
              lm1_overlap(significant[s], significant[t]));
          break;
        case MetricId::kLM2:
          r.value = lm2_skld(tables[s], tables[t], options.polar_threshold,
                             options.probability_floor);
          break;
        case MetricId::kLM3:
          r.value = lm3_chameleon(tables[s], tables[t], options.polar_threshold);
          break;
        default:
          r.value = entropy_change(corpora[s], corpora[t], polar[s],
                                   base_entropy[s], options);
          break;
      }
    } catch (const UnrankablePair&) {
      r.value.reset();
    }
  });
  std::erase_if(out, [](const MetricResult& r) { return r.source.empty(); });
  return out;
}

std::vector<MetricResult> ngram_metric_matrix(std::span<const Corpus> corpora,
                                              std::size_t k,
                                              const std::vector<int>& orders) {
  const NgramOverlapMatrix m = ngram_overlap_matrix(corpora, k, orders);
  std::vector<MetricResult> out;
  for (std::size_t s = 0; s < m.domains.size(); ++s) {
    for (std::size_t t = 0; t < m.domains.size(); ++t) {
      if (s == t) continue;
      out.push_back({MetricId::kNGRAM, m.domains[s], m.domains[t], m.at(s, t)});
    }
  }
  return out;
}

}  // namespace cdsa
