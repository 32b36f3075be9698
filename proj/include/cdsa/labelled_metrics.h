#ifndef CDSA_LABELLED_METRICS_H_
#define CDSA_LABELLED_METRICS_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cdsa/corpus.h"
#include "cdsa/lexstats.h"
#include "cdsa/metric.h"

namespace cdsa {

struct LabelledOptions {
  double polar_threshold = kPolarThreshold;
  std::size_t polarity_min_count = 1;
  PolarityMode polarity_mode = PolarityMode::kOccurrence;
  double probability_floor = kProbabilityFloor;
  std::size_t significant_min_count = kSignificantMinCount;
  double significant_min_chi2 = kSignificantMinChi2;
  // Entropy weight for n-grams containing a polar word, per order 1..4.
  std::array<double, kMaxNgramOrder> entropy_weights = {1, 5, 5, 5};
};

std::size_t lm1_overlap(const SignificantWordSet& source,
                        const SignificantWordSet& target);

// C / (W1 + W2 - C). Throws UnrankablePair when C == 0 and
// std::invalid_argument when C exceeds min(W1, W2).
double jaccard(std::size_t common, std::size_t w1, std::size_t w2);

// Symmetric KL divergence between two (p, n) distributions after clamping.
double skld(const WordPolarity& a, const WordPolarity& b,
            double floor = kProbabilityFloor);

// Mean SKLD over common polar words plus 1/J. Lower is more similar.
double lm2_skld(const PolarityTable& source, const PolarityTable& target,
                double polar_threshold = kPolarThreshold,
                double floor = kProbabilityFloor);

// Mean |P1-P2| + |N1-N2| over common polar words plus 1/J.
double lm3_chameleon(const PolarityTable& source, const PolarityTable& target,
                     double polar_threshold = kPolarThreshold);

// -w * sum_X p log p - (1/w) * sum_Y p log p, with X the n-grams holding a
// polar word and p taken over all n-grams of the order. For unigrams only X
// contributes.
double weighted_entropy(const Corpus& corpus, const WordSet& polar, int order,
                        double weight);

// Weighted entropy of the n-gram distribution of source + target, both
// corpora left untouched.
double mixed_weighted_entropy(const Corpus& source, const Corpus& target,
                              const WordSet& polar, int order, double weight);

// Sum of weighted entropies over orders 1..4.
double combined_entropy(const Corpus& corpus, const WordSet& polar,
                        const LabelledOptions& options = {});

// |E(source + target) - E(source)| / E(source) * 100 using the source's polar
// words for both. Throws UnrankablePair when E(source) is zero.
double lm4_entropy_change(const Corpus& source, const Corpus& target,
                          const LabelledOptions& options = {});

// All ordered pairs (s != t) of the given labelled metric, in domain order
// (source-major). Unrankable pairs carry no value.
std::vector<MetricResult> labelled_metric_matrix(
    MetricId metric, std::span<const Corpus> corpora,
    const LabelledOptions& options = {});

// NGRAM metric over all ordered pairs.
std::vector<MetricResult> ngram_metric_matrix(
    std::span<const Corpus> corpora, std::size_t k = 10,
    const std::vector<int>& orders = kDefaultOverlapOrders);

}  // namespace cdsa

#endif  // CDSA_LABELLED_METRICS_H_
