#ifndef CDSA_BASELINE_H_
#define CDSA_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdsa/corpus.h"

namespace cdsa {

// Cross-domain accuracies in percent; acc(s, t) is a classifier trained on
// domain s and tested on domain t.
class AccuracyMatrix {
 public:
  AccuracyMatrix() = default;
  // Throws InputError unless N >= 2, ids are unique and every value is in
  // [0, 100].
  AccuracyMatrix(std::vector<std::string> domains, std::vector<double> acc);

  std::size_t size() const { return domains_.size(); }
  const std::vector<std::string>& domains() const { return domains_; }
  double at(std::size_t source, std::size_t target) const {
    return acc_[source * domains_.size() + target];
  }
  std::optional<std::size_t> index_of(std::string_view domain) const;

 private:
  std::vector<std::string> domains_;
  std::vector<double> acc_;
};

// Header row of domain ids (first cell is a label and ignored), then one
// row per source domain. Rows may come in any order; they are arranged to
// follow the header.
AccuracyMatrix load_accuracy_matrix(const std::filesystem::path& path);
AccuracyMatrix read_accuracy_matrix(std::istream& in);
void write_accuracy_matrix(std::ostream& out, const AccuracyMatrix& matrix);

struct ChartRow {
  std::string domain;
  double in_domain_acc = 0;
  // Mean over t != d of acc(d, d) - acc(d, t): the accuracy lost when the
  // domain's classifier is applied elsewhere.
  double avg_degradation = 0;
  std::string best_source;  // argmax_s acc(s, d)
  std::string best_target;  // argmax_t acc(d, t)
};

// Argmax ties go to the lower domain index.
std::vector<ChartRow> chart(const AccuracyMatrix& matrix);

// Bag-of-words logistic regression over hashed unigram presence features.
class LogisticModel {
 public:
  explicit LogisticModel(unsigned hash_bits = 18);

  // Online gradient descent, one pass per epoch over a seeded shuffle.
  void train(const std::vector<const Review*>& reviews, std::size_t epochs,
             double learning_rate, double l2, std::uint64_t seed);
  double probability_positive(std::span<const std::string> tokens) const;
  Polarity predict(std::span<const std::string> tokens) const;

 private:
  std::vector<std::size_t> features(std::span<const std::string> tokens) const;

  std::uint64_t mask_;
  std::vector<double> weights_;
  double bias_ = 0;
};

struct BaselineOptions {
  std::size_t splits = 5;
  std::size_t test_size = 2000;
  std::size_t epochs = 5;
  double learning_rate = 0.1;
  double l2 = 1e-6;
  unsigned hash_bits = 18;
  std::uint64_t seed = 42;
};

// In-domain cells: `splits`-fold evaluation with test folds of `test_size`.
// Cross-domain cells: train on the whole source, average over `splits`
// target folds. Corpora too small for the fold size fall back to equal
// folds of n / splits, with a warning.
AccuracyMatrix train_eval_baseline(std::span<const Corpus> corpora,
                                   const BaselineOptions& options = {},
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace cdsa

#endif  // CDSA_BASELINE_H_
