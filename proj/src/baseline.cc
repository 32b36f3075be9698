#include "cdsa/baseline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "cdsa/csv.h"
#include "cdsa/error.h"
#include "numfmt.h"
#include "parallel.h"

namespace cdsa {
namespace {

// Fisher-Yates with raw engine output, so the permutation does not depend on
// the standard library's distribution implementation.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                : std::exp(z) / (1.0 + std::exp(z));
}

std::size_t argmax_excluding(std::size_t n, std::size_t excluded,
                             const auto& value) {
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == excluded) continue;
    if (best == n || value(i) > value(best)) best = i;
  }
  return best;
}

}  // namespace

AccuracyMatrix::AccuracyMatrix(std::vector<std::string> domains,
                               std::vector<double> acc)
    : domains_(std::move(domains)), acc_(std::move(acc)) {
  const std::size_t n = domains_.size();
  if (n < 2) throw InputError("accuracy matrix needs at least 2 domains");
  if (acc_.size() != n * n) {
    throw InputError("accuracy matrix is not " + std::to_string(n) + "x" +
                     std::to_string(n));
  }
  std::unordered_set<std::string_view> seen;
  for (const std::string& d : domains_) {
    if (d.empty()) throw InputError("empty domain id in accuracy matrix");
    if (!seen.insert(d).second) {
      throw InputError("duplicate domain '" + d + "' in accuracy matrix");
    }
  }
  for (std::size_t i = 0; i < acc_.size(); ++i) {
    if (!(acc_[i] >= 0.0 && acc_[i] <= 100.0)) {
      throw InputError("accuracy for (" + domains_[i / n] + ", " +
                       domains_[i % n] + ") outside [0, 100]");
    }
  }
}

std::optional<std::size_t> AccuracyMatrix::index_of(
    std::string_view domain) const {
  auto it = std::find(domains_.begin(), domains_.end(), domain);
  if (it == domains_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - domains_.begin());
}

AccuracyMatrix read_accuracy_matrix(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() < 3) {
    throw InputError("accuracy matrix needs a header with at least 2 domains");
  }
  std::vector<std::string> domains(header->begin() + 1, header->end());
  const std::size_t n = domains.size();
  std::vector<double> acc(n * n);
  std::vector<bool> filled(n, false);
  std::size_t rows = 0;
  while (auto fields = reader.next()) {
    const std::string where = "line " + std::to_string(reader.line()) + ": ";
    if (fields->size() != n + 1) {
      throw InputError(where + "expected " + std::to_string(n + 1) +
                       " cells, found " + std::to_string(fields->size()));
    }
    auto it = std::find(domains.begin(), domains.end(), (*fields)[0]);
    if (it == domains.end()) {
      throw InputError(where + "row domain '" + (*fields)[0] +
                       "' is not in the header");
    }
    const std::size_t row = static_cast<std::size_t>(it - domains.begin());
    if (filled[row]) {
      throw InputError(where + "duplicate row '" + (*fields)[0] + "'");
    }
    filled[row] = true;
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& cell = (*fields)[j + 1];
      if (cell.empty()) {
        throw InputError(where + "missing value for target '" + domains[j] +
                         "'");
      }
      double v = 0;
      std::size_t used = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) {
        throw InputError(where + "bad number '" + cell + "'");
      }
      if (!(v >= 0.0 && v <= 100.0)) {
        throw InputError(where + "accuracy " + cell + " outside [0, 100]");
      }
      acc[row * n + j] = v;
    }
    ++rows;
  }
  if (rows != n) {
    throw InputError("accuracy matrix is not square: " + std::to_string(n) +
                     " columns but " + std::to_string(rows) + " rows");
  }
  return AccuracyMatrix(std::move(domains), std::move(acc));
}

AccuracyMatrix load_accuracy_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open accuracy matrix " + path.string());
  try {
    return read_accuracy_matrix(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_accuracy_matrix(std::ostream& out, const AccuracyMatrix& matrix) {
  std::vector<std::string> row{"source"};
  row.insert(row.end(), matrix.domains().begin(), matrix.domains().end());
  out << csv::join(row) << '\n';
  for (std::size_t s = 0; s < matrix.size(); ++s) {
    row.assign(1, matrix.domains()[s]);
    for (std::size_t t = 0; t < matrix.size(); ++t) {
      row.push_back(internal::format_fixed(matrix.at(s, t), 2));
    }
    out << csv::join(row) << '\n';
  }
}

std::vector<ChartRow> chart(const AccuracyMatrix& matrix) {
  const std::size_t n = matrix.size();
  std::vector<ChartRow> rows;
  rows.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    ChartRow r;
    r.domain = matrix.domains()[d];
    r.in_domain_acc = matrix.at(d, d);
    double loss = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (t != d) loss += matrix.at(d, d) - matrix.at(d, t);
    }
    r.avg_degradation = loss / static_cast<double>(n - 1);
    r.best_source = matrix.domains()[argmax_excluding(
        n, d, [&](std::size_t s) { return matrix.at(s, d); })];
    r.best_target = matrix.domains()[argmax_excluding(
        n, d, [&](std::size_t t) { return matrix.at(d, t); })];
    rows.push_back(std::move(r));
  }
  return rows;
}

LogisticModel::LogisticModel(unsigned hash_bits)
    : mask_((std::uint64_t{1} << hash_bits) - 1),
      weights_(std::size_t{1} << hash_bits, 0.0) {
  if (hash_bits == 0 || hash_bits > 26) {
    throw std::invalid_argument("hash_bits must be in 1..26");
  }
}

std::vector<std::size_t> LogisticModel::features(
    std::span<const std::string> tokens) const {
  std::vector<std::size_t> f;
  f.reserve(tokens.size());
  for (const std::string& tok : tokens) f.push_back(fnv1a(tok) & mask_);
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

void LogisticModel::train(const std::vector<const Review*>& reviews,
                          std::size_t epochs, double learning_rate, double l2,
                          std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> feats;
  feats.reserve(reviews.size());
  for (const Review* r : reviews) feats.push_back(features(r->tokens));
  std::vector<std::size_t> order(reviews.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    seeded_shuffle(order, rng);
    const double lr = learning_rate / std::sqrt(1.0 + static_cast<double>(epoch));
    for (std::size_t i : order) {
      double z = bias_;
      for (std::size_t f : feats[i]) z += weights_[f];
      const double y = reviews[i]->label == Polarity::kPositive ? 1.0 : 0.0;
      const double g = sigmoid(z) - y;
      bias_ -= lr * g;
      for (std::size_t f : feats[i]) {
        weights_[f] -= lr * (g + l2 * weights_[f]);
      }
    }
  }
}

double LogisticModel::probability_positive(
    std::span<const std::string> tokens) const {
  double z = bias_;
  for (std::size_t f : features(tokens)) z += weights_[f];
  return sigmoid(z);
}

Polarity LogisticModel::predict(std::span<const std::string> tokens) const {
  return probability_positive(tokens) >= 0.5 ? Polarity::kPositive
                                             : Polarity::kNegative;
}

namespace {

struct Folds {
  std::vector<std::size_t> order;  // shuffled review positions
  std::size_t fold_size = 0;

  std::span<const std::size_t> fold(std::size_t f) const {
    return std::span(order).subspan(f * fold_size, fold_size);
  }
};

double accuracy(const LogisticModel& model, const Corpus& corpus,
                std::span<const std::size_t> positions) {
  std::size_t correct = 0;
  for (std::size_t p : positions) {
    const Review& r = corpus.reviews()[p];
    correct += model.predict(r.tokens) == r.label;
  }
  return 100.0 * static_cast<double>(correct) /
         static_cast<double>(positions.size());
}

}  // namespace

AccuracyMatrix train_eval_baseline(std::span<const Corpus> corpora,
                                   const BaselineOptions& options,
                                   std::vector<std::string>* warnings) {
  const std::size_t n = corpora.size();
  if (n < 2) throw InputError("baseline needs at least 2 corpora");
  if (options.splits == 0 || options.test_size == 0) {
    throw std::invalid_argument("splits and test_size must be positive");
  }

  std::vector<Folds> folds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Corpus& c = corpora[i];
    Folds& f = folds[i];
    f.order.resize(c.size());
    std::iota(f.order.begin(), f.order.end(), 0);
    std::mt19937_64 rng(mix_seed(options.seed, i, 0));
    seeded_shuffle(f.order, rng);
    f.fold_size = options.test_size;
    if (c.size() < options.splits * options.test_size) {
      f.fold_size = c.size() / options.splits;
      if (f.fold_size == 0) {
        throw InputError("corpus '" + c.domain() + "' has " +
                         std::to_string(c.size()) + " reviews, fewer than " +
                         std::to_string(options.splits) + " splits");
      }
      if (warnings) {
        warnings->push_back("corpus '" + c.domain() + "' has " +
                            std::to_string(c.size()) +
                            " reviews; using folds of " +
                            std::to_string(f.fold_size) + " instead of " +
                            std::to_string(options.test_size));
      }
    }
    const std::size_t pos = c.review_count(Polarity::kPositive);
    if (warnings && pos * 2 != c.size()) {
      warnings->push_back("corpus '" + c.domain() +
                          "' is not balanced between labels (" +
                          std::to_string(pos) + " positive of " +
                          std::to_string(c.size()) + ")");
    }
  }

  std::vector<double> acc(n * n, 0.0);
  internal::parallel_for(n, [&](std::size_t s) {
    const Corpus& source = corpora[s];
    const Folds& fs = folds[s];

    // In-domain: train on everything outside the test fold.
    double in_domain = 0;
    for (std::size_t f = 0; f < options.splits; ++f) {
      std::vector<const Review*> train;
      for (std::size_t k = 0; k < fs.order.size(); ++k) {
        if (k / fs.fold_size == f) continue;
        train.push_back(&source.reviews()[fs.order[k]]);
      }
      LogisticModel model(options.hash_bits);
      model.train(train, options.epochs, options.learning_rate, options.l2,
                  mix_seed(options.seed, s, 1 + f));
      in_domain += accuracy(model, source, fs.fold(f));
    }
    acc[s * n + s] = in_domain / static_cast<double>(options.splits);

    std::vector<const Review*> all;
    for (const Review& r : source.reviews()) all.push_back(&r);
    LogisticModel model(options.hash_bits);
    model.train(all, options.epochs, options.learning_rate, options.l2,
                mix_seed(options.seed, s, 0xFFFF));
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s) continue;
      double sum = 0;
      for (std::size_t f = 0; f < options.splits; ++f) {
        sum += accuracy(model, corpora[t], folds[t].fold(f));
      }
      acc[s * n + t] = sum / static_cast<double>(options.splits);
    }
  });

  std::vector<std::string> domains;
  for (const Corpus& c : corpora) domains.push_back(c.domain());
  return AccuracyMatrix(std::move(domains), std::move(acc));
}

}  // namespace cdsa
