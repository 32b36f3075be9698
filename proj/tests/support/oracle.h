// Brute-force reference implementations used to cross-check the library.
// Written from the metric definitions without reusing any library code
// beyond the Corpus accessor that hands out raw reviews.
#ifndef CDSA_TESTS_ORACLE_H_
#define CDSA_TESTS_ORACLE_H_

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdsa/corpus.h"

namespace cdsa::oracle {

struct Doc {
  bool positive = true;
  std::vector<std::string> tokens;
};
using Docs = std::vector<Doc>;

Docs docs_of(const Corpus& corpus);

// Words with 2|pos - neg| >= pos + neg, decided in integers.
std::set<std::string> polar(const Docs& docs);

// nullopt when the pair shares no polar word.
std::optional<double> lm2(const Docs& s, const Docs& t, double floor = 1e-6);
std::optional<double> lm3(const Docs& s, const Docs& t);

double entropy(const Docs& docs, const std::set<std::string>& polar,
               const std::array<double, 4>& weights);

// nullopt when the source entropy is zero.
std::optional<double> lm4(const Docs& s, const Docs& t,
                          const std::array<double, 4>& weights = {1, 5, 5, 5});

double ngram_overlap(const Docs& a, const Docs& b, std::size_t k,
                     const std::vector<int>& orders);

}  // namespace cdsa::oracle

#endif  // CDSA_TESTS_ORACLE_H_
