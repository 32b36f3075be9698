#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cdsa/embedding_metrics.h"
#include "cdsa/error.h"
#include "synthetic.h"

namespace cdsa {
namespace {

WordVectorTable parse_words(const std::string& text) {
  std::istringstream in(text);
  return read_word_vectors(in, "A");
}

TEST(WordVectors, Parse) {
  WordVectorTable t = parse_words("good 1.0 0.0\nbad 0.0 1.0\n");
  EXPECT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.dims, 2u);
  WordVectorTable h = parse_words("2 2\ngood 1.0 0.0\nbad 0.0 1.0\n");
  EXPECT_EQ(h.entries.size(), 2u);
  EXPECT_EQ(h.dims, 2u);
}

TEST(WordVectors, Errors) {
  try {
    parse_words("good 1.0 0.0\nbad 0.0 1.0 3.0\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_words("good 0 0\n"), InputError);
  EXPECT_THROW(parse_words("good 1 x\n"), InputError);
  EXPECT_THROW(parse_words("good 1 0\ngood 0 1\n"), InputError);
  EXPECT_THROW(parse_words(""), InputError);
  EXPECT_THROW(parse_words("2 3\ngood 1 0\n"), InputError);
}

TEST(SentenceVectors, Parse) {
  std::istringstream in("A:0 1 0\nA:1 0 1\n");
  SentenceVectorSet s = read_sentence_vectors(in, "A");
  EXPECT_EQ(s.vectors.size(), 2u);
  std::istringstream dup("A:0 1 0\nA:0 0 1\n");
  EXPECT_THROW(read_sentence_vectors(dup, "A"), InputError);
}

TEST(AngularSimilarity, Examples) {
  std::vector<double> a{1, 2, 3}, x{1, 0}, y{0, 1}, nx{-1, 0};
  EXPECT_NEAR(angular_similarity(a, a), 1.0, 1e-12);
  EXPECT_NEAR(angular_similarity(x, y), 0.5, 1e-12);
  EXPECT_NEAR(angular_similarity(x, nx), 0.0, 1e-12);
  std::vector<double> zero{0, 0};
  EXPECT_THROW(angular_similarity(x, zero), std::invalid_argument);
  EXPECT_THROW(angular_similarity(x, a), std::invalid_argument);
}

TEST(AngularSimilarity, MatchesArccosForm) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(8), b(8);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    double dot = 0, na = 0, nb = 0;
    for (int d = 0; d < 8; ++d) {
      dot += a[d] * b[d];
      na += a[d] * a[d];
      nb += b[d] * b[d];
    }
    const double want =
        1 - std::acos(dot / std::sqrt(na * nb)) / std::numbers::pi;
    EXPECT_NEAR(angular_similarity(a, b), want, 1e-9);
  }
}

TEST(AngularSimilarity, SymmetricScaleAndRotationInvariant) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 10);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(2), b(2);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    const double base = angular_similarity(a, b);
    EXPECT_NEAR(base, angular_similarity(b, a), 1e-12);
    const double k = u(rng);
    std::vector<double> ak{a[0] * k, a[1] * k};
    EXPECT_NEAR(base, angular_similarity(ak, b), 1e-12);
    const double th = g(rng);
    auto rot = [&](const std::vector<double>& v) {
      return std::vector<double>{std::cos(th) * v[0] - std::sin(th) * v[1],
                                 std::sin(th) * v[0] + std::cos(th) * v[1]};
    };
    EXPECT_NEAR(base, angular_similarity(rot(a), rot(b)), 1e-9);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
  }
}

TEST(WordMetric, Examples) {
  AdjectiveLexicon adj({"good", "bad", "a", "b", "c"});
  WordVectorTable t{"A", 2, {{"good", {1, 0}}, {"bad", {0, 1}}, {"noun", {1, 1}}}};
  EXPECT_NEAR(word_metric(t, t, adj), 2.0, 1e-12);

  WordVectorTable x{"X", 2, {{"good", {1, 0}}}};
  WordVectorTable y{"Y", 2, {{"good", {0, 1}}}};
  EXPECT_NEAR(word_metric(x, y, adj), 1.5, 1e-12);

  WordVectorTable s{"S", 2, {{"a", {1, 0}}, {"b", {1, 1}}}};
  WordVectorTable u{"U", 2, {{"a", {1, 1}}, {"c", {0, 1}}}};
  EXPECT_NEAR(word_metric(s, u, adj), 0.75 + 1.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(word_metric(s, u, adj), word_metric(u, s, adj));

  WordVectorTable none{"N", 2, {{"noun", {1, 0}}}};
  EXPECT_THROW(word_metric(t, none, adj), UnrankablePair);
  WordVectorTable wide{"W", 3, {{"good", {1, 0, 0}}}};
  EXPECT_THROW(word_metric(t, wide, adj), InputError);
}

TEST(SentenceMetric, Examples) {
  SentenceVectorSet a{"A", 2, {{"A:0", {1, 0}}, {"A:1", {0, 1}}}};
  SentenceVectorSet b{"B", 2, {{"B:0", {1, 1}}}};
  EXPECT_NEAR(sentence_metric(a, a), 1.0, 1e-12);
  EXPECT_NEAR(sentence_metric(a, b), 1.0, 1e-12);
  SentenceVectorSet x{"X", 2, {{"X:0", {1, 0}}}};
  SentenceVectorSet y{"Y", 2, {{"Y:0", {0, 1}}}};
  EXPECT_NEAR(sentence_metric(x, y), 0.5, 1e-12);
  SentenceVectorSet cancel{"C", 2, {{"C:0", {1, 0}}, {"C:1", {-1, 0}}}};
  EXPECT_THROW(sentence_metric(cancel, x), UnrankablePair);
}

Corpus scored_corpus(std::size_t n) {
  std::vector<Review> reviews;
  for (std::size_t i = 0; i < n; ++i) {
    reviews.push_back({"A", i % 2 ? Polarity::kNegative : Polarity::kPositive,
                       {i % 2 ? "bad" : "good"}, i});
  }
  return Corpus("A", reviews);
}

SentenceVectorSet vectors_for(const Corpus& c) {
  SentenceVectorSet s{c.domain(), 2, {}};
  for (const Review& r : c.reviews()) {
    s.vectors.push_back({r.id(), {1.0 + double(r.index), 1.0}});
  }
  return s;
}

TEST(SelectTestVectors, CountsAndWarnings) {
  SentimentLexicon lex({{"good", {0.5, 0}}, {"bad", {0, 0.5}}});
  Corpus big = scored_corpus(600);
  std::vector<std::string> warnings;
  auto sel = select_test_vectors(big, lex, vectors_for(big), 500,
                                 SelectionMode::kHeldOut, &warnings);
  EXPECT_EQ(sel.vectors.size(), 500u);
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(sel.vectors.front().first, "A:100");

  Corpus small = scored_corpus(300);
  sel = select_test_vectors(small, lex, vectors_for(small), 500,
                            SelectionMode::kTopScore, &warnings);
  EXPECT_EQ(sel.vectors.size(), 300u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(SelectTestVectors, TopScorePicksStrongest) {
  SentimentLexicon lex({{"meh", {0.2, 0}}, {"great", {0.9, 0}}});
  Corpus c("A", {{"A", Polarity::kPositive, {"meh"}, 0},
                 {"A", Polarity::kPositive, {"great"}, 1}});
  auto sel = select_test_vectors(c, lex, vectors_for(c), 1,
                                 SelectionMode::kTopScore, nullptr);
  ASSERT_EQ(sel.vectors.size(), 1u);
  EXPECT_EQ(sel.vectors[0].first, "A:1");
}

TEST(SelectTestVectors, MissingVectorIsInputError) {
  SentimentLexicon lex({{"good", {0.5, 0}}, {"bad", {0, 0.5}}});
  Corpus c = scored_corpus(4);
  SentenceVectorSet partial{"A", 2, {{"A:0", {1, 0}}}};
  EXPECT_THROW(select_test_vectors(c, lex, partial, 4, SelectionMode::kHeldOut,
                                   nullptr),
               InputError);
}

TEST(Matrices, SymmetricOnSynthetic) {
  auto corpora = synth::domains({4, 200, 6});
  AdjectiveLexicon adj(synth::adjective_words());
  auto words = synth::word_vectors(corpora, 8, 3);
  auto rows = word_metric_matrix(MetricId::kULM1, words, adj);
  ASSERT_EQ(rows.size(), 12u);
  auto sets = synth::sentence_vectors(corpora, 8, 3);
  auto srows = sentence_metric_matrix(MetricId::kULM2, sets);
  for (const auto* all : {&rows, &srows}) {
    for (const auto& r : *all) {
      for (const auto& q : *all) {
        if (r.source == q.target && r.target == q.source) {
          EXPECT_NEAR(*r.value, *q.value, 1e-9);
        }
      }
    }
  }
  EXPECT_THROW(word_metric_matrix(MetricId::kULM2, words, adj),
               std::invalid_argument);
  EXPECT_THROW(sentence_metric_matrix(MetricId::kULM1, sets),
               std::invalid_argument);
}

}  // namespace
}  // namespace cdsa
