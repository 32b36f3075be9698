// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (capped at 1).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cdsa/baseline.h"
#include "cdsa/embedding_metrics.h"
#include "cdsa/error.h"
#include "cdsa/evaluation.h"
#include "cdsa/labelled_metrics.h"
#include "cdsa/pipeline.h"
#include "oracle.h"
#include "synthetic.h"

namespace {

using namespace cdsa;
namespace fs = std::filesystem;

const std::string kFixture = std::string(CDSA_DATA_DIR) + "/table1_accuracy.csv";

// Tolerances and budgets.
constexpr double kDegradationTol = 0.1;
constexpr double kExactTol = 1e-9;
constexpr double kChartBudget = 1.0;
constexpr double kGranularityBudget = 5.0;
constexpr double kOracleBudget = 5.0;
constexpr double kSymmetryBudget = 60.0;
constexpr double kBruteForceBudget = 30.0;
constexpr double kMonotoneBudget = 60.0;
constexpr double kEndToEndBudget = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Published {
  const char* domain;
  double degradation;
  const char* best_source;
  const char* best_target;
};

// Published recommendation chart for the shipped accuracy fixture.
constexpr Published kChart[] = {
    {"D1", 10.82, "D10", "D10"}, {"D2", 5.32, "D18", "D15"},
    {"D3", 10.50, "D4", "D9"},   {"D4", 7.33, "D3", "D9"},
    {"D5", 7.48, "D1", "D1"},    {"D6", 19.26, "D2", "D15"},
    {"D7", 8.65, "D18", "D9"},   {"D8", 7.58, "D4", "D15"},
    {"D9", 10.29, "D12", "D19"}, {"D10", 10.08, "D1", "D1"},
    {"D11", 13.43, "D1", "D15"}, {"D12", 6.45, "D18", "D9"},
    {"D13", 5.84, "D18", "D18"}, {"D14", 8.19, "D8", "D9"},
    {"D15", 23.18, "D6", "D17"}, {"D16", 9.19, "D12", "D12"},
    {"D17", 11.12, "D6", "D6"},  {"D18", 4.01, "D13", "D13"},
    {"D19", 10.83, "D20", "D15"}, {"D20", 9.26, "D19", "D19"},
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

bool is_multiple(double value, double unit) {
  const double q = value / unit;
  return std::abs(q - std::round(q)) < 1e-9;
}

Outcome chart_fixture() {
  Outcome o;
  const auto rows = chart(load_accuracy_matrix(kFixture));
  double worst = 0;
  std::string source_miss, target_miss;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Published& p = kChart[i];
    worst = std::max(worst, std::abs(rows[i].avg_degradation - p.degradation));
    if (rows[i].best_source != p.best_source) {
      source_miss += std::string(" ") + p.domain + "(" + rows[i].best_source +
                     "!=" + p.best_source + ")";
    }
    if (rows[i].best_target != p.best_target) {
      target_miss += std::string(" ") + p.domain + "(" + rows[i].best_target +
                     "!=" + p.best_target + ")";
    }
  }
  o.pass = rows.size() == 20 && worst <= kDegradationTol && source_miss.empty() &&
           target_miss.empty();
  o.detail = "max |degradation diff| " + fmt("%.3f", worst) +
             (worst <= kDegradationTol ? " ok" : " too large");
  if (!source_miss.empty()) o.detail += "; best source mismatches:" + source_miss;
  if (!target_miss.empty()) o.detail += "; best target mismatches:" + target_miss;
  return o;
}

Outcome eval_granularity() {
  Outcome o;
  const AccuracyMatrix m = load_accuracy_matrix(kFixture);
  std::mt19937_64 rng(101);
  std::size_t checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RankedList> preds;
    for (const auto& d : m.domains()) {
      RankedList l = truth_ranking(m, d);
      // Partial shuffles keep some hits so totals are not all tiny.
      const std::size_t swaps = rng() % 20;
      for (std::size_t s = 0; s < swaps; ++s) {
        std::swap(l.order[rng() % l.order.size()], l.order[rng() % l.order.size()]);
      }
      preds.push_back(std::move(l));
    }
    for (std::size_t k : kDefaultKs) {
      const EvalReport r = aggregate("random", m, preds, k);
      const double slots = 20.0 * double(k);
      ++checked;
      if (!is_multiple(r.precision_pct, 100.0 / slots) ||
          !is_multiple(r.nra, 1.0 / slots)) {
        o.pass = false;
        o.detail = "K=" + std::to_string(k) + " precision " +
                   fmt("%.6f", r.precision_pct) + " nra " + fmt("%.6f", r.nra);
        return o;
      }
    }
  }
  o.detail = std::to_string(checked) + " aggregates on the 1/(20K) grid";
  return o;
}

Outcome oracle_consistency() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> cents(4000, 10000);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> ids;
    for (int i = 1; i <= 20; ++i) ids.push_back("D" + std::to_string(i));
    std::vector<double> acc;
    for (int i = 0; i < 400; ++i) acc.push_back(cents(rng) / 100.0);
    const AccuracyMatrix m(ids, acc);
    std::vector<RankedList> preds;
    std::vector<MetricResult> as_metric;
    for (std::size_t s = 0; s < 20; ++s) {
      for (std::size_t t = 0; t < 20; ++t) {
        if (s != t) as_metric.push_back({MetricId::kULM1, ids[s], ids[t], m.at(s, t)});
      }
    }
    for (const auto& d : ids) preds.push_back(truth_ranking(m, d));
    std::vector<RankedList> ranked;
    for (const auto& d : ids) ranked.push_back(rank_sources(as_metric, d, ids));
    for (std::size_t k : kDefaultKs) {
      for (const auto* lists : {&preds, &ranked}) {
        const EvalReport r = aggregate("truth", m, *lists, k);
        if (r.precision_pct != 100.0 || r.nra != 1.0) {
          o.pass = false;
          o.detail = "trial " + std::to_string(trial) + " K=" + std::to_string(k);
          return o;
        }
      }
    }
  }
  o.detail = "50 matrices x 4 K: precision 100, NRA 1.0";
  return o;
}

SentimentLexicon synthetic_lexicon() {
  std::unordered_map<std::string, SentimentScores> entries;
  for (const std::string& w : synth::adjective_words()) {
    if (w.starts_with("pz")) {
      entries[w] = {0.625, 0.0};
    } else if (w.starts_with("nz")) {
      entries[w] = {0.0, 0.625};
    } else {
      entries[w] = {0.25, 0.125};
    }
  }
  return SentimentLexicon(entries);
}

Outcome symmetry_suite() {
  Outcome o;
  const auto corpora = synth::domains({20, 1000, 2024});
  double worst = 0;
  std::string worst_metric;
  auto check = [&](const std::vector<MetricResult>& rows) {
    std::map<std::pair<std::string, std::string>, std::optional<double>> v;
    for (const auto& r : rows) v[{r.source, r.target}] = r.value;
    for (const auto& r : rows) {
      const auto& back = v.at({r.target, r.source});
      if (r.value.has_value() != back.has_value()) {
        worst = INFINITY;
        worst_metric = std::string(to_string(r.metric));
      } else if (r.value) {
        const double d = std::abs(*r.value - *back);
        if (d > worst) {
          worst = d;
          worst_metric = std::string(to_string(r.metric));
        }
      }
    }
  };
  for (MetricId m : {MetricId::kLM1, MetricId::kLM2, MetricId::kLM3}) {
    check(labelled_metric_matrix(m, corpora));
  }
  const AdjectiveLexicon adjectives(synth::adjective_words());
  std::uint64_t seed = 1;
  for (MetricId m : {MetricId::kULM1, MetricId::kULM3, MetricId::kULM4,
                     MetricId::kULM6}) {
    check(word_metric_matrix(m, synth::word_vectors(corpora, 16, seed++),
                             adjectives));
  }
  const SentimentLexicon lexicon = synthetic_lexicon();
  for (MetricId m : {MetricId::kULM2, MetricId::kULM5, MetricId::kULM7}) {
    const auto all = synth::sentence_vectors(corpora, 16, seed++);
    const SelectionMode mode =
        m == MetricId::kULM7 ? SelectionMode::kTopScore : SelectionMode::kHeldOut;
    std::vector<SentenceVectorSet> selected;
    for (std::size_t i = 0; i < corpora.size(); ++i) {
      selected.push_back(select_test_vectors(corpora[i], lexicon, all[i],
                                             kTestVectorCount, mode, nullptr));
    }
    check(sentence_metric_matrix(m, selected));
  }
  const auto lm4 = labelled_metric_matrix(MetricId::kLM4, corpora);
  std::map<std::pair<std::string, std::string>, double> v4;
  for (const auto& r : lm4) v4[{r.source, r.target}] = r.value.value_or(NAN);
  std::size_t asymmetric = 0;
  for (const auto& [key, val] : v4) {
    if (std::abs(val - v4.at({key.second, key.first})) > kExactTol) ++asymmetric;
  }
  o.pass = worst <= kExactTol && asymmetric > 0;
  o.detail = "max |v(s,t)-v(t,s)| " + fmt("%.3g", worst) +
             (worst_metric.empty() ? "" : " (" + worst_metric + ")") +
             " over LM1-3 and ULM1-7; LM4 asymmetric ordered pairs " +
             std::to_string(asymmetric) + "/380";
  return o;
}

Outcome closed_forms() {
  Outcome o;
  std::vector<std::string> bad;
  auto near = [&](const char* what, double got, double want) {
    if (std::abs(got - want) > kExactTol) {
      bad.push_back(std::string(what) + "=" + fmt("%.12g", got));
    }
  };
  near("chi_square(10,0)", chi_square(10, 0), 10.0);
  near("chi_square(8,2)", chi_square(8, 2), 3.6);
  near("jaccard(40,50,50)", jaccard(40, 50, 50), 2.0 / 3.0);
  const std::vector<double> x{1, 0, 0}, y{0, 3, 0};
  near("angular_similarity(orthogonal)", angular_similarity(x, y), 0.5);
  PolarityTable t{"A", {}};
  t.entries["good"] = {0.9, 0.1};
  t.entries["bad"] = {0.15, 0.85};
  t.entries["plain"] = {0.5, 0.5};
  near("lm2_skld(identical)", lm2_skld(t, t), 1.0);
  o.pass = bad.empty();
  o.detail = bad.empty() ? "5 closed forms within 1e-9" : "";
  for (const auto& b : bad) o.detail += b + " ";
  return o;
}

Outcome brute_force() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::size_t rankable = 0, unrankable_agree = 0;
  double worst = 0;
  const std::vector<int> orders = {1, 2, 3, 4};
  for (int trial = 0; trial < 100; ++trial) {
    const Corpus s = synth::toy_corpus("S", rng, 20, 30);
    const Corpus t = synth::toy_corpus("T", rng, 20, 30);
    const auto ds = oracle::docs_of(s), dt = oracle::docs_of(t);
    auto compare = [&](const std::function<double()>& lib,
                       std::optional<double> want) {
      try {
        const double got = lib();
        if (!want) {
          o.pass = false;
          return;
        }
        ++rankable;
        worst = std::max(worst, std::abs(got - *want));
      } catch (const UnrankablePair&) {
        if (want) o.pass = false;
        ++unrankable_agree;
      }
    };
    const auto ts = polarity_table(s), tt = polarity_table(t);
    compare([&] { return lm2_skld(ts, tt); }, oracle::lm2(ds, dt));
    compare([&] { return lm3_chameleon(ts, tt); }, oracle::lm3(ds, dt));
    compare([&] { return lm4_entropy_change(s, t); }, oracle::lm4(ds, dt));
    compare([&] { return ngram_overlap(s, t, 10, orders); },
            oracle::ngram_overlap(ds, dt, 10, orders));
    compare([&] { return ngram_overlap(s, t); },
            oracle::ngram_overlap(ds, dt, 10, {2, 3, 4}));
  }
  o.pass = o.pass && worst <= kExactTol;
  o.detail = "100 instances, " + std::to_string(rankable) +
             " valued comparisons, max diff " + fmt("%.3g", worst) + ", " +
             std::to_string(unrankable_agree) + " agreed unrankable";
  return o;
}

Outcome monotonicity() {
  Outcome o;
  const std::vector<double> alphas = {0, 0.25, 0.5, 0.75, 1};
  const auto family = synth::mixture_family(alphas, 4, 404);
  const PolarityTable source = polarity_table(family.source);
  std::vector<double> lm2, lm3, ulm;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const PolarityTable target = polarity_table(family.targets[i]);
    lm2.push_back(lm2_skld(source, target));
    lm3.push_back(lm3_chameleon(source, target));
    ulm.push_back(sentence_metric(family.source_vectors, family.target_vectors[i]));
  }
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (lm2[i] > lm2[i - 1] || lm3[i] > lm3[i - 1] || ulm[i] < ulm[i - 1]) {
      o.pass = false;
    }
  }
  auto series = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4f", x);
    return s;
  };
  o.detail = "lm2 [" + series(lm2) + "] lm3 [" + series(lm3) + "] sentence [" +
             series(ulm) + "]";
  return o;
}

Outcome fixture_statement() {
  Outcome o;
  const AccuracyMatrix m = load_accuracy_matrix(kFixture);
  o.pass = m.size() == 20 && std::abs(m.at(0, 0) - 84.84) < kExactTol;
  o.detail =
      "accuracy fixture loads as " + std::to_string(m.size()) + "x" +
      std::to_string(m.size()) +
      "; absolute accuracies and per-metric precision/NRA need the original "
      "review corpus and trained models, so they are shipped as fixtures and "
      "checked structurally only";
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(entry.path(), dir).string()] = s.str();
  }
  return out;
}

Outcome end_to_end() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "cdsa_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root / "corpora");
  const auto corpora = synth::domains({20, 1000, 2024});
  std::ostringstream cfg;
  for (const Corpus& c : corpora) {
    synth::write_jsonl(c, root / "corpora" / (c.domain() + ".jsonl"));
    cfg << "corpus." << c.domain() << " = corpora/" << c.domain() << ".jsonl\n";
  }
  cfg << "metrics = LM1,LM2,LM3,LM4\nk = 3,5,7,10\nseed = 42\n"
         "accuracy_matrix = generate\n";
  std::ofstream(root / "run.cfg") << cfg.str();

  std::vector<std::map<std::string, std::string>> runs;
  for (int run = 0; run < 2; ++run) {
    RunConfig config = load_config(root / "run.cfg");
    config.out = root / ("out" + std::to_string(run));
    std::ostringstream log;
    cmd_ingest(config, log);
    cmd_metrics(config, log);
    cmd_evaluate(config, log);
    runs.push_back(read_tree(config.out));
  }
  fs::remove_all(root);
  o.pass = runs[0] == runs[1] && runs[0].count("eval_report.csv") &&
           runs[0].count("metrics_LM4.csv");
  o.detail = std::to_string(runs[0].size()) + " output files, " +
             (runs[0] == runs[1] ? "byte-identical" : "DIFFERENT") +
             " across two runs";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"chart fixture reproduction", kChartBudget, chart_fixture},
      {"evaluation granularity", kGranularityBudget, eval_granularity},
      {"oracle self-consistency", kOracleBudget, oracle_consistency},
      {"metric symmetry/asymmetry", kSymmetryBudget, symmetry_suite},
      {"closed-form spot checks", 1.0, closed_forms},
      {"brute-force oracle equivalence", kBruteForceBudget, brute_force},
      {"divergence monotonicity", kMonotoneBudget, monotonicity},
      {"fixture-only values stated", 1.0, fixture_statement},
      {"end-to-end determinism", kEndToEndBudget, end_to_end},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    const bool in_time = secs < c.budget;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s  %-32s %6.2fs (budget %.0fs%s)  %s\n", pass ? "PASS" : "FAIL",
                c.name, secs, c.budget, in_time ? "" : ", exceeded",
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
