#include "cdsa/evaluation.h"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "cdsa/csv.h"
#include "cdsa/error.h"
#include "numfmt.h"

namespace cdsa {
namespace {

void check_comparable(const RankedList& pred, const RankedList& truth,
                      std::size_t k) {
  if (pred.target != truth.target) {
    throw std::invalid_argument("rankings are for different targets");
  }
  if (std::set(pred.order.begin(), pred.order.end()) !=
      std::set(truth.order.begin(), truth.order.end())) {
    throw std::invalid_argument("rankings cover different domains");
  }
  if (k == 0 || k > truth.order.size()) {
    throw std::out_of_range("K=" + std::to_string(k) + " outside 1.." +
                            std::to_string(truth.order.size()));
  }
}

std::string describe_difference(const std::set<std::string>& expected,
                                const std::set<std::string>& actual) {
  std::string missing, extra;
  for (const auto& d : expected) {
    if (!actual.contains(d)) missing += (missing.empty() ? "" : ", ") + d;
  }
  for (const auto& d : actual) {
    if (!expected.contains(d)) extra += (extra.empty() ? "" : ", ") + d;
  }
  std::string out;
  if (!missing.empty()) out += "missing [" + missing + "]";
  if (!extra.empty()) out += (out.empty() ? "" : "; ") + ("unexpected [" + extra + "]");
  return out;
}

}  // namespace

RankedList rank_sources(std::span<const MetricResult> results,
                        const std::string& target,
                        const std::vector<std::string>& domains) {
  std::unordered_map<std::string_view, const MetricResult*> by_source;
  std::optional<MetricId> metric;
  for (const MetricResult& r : results) {
    if (r.target != target || r.source == target) continue;
    if (metric && *metric != r.metric) {
      throw InputError("results for target '" + target +
                       "' mix several metrics");
    }
    metric = r.metric;
    if (!by_source.emplace(r.source, &r).second) {
      throw InputError("duplicate result for (" + r.source + ", " + target +
                       ")");
    }
  }
  if (!metric) throw InputError("no results for target '" + target + "'");

  struct Candidate {
    std::size_t index;
    const MetricResult* result;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i] == target) continue;
    auto it = by_source.find(domains[i]);
    if (it == by_source.end()) {
      throw InputError("missing " + std::string(to_string(*metric)) +
                       " value for (" + domains[i] + ", " + target + ")");
    }
    candidates.push_back({i, it->second});
  }
  if (by_source.size() != candidates.size()) {
    throw InputError("results for target '" + target +
                     "' name domains outside the ranking universe");
  }

  const bool higher_better =
      direction_of(*metric) == Direction::kHigherIsMoreSimilar;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Candidate& a, const Candidate& b) {
                     const auto& va = a.result->value;
                     const auto& vb = b.result->value;
                     if (va.has_value() != vb.has_value()) {
                       return va.has_value();
                     }
                     if (va && *va != *vb) {
                       return higher_better ? *va > *vb : *va < *vb;
                     }
                     return a.index < b.index;
                   });
  RankedList out{target, std::string(to_string(*metric)), {}};
  for (const Candidate& c : candidates) out.order.push_back(domains[c.index]);
  return out;
}

RankedList truth_ranking(const AccuracyMatrix& matrix,
                         const std::string& target) {
  auto t = matrix.index_of(target);
  if (!t) throw InputError("unknown target domain '" + target + "'");
  std::vector<std::size_t> sources;
  for (std::size_t s = 0; s < matrix.size(); ++s) {
    if (s != *t) sources.push_back(s);
  }
  std::stable_sort(sources.begin(), sources.end(),
                   [&](std::size_t a, std::size_t b) {
                     return matrix.at(a, *t) > matrix.at(b, *t);
                   });
  RankedList out{target, "truth", {}};
  for (std::size_t s : sources) out.order.push_back(matrix.domains()[s]);
  return out;
}

std::size_t precision_at_k(const RankedList& pred, const RankedList& truth,
                           std::size_t k) {
  check_comparable(pred, truth, k);
  std::set<std::string_view> top(truth.order.begin(), truth.order.begin() + k);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += top.contains(pred.order[i]);
  return hits;
}

std::size_t ranking_accuracy(const RankedList& pred, const RankedList& truth,
                             std::size_t k) {
  check_comparable(pred, truth, k);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < k; ++i) correct += pred.order[i] == truth.order[i];
  return correct;
}

EvalReport aggregate(const std::string& metric, const AccuracyMatrix& matrix,
                     std::span<const RankedList> preds, std::size_t k) {
  const std::size_t n = matrix.size();
  if (k == 0 || k > n - 1) {
    throw InputError("K=" + std::to_string(k) + " exceeds N-1=" +
                     std::to_string(n - 1));
  }
  EvalReport report;
  report.metric = metric;
  report.k = k;
  report.targets = n;
  for (const std::string& target : matrix.domains()) {
    auto it = std::find_if(preds.begin(), preds.end(),
                           [&](const RankedList& l) { return l.target == target; });
    if (it == preds.end()) {
      throw InputError("no " + metric + " ranking for target '" + target + "'");
    }
    const RankedList truth = truth_ranking(matrix, target);
    TargetScore score{target, precision_at_k(*it, truth, k),
                      ranking_accuracy(*it, truth, k)};
    report.total_precision += score.precision;
    report.total_ranking_accuracy += score.ranking_accuracy;
    report.per_target.push_back(std::move(score));
  }
  const double slots = static_cast<double>(n * k);
  report.precision_pct =
      100.0 * static_cast<double>(report.total_precision) / slots;
  report.nra = static_cast<double>(report.total_ranking_accuracy) / slots;
  return report;
}

RecommendationReport recommendation_report(
    const AccuracyMatrix& matrix,
    const std::map<std::string, std::vector<MetricResult>>& results,
    const std::vector<std::size_t>& ks) {
  RecommendationReport report;
  report.chart = chart(matrix);
  if (results.empty()) return report;

  const std::size_t n = matrix.size();
  for (std::size_t k : ks) {
    if (k == 0 || k > n - 1) {
      throw InputError("K=" + std::to_string(k) + " exceeds N-1=" +
                       std::to_string(n - 1));
    }
  }
  const std::set<std::string> expected(matrix.domains().begin(),
                                       matrix.domains().end());
  for (const auto& [metric, rows] : results) {
    std::set<std::string> seen;
    for (const MetricResult& r : rows) {
      seen.insert(r.source);
      seen.insert(r.target);
    }
    if (seen != expected) {
      throw InputError("domains of metric " + metric +
                       " do not match the accuracy matrix: " +
                       describe_difference(expected, seen));
    }
    std::vector<RankedList> preds;
    for (const std::string& target : matrix.domains()) {
      preds.push_back(rank_sources(rows, target, matrix.domains()));
    }
    for (std::size_t k : ks) {
      report.evaluations.push_back(aggregate(metric, matrix, preds, k));
    }
  }
  return report;
}

void write_chart_csv(std::ostream& out, std::span<const ChartRow> rows) {
  out << "domain,in_domain_accuracy,avg_degradation,best_source,best_target\n";
  for (const ChartRow& r : rows) {
    out << csv::join({r.domain, internal::format_fixed(r.in_domain_acc, 2),
                      internal::format_fixed(r.avg_degradation, 2),
                      r.best_source, r.best_target})
        << '\n';
  }
}

void write_chart_markdown(std::ostream& out, std::span<const ChartRow> rows) {
  out << "| Domain | In-Domain Accuracy (%) | Avg CDSA Degradation (%) "
         "| Best Source | Best Target |\n";
  out << "|---|---:|---:|---|---|\n";
  for (const ChartRow& r : rows) {
    out << "| " << r.domain << " | " << internal::format_fixed(r.in_domain_acc, 2)
        << " | " << internal::format_fixed(r.avg_degradation, 2) << " | "
        << r.best_source << " | " << r.best_target << " |\n";
  }
}

void write_eval_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "metric_id,K,precision_pct,nra\n";
  for (const EvalReport& r : reports) {
    out << csv::join({r.metric, std::to_string(r.k),
                      internal::format_fixed(r.precision_pct, 2),
                      internal::format_fixed(r.nra, 3)})
        << '\n';
  }
}

void write_eval_breakdown_csv(std::ostream& out,
                              std::span<const EvalReport> reports) {
  out << "metric_id,K,target,precision,ranking_accuracy\n";
  for (const EvalReport& r : reports) {
    for (const TargetScore& t : r.per_target) {
      out << csv::join({r.metric, std::to_string(r.k), t.target,
                        std::to_string(t.precision),
                        std::to_string(t.ranking_accuracy)})
          << '\n';
    }
  }
}

void write_eval_markdown(std::ostream& out,
                         std::span<const EvalReport> reports) {
  std::vector<std::string> metrics;
  std::vector<std::size_t> ks;
  for (const EvalReport& r : reports) {
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
      metrics.push_back(r.metric);
    }
    if (std::find(ks.begin(), ks.end(), r.k) == ks.end()) ks.push_back(r.k);
  }
  out << "| Metric |";
  for (std::size_t k : ks) {
    out << " Top " << k << " Precision (%) | Top " << k << " NRA |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < ks.size(); ++i) out << "---:|---:|";
  out << '\n';
  for (const std::string& m : metrics) {
    out << "| " << m << " |";
    for (std::size_t k : ks) {
      auto it = std::find_if(reports.begin(), reports.end(),
                             [&](const EvalReport& r) {
                               return r.metric == m && r.k == k;
                             });
      if (it == reports.end()) {
        out << " - | - |";
      } else {
        out << ' ' << internal::format_fixed(it->precision_pct, 2) << " | "
            << internal::format_fixed(it->nra, 3) << " |";
      }
    }
    out << '\n';
  }
}

}  // namespace cdsa
