#ifndef CDSA_EVALUATION_H_
#define CDSA_EVALUATION_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cdsa/baseline.h"
#include "cdsa/metric.h"

namespace cdsa {

// Candidate source domains for one target, most similar first.
struct RankedList {
  std::string target;
  std::string metric;  // metric id, or "truth" for accuracy-derived lists
  std::vector<std::string> order;
};

// Orders every other domain by its value for (source, target) following the
// metric's direction. Unrankable pairs go last; ties go to the lower index
// in `domains`. Throws InputError if a pair is missing.
RankedList rank_sources(std::span<const MetricResult> results,
                        const std::string& target,
                        const std::vector<std::string>& domains);

// Sources ordered by acc(s, target) descending, ties by index.
RankedList truth_ranking(const AccuracyMatrix& matrix,
                         const std::string& target);

// |top-K(pred) ∩ top-K(truth)|. K must be in 1..N-1.
std::size_t precision_at_k(const RankedList& pred, const RankedList& truth,
                           std::size_t k);

// Positions i < K with pred[i] == truth[i].
std::size_t ranking_accuracy(const RankedList& pred, const RankedList& truth,
                             std::size_t k);

struct TargetScore {
  std::string target;
  std::size_t precision = 0;
  std::size_t ranking_accuracy = 0;
};

struct EvalReport {
  std::string metric;
  std::size_t k = 0;
  std::size_t targets = 0;
  std::size_t total_precision = 0;
  std::size_t total_ranking_accuracy = 0;
  double precision_pct = 0;  // 100 * total_precision / (N K)
  double nra = 0;            // total_ranking_accuracy / (N K)
  std::vector<TargetScore> per_target;
};

// `preds` must hold one list per target of the matrix.
EvalReport aggregate(const std::string& metric, const AccuracyMatrix& matrix,
                     std::span<const RankedList> preds, std::size_t k);

inline const std::vector<std::size_t> kDefaultKs = {3, 5, 7, 10};

struct RecommendationReport {
  std::vector<ChartRow> chart;
  std::vector<EvalReport> evaluations;  // metric-major, then K
};

// Builds the chart and, for every metric in `results`, one EvalReport per K.
// Throws InputError when a K exceeds N-1 or a metric's domains differ from
// the matrix.
RecommendationReport recommendation_report(
    const AccuracyMatrix& matrix,
    const std::map<std::string, std::vector<MetricResult>>& results,
    const std::vector<std::size_t>& ks = kDefaultKs);

void write_chart_csv(std::ostream& out, std::span<const ChartRow> rows);
void write_chart_markdown(std::ostream& out, std::span<const ChartRow> rows);
// metric_id,K,precision_pct,nra
void write_eval_csv(std::ostream& out, std::span<const EvalReport> reports);
// metric_id,K,target,precision,ranking_accuracy
void write_eval_breakdown_csv(std::ostream& out,
                              std::span<const EvalReport> reports);
// One row per metric, Precision/NRA column pair per K.
void write_eval_markdown(std::ostream& out,
                         std::span<const EvalReport> reports);

}  // namespace cdsa

#endif  // CDSA_EVALUATION_H_
