#include "freqclue/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "freqclue/error.hpp"

namespace freqclue {

double auc(const std::vector<ScoredLabel>& scores) {
  std::int64_t positives = 0;
  for (const auto& s : scores) {
    if (std::isnan(s.score)) throw Error(ErrorKind::kInvalidInput, "AUC input contains a NaN score");
    positives += s.label == Label::kFake;
  }
  const std::int64_t negatives = static_cast<std::int64_t>(scores.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorKind::kUndefinedMetric, "AUC needs at least one real and one fake sample");
  }
  std::vector<ScoredLabel> sorted = scores;
  std::sort(sorted.begin(), sorted.end(), [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });

  // Walk thresholds from high to low; each tie group is one ROC step.
  // Twice the trapezoid area in units of (1/P)(1/N).
  std::int64_t tp = 0, fp = 0, area2 = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::int64_t dtp = 0, dfp = 0;
    std::size_t j = i;
    for (; j < sorted.size() && sorted[j].score == sorted[i].score; ++j) {
      if (sorted[j].label == Label::kFake) ++dtp; else ++dfp;
    }
    area2 += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    i = j;
  }
  return static_cast<double>(area2) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double accuracy(const std::vector<ScoredLabel>& scores, double threshold) {
  if (scores.empty()) throw Error(ErrorKind::kUndefinedMetric, "accuracy of an empty set");
  std::size_t correct = 0;
  for (const auto& s : scores) correct += (s.score >= threshold) == (s.label == Label::kFake);
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

}  // namespace freqclue
