#pragma once

#include <vector>

#include "freqclue/dataset.hpp"

namespace freqclue {

struct ScoredLabel {
  double score;
  Label label;
};

/// ROC AUC by trapezoidal integration with tied scores grouped, which equals
/// P(s⁺ > s⁻) + ½·P(s⁺ = s⁻). Counts are integers, so the value matches the
/// pairwise statistic exactly. Throws kUndefinedMetric without both classes.
double auc(const std::vector<ScoredLabel>& scores);

/// Fraction of samples where (score ≥ threshold) agrees with label == fake.
double accuracy(const std::vector<ScoredLabel>& scores, double threshold = 0.5);

}  // namespace freqclue
