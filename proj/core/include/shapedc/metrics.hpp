#pragma once

#include "shapedc/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace shapedc {

/// Accuracy assessment over the labeled pixels of a reference map.
///
/// `confusion[k][j]` counts reference class k+1 predicted as class j+1.
/// Reference pixels that the classifier left unlabeled (prediction 0) are
/// counted in `unclassified[k]`; they are errors, enter the row sums and the
/// total, but no predicted column.
struct MetricsReport {
  int class_count = 0;
  std::vector<std::vector<std::int64_t>> confusion;
  std::vector<std::int64_t> unclassified;
  /// Empty for classes without reference pixels.
  std::vector<std::optional<double>> class_accuracy;
  double overall = 0.0;
  /// Mean over classes that have at least one reference pixel.
  double average = 0.0;
  double kappa = 0.0;

  std::int64_t total() const;
};

/// Builds the report from a K x K confusion matrix (plus optional
/// per-class unclassified counts).
MetricsReport report_from_confusion(std::vector<std::vector<std::int64_t>> confusion,
                                    std::vector<std::int64_t> unclassified = {});

/// Compares `predicted` against `reference`, ignoring reference pixels
/// labeled 0. Throws on dimension mismatch, an empty reference, or a
/// predicted or reference label above K.
MetricsReport evaluate(const LabelMap& predicted, const LabelMap& reference, int class_count);

}  // namespace shapedc
