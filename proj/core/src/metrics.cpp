#include "shapedc/metrics.hpp"

#include <numeric>
#include <string>

namespace shapedc {

std::int64_t MetricsReport::total() const {
  std::int64_t sum = std::accumulate(unclassified.begin(), unclassified.end(), std::int64_t{0});
  for (const auto& row : confusion) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

MetricsReport report_from_confusion(std::vector<std::vector<std::int64_t>> confusion,
                                    std::vector<std::int64_t> unclassified) {
  const std::size_t k = confusion.size();
  if (k == 0) throw Error("confusion matrix must have at least one class");
  for (const auto& row : confusion) {
    if (row.size() != k) throw Error("confusion matrix must be square");
  }
  if (unclassified.empty()) unclassified.assign(k, 0);
  if (unclassified.size() != k) throw Error("unclassified counts must have one entry per class");

  MetricsReport report;
  report.class_count = static_cast<int>(k);
  report.confusion = std::move(confusion);
  report.unclassified = std::move(unclassified);

  std::vector<std::int64_t> row_sum(k, 0), col_sum(k, 0);
  std::int64_t trace = 0;
  for (std::size_t i = 0; i < k; ++i) {
    row_sum[i] = report.unclassified[i];
    for (std::size_t j = 0; j < k; ++j) {
      row_sum[i] += report.confusion[i][j];
      col_sum[j] += report.confusion[i][j];
    }
    trace += report.confusion[i][i];
  }
  const std::int64_t total = report.total();
  if (total == 0) throw Error("no reference pixels to evaluate");

  double acc_sum = 0.0;
  int defined = 0;
  report.class_accuracy.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (row_sum[i] > 0) {
      const double acc = static_cast<double>(report.confusion[i][i]) / static_cast<double>(row_sum[i]);
      report.class_accuracy[i] = acc;
      acc_sum += acc;
      ++defined;
    }
  }
  const double n = static_cast<double>(total);
  report.overall = static_cast<double>(trace) / n;
  report.average = acc_sum / defined;

  double expected = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    expected += static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[i]);
  }
  expected /= n * n;
  // p_e == 1 only when a single class fills both marginals; agreement is then
  // perfect by construction.
  report.kappa = expected >= 1.0 ? 1.0 : (report.overall - expected) / (1.0 - expected);
  return report;
}

MetricsReport evaluate(const LabelMap& predicted, const LabelMap& reference, int class_count) {
  if (predicted.height() != reference.height() || predicted.width() != reference.width()) {
    throw Error("dimension mismatch between predicted and reference maps");
  }
  if (class_count < 1) throw Error("class count must be >= 1");
  const auto k = static_cast<std::size_t>(class_count);
  std::vector<std::vector<std::int64_t>> confusion(k, std::vector<std::int64_t>(k, 0));
  std::vector<std::int64_t> unclassified(k, 0);
  const auto pred = predicted.values();
  const auto ref = reference.values();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (ref[i] == 0) continue;
    if (ref[i] > class_count) {
      throw Error("reference label " + std::to_string(ref[i]) + " exceeds class count " +
                  std::to_string(class_count));
    }
    if (pred[i] > class_count) {
      throw Error("predicted label " + std::to_string(pred[i]) + " exceeds class count " +
                  std::to_string(class_count));
    }
    const auto row = static_cast<std::size_t>(ref[i] - 1);
    if (pred[i] == 0) {
      ++unclassified[row];
    } else {
      ++confusion[row][static_cast<std::size_t>(pred[i] - 1)];
    }
  }
  return report_from_confusion(std::move(confusion), std::move(unclassified));
}

}  // namespace shapedc
