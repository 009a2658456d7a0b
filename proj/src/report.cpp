#include "isaid/evaluate.hpp"

#include "isaid/numeric_text.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace isaid::evaluate {
namespace {

std::string encoding_text(const features::FeatureConfig& f) {
  return f.encoding ? std::string(codec::name(*f.encoding)) : "none";
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_report(const EvaluationReport& report, ReportFormat format) {
  std::ostringstream out;
  const std::string method(features::name(report.features.method));
  const std::string classifier(classify::name(report.classifier.kind));
  if (format == ReportFormat::csv) {
    out << "method,encoding,classifier,repeat,accuracy\n";
    for (std::size_t i = 0; i < report.per_repeat_accuracy.size(); ++i) {
      out << method << ',' << encoding_text(report.features) << ',' << classifier << ',' << i << ','
          << format_double(report.per_repeat_accuracy[i]) << '\n';
    }
    return out.str();
  }

  out << pad("method", 18) << pad("encoding", 10) << pad("classifier", 12) << pad("repeats", 9)
      << pad("mean", 8) << "stddev\n";
  out << pad(method, 18) << pad(encoding_text(report.features), 10) << pad(classifier, 12)
      << pad(std::to_string(report.per_repeat_accuracy.size()), 9) << pad(fixed(report.mean_accuracy), 8)
      << fixed(report.stddev_accuracy) << '\n';

  std::size_t width = 9;
  for (const auto& l : report.labels) width = std::max(width, l.size() + 2);
  out << "\nper-label:\n" << pad("label", width) << pad("precision", 11) << "recall\n";
  const auto precision = report.precision();
  const auto recall = report.recall();
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out << pad(report.labels[i], width) << pad(fixed(precision[i]), 11) << fixed(recall[i]) << '\n';
  }

  out << "\nconfusion (rows true, columns predicted):\n" << pad("", width);
  for (const auto& l : report.labels) out << pad(l, width);
  out << '\n';
  for (std::size_t t = 0; t < report.labels.size(); ++t) {
    out << pad(report.labels[t], width);
    for (std::size_t p = 0; p < report.labels.size(); ++p) out << pad(std::to_string(report.confusion[t][p]), width);
    out << '\n';
  }
  return out.str();
}

std::string render_confusion_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "true\\predicted";
  for (const auto& l : report.labels) out << ',' << l;
  out << '\n';
  for (std::size_t t = 0; t < report.labels.size(); ++t) {
    out << report.labels[t];
    for (std::size_t count : report.confusion[t]) out << ',' << count;
    out << '\n';
  }
  return out.str();
}

std::string render_summary(std::span<const EvaluationReport> reports) {
  std::vector<std::size_t> order(reports.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].mean_accuracy > reports[b].mean_accuracy;
  });
  std::ostringstream out;
  out << pad("method", 18) << pad("encoding", 10) << pad("classifier", 12) << pad("dimension", 11)
      << pad("mean", 8) << "stddev\n";
  for (std::size_t i : order) {
    const auto& r = reports[i];
    const std::size_t dim = r.feature_dimension.empty() ? 0 : r.feature_dimension.back();
    out << pad(std::string(features::name(r.features.method)), 18) << pad(encoding_text(r.features), 10)
        << pad(std::string(classify::name(r.classifier.kind)), 12) << pad(std::to_string(dim), 11)
        << pad(fixed(r.mean_accuracy), 8) << fixed(r.stddev_accuracy) << '\n';
  }
  return out.str();
}

std::string render_curve_csv(const LearningCurve& curve) {
  std::ostringstream out;
  out << "classes,train_size,mean_accuracy\n";
  for (const auto& p : curve.points) {
    out << p.classes << ',' << p.train_size << ',' << format_double(p.mean_accuracy) << '\n';
  }
  return out.str();
}

}  // namespace isaid::evaluate
