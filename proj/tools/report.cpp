#include "report.hpp"

#include <cstdarg>
#include <cstdio>

namespace jnr::cli {
namespace {

using ojson = nlohmann::ordered_json;

std::string Format(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

ojson ConfusionJson(const DigitConfusion& c) {
  ojson j;
  j["frames"] = c.frames;
  j["rows"] = {"predicted 2 digits", "predicted 1 digit"};
  j["columns"] = {"true 2 digits", "true 1 digit"};
  j["fractions"] = {{c.cells[0][0], c.cells[0][1]}, {c.cells[1][0], c.cells[1][1]}};
  j["counts"] = {{c.counts[0][0], c.counts[0][1]}, {c.counts[1][0], c.counts[1][1]}};
  return j;
}

}  // namespace

ojson EvalReportJson(const EvalReport& report) {
  ojson j;
  j["accuracy"] = report.accuracy;
  j["total"] = report.total;
  j["correct"] = report.correct;
  j["missing"] = report.missing;
  ojson classes = ojson::object();
  for (const auto& [label, count] : report.per_class) {
    classes[std::to_string(label)] = {{"total", count.total}, {"correct", count.correct}};
  }
  j["per_class"] = classes;
  if (report.digit_confusion) j["digit_confusion"] = ConfusionJson(*report.digit_confusion);
  return j;
}

std::string EvalReportText(const EvalReport& report) {
  std::string s = Format("accuracy  %.4f  (%zu/%zu)\n", report.accuracy, report.correct, report.total);
  s += Format("missing   %zu\n", report.missing.size());
  s += "\nclass  total  correct  accuracy\n";
  for (const auto& [label, count] : report.per_class) {
    const double acc = count.total ? static_cast<double>(count.correct) / static_cast<double>(count.total) : 0.0;
    s += Format("%5d  %5zu  %7zu  %8.4f\n", label, count.total, count.correct, acc);
  }
  if (report.digit_confusion) {
    const DigitConfusion& c = *report.digit_confusion;
    s += Format("\ndigit-count confusion over %zu frames\n", c.frames);
    s += "                    true 2 digits  true 1 digit\n";
    s += Format("predicted 2 digits  %13.4f  %12.4f\n", c.cells[0][0], c.cells[0][1]);
    s += Format("predicted 1 digit   %13.4f  %12.4f\n", c.cells[1][0], c.cells[1][1]);
  }
  return s;
}

ojson GridSearchJson(const GridSearchResult& r) {
  ojson j;
  j["k"] = r.k;
  j["n"] = r.n;
  j["tune_accuracy"] = r.tune_accuracy;
  j["holdout_accuracy"] = r.holdout_accuracy;
  j["tune_count"] = r.tune_count;
  j["holdout_count"] = r.holdout_count;
  ojson table = ojson::array();
  for (const GridPoint& p : r.table) table.push_back({{"k", p.k}, {"n", p.n}, {"tune_accuracy", p.tune_accuracy}});
  j["table"] = table;
  return j;
}

std::string GridSearchText(const GridSearchResult& r) {
  std::string s = "  K      N  tune accuracy\n";
  for (const GridPoint& p : r.table) {
    const bool best = p.k == r.k && p.n == r.n;
    s += Format("%3d  %5.2f  %13.4f%s\n", p.k, p.n, p.tune_accuracy, best ? "  *" : "");
  }
  s += Format("\nselected K=%d N=%.2f: tune %.4f on %zu tracklets, holdout %.4f on %zu tracklets\n", r.k, r.n,
              r.tune_accuracy, r.tune_count, r.holdout_accuracy, r.holdout_count);
  return s;
}

ojson AblationJson(std::span<const AblationRow> rows) {
  ojson j = ojson::array();
  for (const AblationRow& r : rows) j.push_back({{"variant", r.variant}, {"accuracy", r.accuracy}, {"delta", r.delta}});
  return j;
}

std::string AblationText(std::span<const AblationRow> rows) {
  std::string s = Format("%-40s  %8s  %8s\n", "variant", "accuracy", "delta");
  for (const AblationRow& r : rows) s += Format("%-40s  %8.4f  %+8.4f\n", r.variant.c_str(), r.accuracy, r.delta);
  return s;
}

}  // namespace jnr::cli
