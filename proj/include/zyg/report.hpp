#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace zyg {

// Structured result of a verification run. The JSON layout is stable and
// depends only on the inputs (no timestamps), so identical configs produce
// byte-identical reports.
class ExperimentReport {
 public:
  ExperimentReport() : ExperimentReport("unnamed") {}
  explicit ExperimentReport(std::string name) { doc_["experiment"] = std::move(name); }

  nlohmann::ordered_json& meta() { return doc_["meta"]; }
  nlohmann::ordered_json& metrics() { return doc_["metrics"]; }

  void check(const std::string& name, bool pass, double measured, double bound,
             const std::string& relation) {
    nlohmann::ordered_json c;
    c["name"] = name;
    c["measured"] = measured;
    c["bound"] = bound;
    c["relation"] = relation;
    c["pass"] = pass;
    doc_["checks"].push_back(c);
    if (!pass) failures_.push_back(name);
  }
  void check_le(const std::string& name, double measured, double bound) {
    check(name, measured <= bound, measured, bound, "<=");
  }
  void check_ge(const std::string& name, double measured, double bound) {
    check(name, measured >= bound, measured, bound, ">=");
  }
  void note(const std::string& key, const std::string& text) { doc_["notes"][key] = text; }

  bool passed() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

  nlohmann::ordered_json json() const {
    auto d = doc_;
    d["passed"] = passed();
    return d;
  }
  std::string dump(int indent = 2) const { return json().dump(indent); }

 private:
  nlohmann::ordered_json doc_;
  std::vector<std::string> failures_;
};

// Least-squares line fit; returns slope, intercept and R^2.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace zyg
