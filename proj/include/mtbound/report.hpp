#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace mtbound {

// One row of the benchmark report. percent_deviation = (C_f - C_lb)/C_f * 100
// when both costs are finite.
struct RunReport {
  std::string instance_id;
  std::string variant;
  int level = 0;
  double delta = 0.0;
  std::optional<double> lower_bound;
  std::optional<double> feasible_cost;
  double graph_gen_seconds = 0.0;
  double total_seconds = 0.0;
  bool lb_exact = false;
  bool ub_found = false;
  bool outlier = false;

  std::optional<double> percent_deviation() const {
    if (!lower_bound || !feasible_cost || *feasible_cost == 0.0) return std::nullopt;
    return (*feasible_cost - *lower_bound) / *feasible_cost * 100.0;
  }
};

inline std::string format_double(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

inline std::string csv_schema_line() { return "# mtbound-report v1"; }

inline std::string csv_header() {
  return "instance,variant,level,delta,lower_bound,feasible_cost,percent_deviation,"
         "graph_gen_seconds,total_seconds,lb_exact,ub_found,outlier";
}

inline std::string csv_row(const RunReport& r) {
  auto opt = [](const std::optional<double>& v, const char* fmt) {
    return v ? format_double(*v, fmt) : std::string();
  };
  std::string row = r.instance_id + "," + r.variant + "," + std::to_string(r.level) + "," +
                    format_double(r.delta);
  row += "," + opt(r.lower_bound, "%.9g");
  row += "," + opt(r.feasible_cost, "%.9g");
  row += "," + opt(r.percent_deviation(), "%.2f");
  row += "," + format_double(r.graph_gen_seconds, "%.3f");
  row += "," + format_double(r.total_seconds, "%.3f");
  row += std::string(",") + (r.lb_exact ? "1" : "0");
  row += std::string(",") + (r.ub_found ? "1" : "0");
  row += std::string(",") + (r.outlier ? "1" : "0");
  return row;
}

// Per-(variant, n_targets, level) averages over non-outlier rows.
struct SummaryRow {
  std::string variant;
  int n_targets = 0;
  int level = 0;
  int instances = 0;
  double avg_percent_deviation = 0.0;
  double avg_graph_gen_seconds = 0.0;
  double avg_total_seconds = 0.0;
};

inline std::string summary_csv_header() {
  return "variant,n_targets,level,instances,avg_percent_deviation,avg_graph_gen_seconds,"
         "avg_total_seconds";
}

inline std::string summary_csv_row(const SummaryRow& s) {
  return s.variant + "," + std::to_string(s.n_targets) + "," + std::to_string(s.level) + "," +
         std::to_string(s.instances) + "," + format_double(s.avg_percent_deviation, "%.2f") +
         "," + format_double(s.avg_graph_gen_seconds, "%.3f") + "," +
         format_double(s.avg_total_seconds, "%.3f");
}

}  // namespace mtbound
