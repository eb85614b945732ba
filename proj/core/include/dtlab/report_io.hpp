#pragma once

#include <string>

#include "dtlab/divisor_stats.hpp"
#include "dtlab/lcm_sums.hpp"

namespace dtlab {

// Deterministic serialization: fixed column order, fixed "%.12g" doubles,
// no timestamps, so byte-identical reruns are a testable property.  Every
// CSV opens with "# dtlab-csv v1 <name>" and a "# key=value ..." meta line;
// the JSON mirror carries the same fields under a "schema" tag.
std::string format_double(double v);

std::string to_csv(const LcmSumReport& report);
std::string to_csv(const MomentReport& report);
std::string to_csv(const DensityReport& report);
std::string to_csv(const ConditionReport& report);
std::string to_csv(const DecompositionReport& report);
std::string to_csv(const CensusReport& report);

std::string to_json_text(const LcmSumReport& report);
std::string to_json_text(const MomentReport& report);
std::string to_json_text(const DensityReport& report);
std::string to_json_text(const ConditionReport& report);
std::string to_json_text(const DecompositionReport& report);
std::string to_json_text(const CensusReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string json_sibling_path(const std::string& csv_path);

// Writes report.csv and its .json mirror next to it; returns the JSON path.
template <typename Report>
std::string write_report_pair(const std::string& csv_path, const Report& report) {
  write_text_file(csv_path, to_csv(report));
  std::string jp = json_sibling_path(csv_path);
  write_text_file(jp, to_json_text(report));
  return jp;
}

}  // namespace dtlab
