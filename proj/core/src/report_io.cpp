#include "dtlab/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dtlab/errors.hpp"

namespace dtlab {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string exact_cell(const LcmSumValue& v) {
  return v.mode == SumMode::exact ? v.exact.get_str() : std::string();
}

ordered_json opt_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

ordered_json interval_json(const Interval& iv) {
  return ordered_json{{"lo", iv.lo}, {"hi", iv.hi}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_csv(const LcmSumReport& report) {
  std::ostringstream os;
  os << "# dtlab-csv v1 lcm-sums\n";
  os << "# kind=" << lcm_kind_name(report.kind) << " r=" << report.r << "\n";
  os << "kind,r,x,sum,ratio,mode\n";
  for (const auto& row : report.rows) {
    os << lcm_kind_name(report.kind) << ',' << report.r << ','
       << format_double(row.x) << ','
       << (row.sum.mode == SumMode::exact ? row.sum.exact.get_str()
                                          : format_double(row.sum.value))
       << ',' << format_double(row.ratio) << ','
       << (row.sum.mode == SumMode::exact ? "exact" : "fp") << '\n';
  }
  return os.str();
}

std::string to_json_text(const LcmSumReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back(ordered_json{
        {"x", row.x},
        {"sum", row.sum.value},
        {"exact", row.sum.mode == SumMode::exact
                      ? ordered_json(row.sum.exact.get_str())
                      : ordered_json(nullptr)},
        {"ratio", row.ratio},
        {"mode", row.sum.mode == SumMode::exact ? "exact" : "fp"}});
  }
  return dump(ordered_json{{"schema", "dtlab-json v1 lcm-sums"},
                           {"kind", lcm_kind_name(report.kind)},
                           {"r", report.r},
                           {"rows", rows}});
}

std::string to_csv(const MomentReport& report) {
  std::ostringstream os;
  os << "# dtlab-csv v1 moments\n";
  os << "# weight=" << report.spec.weight << " level=" << report.spec.level
     << " r=" << report.r << " lo=" << format_double(report.interval.lo)
     << " hi=" << format_double(report.interval.hi)
     << " failures=" << report.failure_count << "\n";
  os << "x,count,moment,ratio\n";
  for (const auto& row : report.rows)
    os << format_double(row.x) << ',' << row.count << ','
       << opt_cell(row.moment) << ',' << opt_cell(row.ratio) << '\n';
  return os.str();
}

std::string to_json_text(const MomentReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows)
    rows.push_back(ordered_json{{"x", row.x},
                                {"count", row.count},
                                {"moment", opt_json(row.moment)},
                                {"ratio", opt_json(row.ratio)}});
  return dump(ordered_json{{"schema", "dtlab-json v1 moments"},
                           {"weight", report.spec.weight},
                           {"level", report.spec.level},
                           {"interval", interval_json(report.interval)},
                           {"r", report.r},
                           {"failures", report.failure_count},
                           {"rows", rows}});
}

std::string to_csv(const DensityReport& report) {
  std::ostringstream os;
  os << "# dtlab-csv v1 density\n";
  os << "# weight=" << report.spec.weight << " level=" << report.spec.level
     << " delta=" << report.delta << " lo=" << format_double(report.interval.lo)
     << " hi=" << format_double(report.interval.hi) << "\n";
  os << "x,count,density,model\n";
  for (const auto& row : report.rows)
    os << format_double(row.x) << ',' << row.count << ','
       << format_double(row.density) << ',' << opt_cell(row.model) << '\n';
  return os.str();
}

std::string to_json_text(const DensityReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows)
    rows.push_back(ordered_json{{"x", row.x},
                                {"count", row.count},
                                {"density", row.density},
                                {"model", opt_json(row.model)}});
  return dump(ordered_json{{"schema", "dtlab-json v1 density"},
                           {"weight", report.spec.weight},
                           {"level", report.spec.level},
                           {"delta", report.delta},
                           {"interval", interval_json(report.interval)},
                           {"rows", rows}});
}

std::string to_csv(const ConditionReport& report) {
  std::ostringstream os;
  os << "# dtlab-csv v1 diagnostics\n";
  os << "# weight=" << report.spec.weight << " level=" << report.spec.level
     << " x=" << format_double(report.x)
     << " lo=" << format_double(report.interval.lo)
     << " hi=" << format_double(report.interval.hi)
     << " a_count=" << report.a_count << "\n";
  os << "delta,count,delta_ratio,phi_ratio,in_window\n";
  for (const auto& row : report.rows)
    os << row.delta << ',' << row.count << ','
       << format_double(row.delta_ratio) << ','
       << format_double(row.phi_ratio) << ',' << (row.within_window ? 1 : 0)
       << '\n';
  return os.str();
}

std::string to_json_text(const ConditionReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows)
    rows.push_back(ordered_json{{"delta", row.delta},
                                {"count", row.count},
                                {"delta_ratio", row.delta_ratio},
                                {"phi_ratio", row.phi_ratio},
                                {"in_window", row.within_window}});
  return dump(ordered_json{{"schema", "dtlab-json v1 diagnostics"},
                           {"weight", report.spec.weight},
                           {"level", report.spec.level},
                           {"x", report.x},
                           {"interval", interval_json(report.interval)},
                           {"a_count", report.a_count},
                           {"rows", rows}});
}

std::string to_csv(const DecompositionReport& report) {
  std::ostringstream os;
  os << "# dtlab-csv v1 decompose\n";
  os << "# weight=" << report.spec.weight << " level=" << report.spec.level
     << " x=" << format_double(report.x) << " c=" << format_double(report.c)
     << " beta=" << format_double(report.beta) << " r=" << report.r
     << " total=" << report.total.get_str()
     << " zeros=" << report.zero_count
     << " failures=" << report.failure_count << "\n";
  os << "class,s,count,sum\n";
  for (const auto& row : report.rows) {
    os << decomp_class_name(row.cls) << ',';
    if (row.s) os << *row.s;
    os << ',' << row.count << ',' << row.dr_sum.get_str() << '\n';
  }
  return os.str();
}

std::string to_json_text(const DecompositionReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows)
    rows.push_back(ordered_json{
        {"class", decomp_class_name(row.cls)},
        {"s", row.s ? ordered_json(*row.s) : ordered_json(nullptr)},
        {"count", row.count},
        {"sum", row.dr_sum.get_str()}});
  return dump(ordered_json{{"schema", "dtlab-json v1 decompose"},
                           {"weight", report.spec.weight},
                           {"level", report.spec.level},
                           {"x", report.x},
                           {"c", report.c},
                           {"beta", report.beta},
                           {"r", report.r},
                           {"total", report.total.get_str()},
                           {"zeros", report.zero_count},
                           {"failures", report.failure_count},
                           {"rows", rows}});
}

std::string to_csv(const CensusReport& report) {
  std::ostringstream os;
  os << "# dtlab-csv v1 sato-tate\n";
  os << "# weight=" << report.spec.weight << " level=" << report.spec.level
     << " lo=" << format_double(report.interval.lo)
     << " hi=" << format_double(report.interval.hi) << "\n";
  os << "x,primes,hits,frequency,model,deviation\n";
  for (const auto& row : report.rows)
    os << format_double(row.x) << ',' << row.primes << ',' << row.hits << ','
       << format_double(row.frequency) << ',' << format_double(row.model)
       << ',' << format_double(row.deviation) << '\n';
  return os.str();
}

std::string to_json_text(const CensusReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows)
    rows.push_back(ordered_json{{"x", row.x},
                                {"primes", row.primes},
                                {"hits", row.hits},
                                {"frequency", row.frequency},
                                {"model", row.model},
                                {"deviation", row.deviation}});
  return dump(ordered_json{{"schema", "dtlab-json v1 sato-tate"},
                           {"weight", report.spec.weight},
                           {"level", report.spec.level},
                           {"interval", interval_json(report.interval)},
                           {"rows", rows}});
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure on output file: " + path);
}

std::string json_sibling_path(const std::string& csv_path) {
  if (csv_path.size() >= 4 && csv_path.ends_with(".csv"))
    return csv_path.substr(0, csv_path.size() - 4) + ".json";
  return csv_path + ".json";
}

}  // namespace dtlab
