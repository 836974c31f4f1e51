#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilab/functionals.hpp"

namespace dilab {

struct Criterion {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string comparison;  // "<=", ">=", "==", "flag"
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::string status = "ok";  // ok | tail-mass-breach | numerical-failure
  std::string error;
  std::map<std::string, double> scalars;
  std::vector<TimeSeries> series;
  std::vector<Criterion> criteria;
  std::vector<std::string> notes;
  double wall_clock_seconds = 0.0;  // written to timing.json only

  bool passed() const;
  void scalar(const std::string& name, double value) { scalars[name] = value; }
  double scalar(const std::string& name) const;
  void add(TimeSeries s) { series.push_back(std::move(s)); }
  const TimeSeries* find_series(const std::string& name) const;
  const Criterion* find_criterion(const std::string& name) const;

  Criterion& at_most(const std::string& name, double value, double tolerance, const std::string& detail = {});
  Criterion& at_least(const std::string& name, double value, double tolerance, const std::string& detail = {});
  Criterion& holds(const std::string& name, bool ok, const std::string& detail = {}, double value = 0.0);

  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
};

TimeSeries make_series(std::string name, std::string axis, std::vector<double> x, std::vector<double> y,
                       std::string units = {});

/// Scientific notation with 17 significant digits, '.' as decimal separator.
std::string format_number(double v);
std::string format_csv(const TimeSeries& s);
std::string summary_line(const Criterion& c);

/// Writes `contents` to `path` through a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// report.json, timing.json and one CSV per series, as selected by `formats`.
void write_report(const ExperimentReport& report, const std::filesystem::path& directory,
                  const std::vector<std::string>& formats);

}  // namespace dilab
