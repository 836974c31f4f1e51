#include "dilab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "dilab/error.hpp"

namespace dilab {

bool ExperimentReport::passed() const {
  if (status != "ok") return false;
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

double ExperimentReport::scalar(const std::string& name) const {
  const auto it = scalars.find(name);
  if (it == scalars.end()) throw Error(ErrorCode::invalid_argument, "no scalar named '" + name + "'");
  return it->second;
}

const TimeSeries* ExperimentReport::find_series(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return &s;
  return nullptr;
}

const Criterion* ExperimentReport::find_criterion(const std::string& name) const {
  for (const auto& c : criteria)
    if (c.name == name) return &c;
  return nullptr;
}

Criterion& ExperimentReport::at_most(const std::string& name, double value, double tolerance, const std::string& detail) {
  criteria.push_back({name, value, tolerance, "<=", std::isfinite(value) && value <= tolerance, detail});
  return criteria.back();
}

Criterion& ExperimentReport::at_least(const std::string& name, double value, double tolerance, const std::string& detail) {
  criteria.push_back({name, value, tolerance, ">=", std::isfinite(value) && value >= tolerance, detail});
  return criteria.back();
}

Criterion& ExperimentReport::holds(const std::string& name, bool ok, const std::string& detail, double value) {
  criteria.push_back({name, value, 0.0, "flag", ok, detail});
  return criteria.back();
}

namespace {

nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double json_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
  }
  return j.get<double>();
}

nlohmann::json numbers_json(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

std::vector<double> json_numbers(const nlohmann::json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(json_number(x));
  return v;
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["status"] = status;
  if (!error.empty()) j["error"] = error;
  j["passed"] = passed();
  j["config"] = config;
  nlohmann::json sc = nlohmann::json::object();
  for (const auto& [k, v] : scalars) sc[k] = number_json(v);
  j["scalars"] = sc;
  nlohmann::json se = nlohmann::json::array();
  for (const auto& s : series) {
    se.push_back({{"name", s.name}, {"axis", s.axis}, {"units", s.units}, {"axis_values", numbers_json(s.axis_values)},
                  {"values", numbers_json(s.values)}});
  }
  j["series"] = se;
  nlohmann::json cr = nlohmann::json::array();
  for (const auto& c : criteria) {
    cr.push_back({{"name", c.name}, {"value", number_json(c.value)}, {"tolerance", number_json(c.tolerance)},
                  {"comparison", c.comparison}, {"pass", c.pass}, {"detail", c.detail}});
  }
  j["criteria"] = cr;
  j["notes"] = notes;
  return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  ExperimentReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.status = j.at("status").get<std::string>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  r.config = j.at("config");
  for (const auto& [k, v] : j.at("scalars").items()) r.scalars[k] = json_number(v);
  for (const auto& s : j.at("series")) {
    r.series.push_back(make_series(s.at("name").get<std::string>(), s.at("axis").get<std::string>(),
                                   json_numbers(s.at("axis_values")), json_numbers(s.at("values")),
                                   s.at("units").get<std::string>()));
  }
  for (const auto& c : j.at("criteria")) {
    r.criteria.push_back({c.at("name").get<std::string>(), json_number(c.at("value")), json_number(c.at("tolerance")),
                          c.at("comparison").get<std::string>(), c.at("pass").get<bool>(),
                          c.at("detail").get<std::string>()});
  }
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

TimeSeries make_series(std::string name, std::string axis, std::vector<double> x, std::vector<double> y,
                       std::string units) {
  if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "series '" + name + "' has mismatched columns");
  TimeSeries s;
  s.name = std::move(name);
  s.axis = std::move(axis);
  s.axis_values = std::move(x);
  s.values = std::move(y);
  s.units = std::move(units);
  return s;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string format_csv(const TimeSeries& s) {
  std::ostringstream os;
  os << s.axis << "," << s.name << "\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) os << format_number(s.axis_values[i]) << "," << format_number(s.values[i]) << "\n";
  return os.str();
}

std::string summary_line(const Criterion& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
  char buf[96];
  if (c.comparison == "flag") {
    if (c.value != 0.0) {
      std::snprintf(buf, sizeof buf, "  (value %.6g)", c.value);
      os << buf;
    }
  } else {
    std::snprintf(buf, sizeof buf, "  %.6g %s %.6g", c.value, c.comparison.c_str(), c.tolerance);
    os << buf;
  }
  if (!c.detail.empty()) os << "  " << c.detail;
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::io, "cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

void write_report(const ExperimentReport& report, const std::filesystem::path& directory,
                  const std::vector<std::string>& formats) {
  bool json = false;
  bool csv = false;
  for (const auto& f : formats) {
    if (f == "json") json = true;
    else if (f == "csv") csv = true;
    else throw Error(ErrorCode::schema, "unknown output format '" + f + "'");
  }
  if (json) {
    write_atomic(directory / "report.json", report.to_json().dump(2) + "\n");
    nlohmann::json timing = {{"experiment", report.experiment}, {"wall_clock_seconds", report.wall_clock_seconds}};
    write_atomic(directory / "timing.json", timing.dump(2) + "\n");
  }
  if (csv)
    for (const auto& s : report.series) write_atomic(directory / (s.name + ".csv"), format_csv(s));
}

}  // namespace dilab
