#include "dilab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dilab/error.hpp"

namespace dilab {

namespace {

using Numbers = std::vector<double>;
using Strings = std::vector<std::string>;

std::vector<SchemaEntry> build_schema() {
  return {
      {"experiment", std::string(), "study to run (see `dilab list-experiments`)"},
      {"seed", 1.0, "seed for random initial data"},
      {"description", std::string(), "free text"},

      {"grid.mode", std::string("cartesian"), "cartesian | radial"},
      {"grid.n", 1.0, "ambient dimension"},
      {"grid.L", 20.0, "half-width of the box or maximal radius"},
      {"grid.N", 512.0, "points per axis"},

      {"potential.family", std::string("zero"), "zero | inverse_power | gaussian_bump | compact_bump | algebraic"},
      {"potential.c", 1.0, "amplitude of inverse_power and algebraic"},
      {"potential.p", 1.0, "exponent of inverse_power"},
      {"potential.a", 1.0, "amplitude of gaussian_bump and compact_bump"},
      {"potential.sigma", 2.0, "width of gaussian_bump"},
      {"potential.rho", 5.0, "support radius of compact_bump"},
      {"potential.q", 2.0, "exponent of algebraic"},

      {"multiplier.family", std::string("japanese_bracket"),
       "constant | abs | smoothed_abs | japanese_bracket | bump_integrated"},
      {"multiplier.eps", 1.0, "smoothing length of smoothed_abs"},
      {"multiplier.k", 4.0, "bump index of bump_integrated"},
      {"multiplier.inner", 1.0, "plateau radius of bump_integrated"},
      {"multiplier.R", 1.0, "rescaling radius"},
      {"multiplier.offset", 0.0, "constant added to psi"},
      {"multiplier.scale", 1.0, "factor applied to psi"},

      {"data.family", std::string("gaussian"), "gaussian | compact_bump | single_mode | random"},
      {"data.width", 2.0, "gaussian width"},
      {"data.amplitude", 1.0, "amplitude"},
      {"data.xi0", 0.0, "modulation frequency along x_1"},
      {"data.radius", 5.0, "support radius of compact_bump"},
      {"data.normalize", false, "rescale to unit L2 norm"},
      {"data.bandlimit", 1.0, "frequency bound of random fields"},
      {"data.envelope", 1.5, "gaussian envelope width of random fields"},
      {"data.hole", 1.0, "radius of the origin cut-off of random fields"},
      {"data.modes", 8.0, "number of modes of random fields"},

      {"time.T", 4.0, "final time or half-width of the time strip"},
      {"time.dt", 0.05, "time step"},
      {"time.dt_per_h", 0.0, "if positive, dt = dt_per_h * h"},
      {"time.t_max", 40.0, "final time of limit studies"},
      {"time.steps", 10000.0, "steps of the unitarity runs"},
      {"time.sample_every", 10.0, "steps between mass samples"},
      {"time.t_reverse", 50.0, "time of the reversibility demo"},

      {"observable.R", 5.0, "localization radius"},
      {"observable.weight", std::string("inverse_linear"), "inverse_linear (1/(1+|x|)) | ball | one"},

      {"sweep.T_ladder", Numbers{4, 8, 16, 32}, "strip half-widths"},
      {"sweep.t_ladder", Numbers{4, 8, 16, 32, 40}, "sampling times of limit studies"},
      {"sweep.R_ladder", Numbers{2, 4, 8, 16, 32}, "radii"},
      {"sweep.eps_ladder", Numbers{0.4, 0.2, 0.1}, "smoothing lengths"},
      {"sweep.k_list", Numbers{1, 2, 4, 8, 16}, "bump indices"},
      {"sweep.N_ladder", Numbers{256, 512, 1024}, "grid sizes of refinement ladders"},
      {"sweep.dt_ladder", Numbers{0.1, 0.05, 0.025}, "time steps of refinement ladders"},
      {"sweep.lambda", 2.0, "factor of the multiplier scaling check"},

      {"survey.dims", Numbers{2, 3}, "dimensions surveyed"},
      {"survey.samples", 100.0, "random fields per dimension"},
      {"survey.cartesian_N", 192.0, "points per axis of the n = 2 grid"},
      {"survey.radial_N", 2048.0, "points of the n >= 3 radial grid"},
      {"survey.refine", 2.0, "refinement factor"},

      {"tolerances.residual", 1e-3, "relative residual of identities"},
      {"tolerances.order", 2.0, "expected convergence order"},
      {"tolerances.order_band", 0.3, "allowed deviation of the fitted order"},
      {"tolerances.tail_mass", 1e-6, "allowed mass fraction in the outer region"},
      {"tolerances.tail_fraction", 0.1, "width of the outer region relative to L"},
      {"tolerances.unitarity", 1e-12, "relative mass drift of the exact propagator"},
      {"tolerances.splitstep", 1e-10, "relative mass drift of the split-step propagator"},
      {"tolerances.energy", 1e-10, "relative drift of the energy form"},
      {"tolerances.sobolev", 1e-10, "relative drift of the perturbed H^{1/2} norm"},
      {"tolerances.reversal", 1e-10, "time-reversal defect"},
      {"tolerances.isometry", 1e-8, "norm defect of wave operators"},
      {"tolerances.convention", 1e-8, "Fourier convention check"},
      {"tolerances.final_gap", 0.05, "relative gap to a limit at the end of a ladder"},
      {"tolerances.decay_ratio", 0.1, "required decay factor across a ladder"},
      {"tolerances.roundoff", 1e-9, "relative slack for comparisons that hold with equality"},
      {"tolerances.halving", 0.6, "required ratio when the averaging time doubles"},
      {"tolerances.plateau", 0.1, "relative gap of the local smoothing plateau"},
      {"tolerances.n3_fraction", 0.5, "lower bound fraction of the n = 3 local smoothing limit"},
      {"tolerances.recovery", 1e-10, "reversibility recovery error"},
      {"tolerances.localized", 1e-10, "deviation of the localized norm from 1"},
      {"tolerances.imag", 1e-12, "imaginary part of real bilinear forms"},
      {"tolerances.ibp", 1e-6, "relative error of the integration-by-parts value"},
      {"tolerances.refinement", 0.1, "relative change under grid refinement"},
      {"tolerances.hypothesis", 0.05, "tolerance of potential hypothesis checks"},
      {"tolerances.floor", 1e-14, "denominator floor of relative residuals"},
      {"tolerances.scaling", 1e-10, "linearity checks in the multiplier"},
      {"tolerances.virial_rate", 1e-3, "d/dt of the weighted mass against G"},
      {"tolerances.arithmetic", 1e-12, "coefficient identities"},

      {"output.directory", std::string("out"), "report directory"},
      {"output.formats", Strings{"json", "csv"}, "json and/or csv"},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::schema, where + ": " + what);
}

bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size() && std::isfinite(out);
}

bool parse_string(const std::string& s, std::string& out, bool allow_bare) {
  const std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
    out = t.substr(1, t.size() - 2);
    return out.find('"') == std::string::npos;
  }
  if (!allow_bare || t.empty()) return false;
  for (char c : t)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '/')) return false;
  out = t;
  return true;
}

std::vector<std::string> split_list(const std::string& s, const std::string& where) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') schema_error(where, "expected an array");
  const std::string body = trim(t.substr(1, t.size() - 2));
  std::vector<std::string> items;
  if (body.empty()) return items;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  items.push_back(trim(cur));
  return items;
}

ConfigValue parse_like(const ConfigValue& like, const std::string& raw, const std::string& where, bool allow_bare) {
  return std::visit(
      [&](const auto& proto) -> ConfigValue {
        using T = std::decay_t<decltype(proto)>;
        const std::string t = trim(raw);
        if constexpr (std::is_same_v<T, bool>) {
          if (t == "true") return true;
          if (t == "false") return false;
          schema_error(where, "expected true or false, got '" + t + "'");
        } else if constexpr (std::is_same_v<T, double>) {
          double v = 0.0;
          if (!parse_number(t, v)) schema_error(where, "expected a number, got '" + t + "'");
          return v;
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string v;
          if (!parse_string(t, v, allow_bare)) schema_error(where, "expected a quoted string, got '" + t + "'");
          return v;
        } else if constexpr (std::is_same_v<T, Numbers>) {
          Numbers out;
          for (const auto& item : split_list(t, where)) {
            double v = 0.0;
            if (!parse_number(item, v)) schema_error(where, "expected numbers in array, got '" + item + "'");
            out.push_back(v);
          }
          return out;
        } else {
          Strings out;
          for (const auto& item : split_list(t, where)) {
            std::string v;
            if (!parse_string(item, v, allow_bare)) schema_error(where, "expected strings in array, got '" + item + "'");
            out.push_back(v);
          }
          return out;
        }
      },
      like);
}

const std::map<std::string, const SchemaEntry*>& schema_index() {
  static const std::map<std::string, const SchemaEntry*> index = [] {
    std::map<std::string, const SchemaEntry*> m;
    for (const auto& e : config_schema()) m.emplace(e.key, &e);
    return m;
  }();
  return index;
}

bool known_section(const std::string& section) {
  for (const auto& e : config_schema())
    if (e.key.rfind(section + ".", 0) == 0) return true;
  return false;
}

nlohmann::json value_json(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::floor(x) == x && std::abs(x) < 9.0e15) return static_cast<long long>(x);
          return x;
        } else if constexpr (std::is_same_v<T, Numbers>) {
          nlohmann::json arr = nlohmann::json::array();
          for (double d : x) {
            if (std::floor(d) == d && std::abs(d) < 9.0e15) arr.push_back(static_cast<long long>(d));
            else arr.push_back(d);
          }
          return arr;
        } else {
          return x;
        }
      },
      v);
}

}  // namespace

const std::vector<SchemaEntry>& config_schema() {
  static const std::vector<SchemaEntry> schema = build_schema();
  return schema;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& e : config_schema()) values_.emplace(e.key, e.fallback);
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path.string());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = origin + ":" + std::to_string(number);
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') schema_error(where, "malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!known_section(section)) schema_error(where, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) schema_error(where, "expected key = value");
    const std::string name = trim(body.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    if (cfg.explicit_.count(key)) schema_error(where, "duplicate key '" + key + "'");
    cfg.assign(key, body.substr(eq + 1), where);
  }
  return cfg;
}

void ExperimentConfig::assign(const std::string& key, const std::string& raw, const std::string& where) {
  const auto& index = schema_index();
  const auto it = index.find(key);
  if (it == index.end()) schema_error(where, "unknown key '" + key + "'");
  values_[key] = parse_like(it->second->fallback, raw, where, false);
  explicit_.insert(key);
}

void ExperimentConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) schema_error("--set " + assignment, "expected section.key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const auto& index = schema_index();
  const auto it = index.find(key);
  if (it == index.end()) schema_error("--set " + assignment, "unknown key '" + key + "'");
  values_[key] = parse_like(it->second->fallback, assignment.substr(eq + 1), "--set " + key, true);
  explicit_.insert(key);
}

void ExperimentConfig::set(const std::string& key, const ConfigValue& value) {
  const auto& index = schema_index();
  const auto it = index.find(key);
  if (it == index.end()) schema_error("set", "unknown key '" + key + "'");
  if (it->second->fallback.index() != value.index()) schema_error("set", "type mismatch for '" + key + "'");
  values_[key] = value;
  explicit_.insert(key);
}

const ConfigValue& ExperimentConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::schema, "unknown key '" + key + "'");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  const auto* v = std::get_if<double>(&get(key));
  if (!v) throw Error(ErrorCode::schema, "'" + key + "' is not a number");
  return *v;
}

long ExperimentConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (std::floor(v) != v || std::abs(v) > 1e15) throw Error(ErrorCode::schema, "'" + key + "' must be an integer");
  return static_cast<long>(v);
}

bool ExperimentConfig::flag(const std::string& key) const {
  const auto* v = std::get_if<bool>(&get(key));
  if (!v) throw Error(ErrorCode::schema, "'" + key + "' is not a boolean");
  return *v;
}

std::string ExperimentConfig::text(const std::string& key) const {
  const auto* v = std::get_if<std::string>(&get(key));
  if (!v) throw Error(ErrorCode::schema, "'" + key + "' is not a string");
  return *v;
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  const auto* v = std::get_if<Numbers>(&get(key));
  if (!v) throw Error(ErrorCode::schema, "'" + key + "' is not a number array");
  return *v;
}

std::vector<std::string> ExperimentConfig::texts(const std::string& key) const {
  const auto* v = std::get_if<Strings>(&get(key));
  if (!v) throw Error(ErrorCode::schema, "'" + key + "' is not a string array");
  return *v;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) j[key] = value_json(value);
    else j[key.substr(0, dot)][key.substr(dot + 1)] = value_json(value);
  }
  return j;
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  std::string section;
  auto emit = [&](const std::string& name, const ConfigValue& v) {
    os << name << " = " << value_json(v).dump() << "\n";
  };
  for (const auto& e : config_schema())
    if (e.key.find('.') == std::string::npos) emit(e.key, values_.at(e.key));
  for (const auto& e : config_schema()) {
    const auto dot = e.key.find('.');
    if (dot == std::string::npos) continue;
    const std::string s = e.key.substr(0, dot);
    if (s != section) {
      os << "\n[" << s << "]\n";
      section = s;
    }
    emit(e.key.substr(dot + 1), values_.at(e.key));
  }
  return os.str();
}

}  // namespace dilab
