#include "vartrot/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vartrot {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config value of '" + key +
                                "' is not a number: " + v);
  }
  if (used != v.size())
    throw std::invalid_argument("config value of '" + key +
                                "' has trailing junk: " + v);
  return d;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long n;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config value of '" + key +
                                "' is not an integer: " + v);
  }
  if (used != v.size())
    throw std::invalid_argument("config value of '" + key +
                                "' has trailing junk: " + v);
  return n;
}

}  // namespace

ConfigDoc ConfigDoc::parse(const std::string& text) {
  ConfigDoc doc;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has no '=': " + line);
    std::string key = lower(trim(line.substr(0, eq)));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has an empty key");
    doc.kv_[key] = trim(line.substr(eq + 1));
  }
  return doc;
}

ConfigDoc ConfigDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool ConfigDoc::has(const std::string& key) const {
  return kv_.count(lower(key)) != 0;
}

std::string ConfigDoc::get_string(const std::string& key) const {
  auto it = kv_.find(lower(key));
  if (it == kv_.end())
    throw std::invalid_argument("config key missing: " + key);
  return it->second;
}

std::string ConfigDoc::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = kv_.find(lower(key));
  return it == kv_.end() ? fallback : it->second;
}

double ConfigDoc::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double ConfigDoc::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long ConfigDoc::get_int(const std::string& key) const {
  return parse_int(key, get_string(key));
}

long long ConfigDoc::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigDoc::get_u64(const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  std::size_t used = 0;
  std::uint64_t n;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config value of '" + key +
                                "' is not an unsigned integer: " + v);
  }
  if (used != v.size())
    throw std::invalid_argument("config value of '" + key +
                                "' has trailing junk: " + v);
  return n;
}

bool ConfigDoc::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = lower(get_string(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config value of '" + key +
                              "' is not a boolean: " + v);
}

std::vector<double> ConfigDoc::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& part : split(get_string(key), ','))
    out.push_back(parse_double(key, part));
  return out;
}

std::vector<long long> ConfigDoc::get_int_list(const std::string& key) const {
  std::vector<long long> out;
  for (const std::string& part : split(get_string(key), ','))
    out.push_back(parse_int(key, part));
  return out;
}

std::array<int, 2> parse_extents(const std::string& text) {
  std::string t = trim(text);
  std::size_t x = t.find('x');
  if (x == std::string::npos)
    return {static_cast<int>(parse_int("extents", t)), 1};
  return {static_cast<int>(parse_int("extents", trim(t.substr(0, x)))),
          static_cast<int>(parse_int("extents", trim(t.substr(x + 1))))};
}

ExperimentConfig experiment_from_config(const ConfigDoc& doc) {
  ExperimentConfig cfg;
  cfg.model = model_from_string(doc.get_string("model", "tfim"));

  LatticeSpec l;
  l.dimension = static_cast<int>(doc.get_int("d", 1));
  if (doc.has("extents")) l.extents = parse_extents(doc.get_string("extents"));
  l.boundary[0] =
      boundary_from_string(doc.get_string("boundary", "periodic"));
  l.boundary[1] = boundary_from_string(
      doc.get_string("boundary_y", doc.get_string("boundary", "periodic")));
  cfg.lattice = l;

  cfg.couplings = CouplingSet{cfg.model, doc.get_double("jz", 1.0),
                              doc.get_double("hx", 0.0),
                              doc.get_double("jy", 0.0)};
  cfg.tau = doc.get_double("tau", 0.1);
  cfg.layers = static_cast<int>(doc.get_int("m", 1));
  cfg.repetitions = static_cast<int>(doc.get_int("reps", 1));
  cfg.axis = sweep_axis_from_string(doc.get_string("axis", "size"));
  cfg.metric = metric_from_string(doc.get_string("metric", "frobenius"));
  cfg.noise.per_gate_fidelity = doc.get_double("pg", 0.999);
  cfg.samples = static_cast<int>(doc.get_int("samples", 20));
  cfg.seed = doc.get_u64("seed", 1);

  if (doc.has("sizes"))
    for (const std::string& part : split(doc.get_string("sizes"), ','))
      cfg.size_grid.push_back(parse_extents(part));
  if (doc.has("taus")) cfg.tau_grid = doc.get_double_list("taus");
  if (doc.has("couplings_grid")) {
    for (const std::string& point :
         split(doc.get_string("couplings_grid"), ';')) {
      std::vector<std::string> parts = split(point, ',');
      if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument(
            "couplings_grid points are Jz,hx or Jz,hx,Jy: " + point);
      CouplingSet c{cfg.model, parse_double("couplings_grid", parts[0]),
                    parse_double("couplings_grid", parts[1]),
                    parts.size() == 3 ? parse_double("couplings_grid", parts[2])
                                      : 0.0};
      cfg.coupling_grid.push_back(c);
    }
  }
  if (doc.has("reps_grid"))
    for (long long k : doc.get_int_list("reps_grid"))
      cfg.repetition_grid.push_back(static_cast<int>(k));

  // A size sweep overrides the extents anyway; without an explicit base the
  // first grid entry keeps the untouched default from tripping validation.
  if (!doc.has("extents") && !cfg.size_grid.empty())
    cfg.lattice.extents = cfg.size_grid.front();

  if (doc.has("observable"))
    for (long long s : doc.get_int_list("observable"))
      cfg.observable_sites.push_back(static_cast<int>(s));

  cfg.optimize_each_point = doc.get_bool("optimize_each_point", false);
  cfg.adam.learning_rate = doc.get_double("lr", cfg.adam.learning_rate);
  cfg.adam.max_steps =
      static_cast<int>(doc.get_int("max_steps", cfg.adam.max_steps));
  cfg.adam.early_stop = doc.get_bool("early_stop", cfg.adam.early_stop);
  return cfg;
}

}  // namespace vartrot
