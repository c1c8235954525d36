#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vartrot/bench.hpp"

namespace vartrot {

// Plain-text experiment description, one `key = value` pair per line.
// '#' starts a comment, blank lines are skipped, keys are lowercased, and a
// repeated key overwrites the earlier value. Values keep their case.
class ConfigDoc {
 public:
  static ConfigDoc parse(const std::string& text);
  static ConfigDoc load(const std::string& path);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated lists.
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Assembles a sweep description from a config document. Recognized keys:
//   model (tfim|tfxy), d (1|2), extents (N or WxH), boundary, boundary_y,
//   Jz, hx, Jy, tau, m, reps, axis (size|tau|couplings|reps),
//   sizes (6,8 or 3x4,3x6), taus, couplings_grid (Jz,hx[,Jy];...),
//   reps_grid, metric, pg, samples, seed, observable (site list),
//   optimize_each_point, lr, max_steps, early_stop.
// Unset keys keep the ExperimentConfig defaults; consistency is checked by
// run_sweep, not here.
ExperimentConfig experiment_from_config(const ConfigDoc& doc);

// Shared by experiment_from_config and the CLI: "6" -> {6,1}, "3x4" -> {3,4}.
std::array<int, 2> parse_extents(const std::string& text);

}  // namespace vartrot
