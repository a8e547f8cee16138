#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace thetalab {

// nlohmann::json keeps object keys in a std::map, so dumps are key-sorted and
// byte-stable for equal content
using Json = nlohmann::json;

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json conventions() {
  return {
      {"mean_curvature", "trace (sum of principal curvatures); H~ uses the normal +d/dt, flows use the normal pointing into the end they move toward"},
      {"green_normalization", "L = 8 Delta + Scal; G_p = 1/d + alpha_p(p) + O(d) with d the distance to p"},
      {"mass", "paper_mass = alpha_p(p) + G_q(p); the isotropic Schwarzschild fit of W = G_p + G_q gives fit_mass = 2 paper_mass"},
      {"cutoff", "eta(d) = 1 for d < T/8, 0 for d > T/4, quintic smoothstep between"},
      {"hawking_mass", "sqrt(A/16pi) (1 - H^2 A/16pi)"},
      {"flow_time", "tau = log(A/A0)"},
  };
}

inline Json module_versions() {
  return {{"warped_geometry", "1.0"}, {"conformal_laplacian", "1.0"}, {"greens", "1.0"},
          {"blowup", "1.0"},          {"horizons", "1.0"},            {"imcf_hawking", "1.0"},
          {"oracles", "1.0"},         {"experiments", "1.0"},         {"cli", "1.0"}};
}

/// Common report header: the config it was produced from, its hash, the
/// conventions in force and the module versions. No timestamps.
inline Json report_envelope(const std::string& command, const Json& config) {
  Json r;
  r["command"] = command;
  r["config"] = config;
  r["config_hash"] = fnv1a_hex(config.dump());
  r["conventions"] = conventions();
  r["module_versions"] = module_versions();
  return r;
}

}  // namespace thetalab
