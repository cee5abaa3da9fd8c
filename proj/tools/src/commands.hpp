#pragma once

// Command implementations behind the gspin executable. Each command returns a
// JSON payload and, where it produces a series, CSV text for --csv.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gspin::cli {

inline constexpr int kSchemaVersion = 1;

struct CommandOutput {
  nlohmann::json parameters;
  nlohmann::json payload;
  std::string csv;
};

/// "2..10", "3", or "2,4,8" (ranges and lists may be mixed: "2..4,7").
std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

struct VerdictParams {
  std::vector<int> dims;
};
CommandOutput run_verdict(const VerdictParams& p);

struct InvariantsParams {
  std::string group = "special-orthogonal";
  int d = 3;
  int order = 3;
  std::string constraints = "none";  // none | antisymmetric-first-pair | inversion-parity, comma separated
};
CommandOutput run_invariants(const InvariantsParams& p);

struct PrecessParams {
  std::string model = "d3";  // d3 | d4
  double a = 1.0;
  double b = -1.0;
  int sign = 0;  // d3 initial state sign; 0 picks the evolving branch
  double t_max = 6.283185307179586;
  double dt = 1e-3;
  int directions = 2000;
  std::uint64_t seed = 1;
  // d4
  std::string n1 = "1,0,0,0";
  std::string n2 = "0,1,0,0";
  std::string x0 = "0,0,1,0";
  int count = 1;
  double mean_coupling = 1.0;
};
CommandOutput run_precess(const PrecessParams& p);

struct QlimitParams {
  std::string n_list = "8,16,32,64,128,256,512,1024,2048,4096";
  std::string rule = "fixed";  // fixed | constant
  double t = 1.0;
  double alpha = 0.0;
  double beta = 1.0;
  double strength = 1.0;
};
CommandOutput run_qlimit(const QlimitParams& p);

struct CoherentParams {
  double theta = 1.0471975511965976;
  int count = 10;
  int slots = 1;
  int angles = 13;
};
CommandOutput run_coherent(const CoherentParams& p);

/// {schema, command, version, seed, parameters, payload, wall_time_s}.
nlohmann::json make_envelope(std::string_view command, const CommandOutput& out, std::uint64_t seed,
                             double wall_time_s);

/// One-line error record for stderr.
nlohmann::json error_record(std::string_view kind, std::string_view message);

}  // namespace gspin::cli
