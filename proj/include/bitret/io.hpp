#pragma once

#include "bitret/core.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bitret {

// Malformed instance file or schema violation. `line` is 1-based; 0 when the
// problem cannot be tied to a line.
class InstanceFormatError : public std::runtime_error {
 public:
  InstanceFormatError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

inline constexpr int kInstanceFileVersion = 1;

// JSON layout, version 1:
//   {"version": 1, "n": N, "kind": "exact"|"noisy"|"fixed_precision",
//    "autocorrelation": [...]            (exact, noisy)
//    "sq_magnitudes": [...], "eta": x    (fixed_precision)
//    "solution": [+-1, ...]              (optional)
//    "meta": {"generator", "seed", "hardness", "delta", "mu", "rng_id", "raw"}}
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

struct BenchRecord {
  int n = 0;
  std::string instance_id;
  std::string algo;
  std::uint64_t seed = 0;
  std::optional<double> beta;
  std::optional<int> p_bits;
  std::uint64_t iterations_or_nodes = 0;
  bool solved = false;
  std::optional<double> wall_ms;
};

inline constexpr const char* kBenchHeader = "n,instance_id,algo,seed,beta,p_bits,iterations_or_nodes,solved,wall_ms";

// Shortest round-trip decimal form.
std::string format_double(double v);
std::string to_csv_row(const BenchRecord& record);
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace bitret
