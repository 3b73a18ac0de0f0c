#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oas/components.hpp"

namespace oas {

// Number of components attached to a trace record: a finite value, the
// infinite marker, or absent (samplers that integrate m out).
struct MValue {
  enum class Kind { finite, infinite, absent };
  Kind kind = Kind::absent;
  long value = 0;

  static MValue finite(long v) { return {Kind::finite, v}; }
  static MValue inf() { return {Kind::infinite, 0}; }
  static MValue none() { return {Kind::absent, 0}; }
  bool operator==(const MValue&) const = default;
};

// One kept iteration: occupancy, deviance and the realized weights/atoms in
// order of appearance (recorded up to max(k_n, 8) entries).
struct TraceRecord {
  long iteration = 0;
  int k_n = 0;
  MValue m;
  double deviance = 0.0;
  std::vector<long> counts;            // n_1..n_{k_n}
  std::vector<double> weights;         // may be empty (marginal sampler)
  std::vector<ComponentParams> atoms;  // same length as weights when present
};

struct ChainTrace {
  std::string sampler;
  std::string prior;
  std::uint64_t seed = 0;
  long n = 0;
  int dim = 1;
  std::vector<TraceRecord> records;
};

void write_trace_csv(const ChainTrace& trace, const std::string& path);
ChainTrace read_trace_csv(const std::string& path);

}  // namespace oas
