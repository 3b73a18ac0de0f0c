#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oas/errors.hpp"

namespace oas {

// Observation matrix, row-major, one row per observation, dim in {1, 2}.
struct Data {
  int dim = 1;
  std::vector<double> values;

  long n() const { return static_cast<long>(values.size()) / dim; }
  const double* row(long i) const { return values.data() + static_cast<size_t>(i) * dim; }
  double mean(int col) const;
};

// Reads a CSV with 1 or 2 numeric columns (optional header). Rejects NaN,
// infinities and ragged rows, reporting 1-based line numbers.
Data load_data(const std::string& path);

void save_data(const Data& data, const std::string& path);

// Synthetic lookalikes of the benchmark datasets. The mixture parameters are
// fixed constants (documented in the README); changing them breaks the seeded
// regression baselines.
//   paw_like   465 bivariate points, 6 components (4 toes + 2 pad blobs)
//   univ4_like 144 univariate points, 4 components, small one on the right
Data generate_synthetic(const std::string& name, std::uint64_t seed);

// Seeded row shuffle (Fisher-Yates); the multiset of rows is preserved.
Data permute_data(const Data& data, std::uint64_t seed);

}  // namespace oas
