#include "oas/dataio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oas/rng.hpp"

namespace oas {

double Data::mean(int col) const {
  double s = 0.0;
  for (long i = 0; i < n(); ++i) s += row(i)[col];
  return s / static_cast<double>(n());
}

namespace {

bool parse_number(const std::string& cell, double& out) {
  const char* s = cell.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  if (end == s) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  return std::isfinite(out);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

bool blank(const std::string& s) {
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Data load_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open data file: " + path);
  Data data;
  data.dim = 0;
  std::string line;
  long lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto cells = split_csv_line(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& cell : cells) {
      double x;
      if (!parse_number(cell, x)) {
        numeric = false;
        break;
      }
      row.push_back(x);
    }
    if (!numeric) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      throw data_error(path + ": non-numeric cell at line " + std::to_string(lineno));
    }
    first_content = false;
    if (data.dim == 0) {
      if (row.size() != 1 && row.size() != 2)
        throw data_error(path + ": line " + std::to_string(lineno) +
                         " has " + std::to_string(row.size()) + " columns, expected 1 or 2");
      data.dim = static_cast<int>(row.size());
    } else if (row.size() != static_cast<size_t>(data.dim)) {
      throw data_error(path + ": ragged row at line " + std::to_string(lineno));
    }
    data.values.insert(data.values.end(), row.begin(), row.end());
  }
  if (data.values.empty()) throw data_error(path + ": no observations");
  return data;
}

void save_data(const Data& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write data file: " + path);
  char buf[40];
  for (long i = 0; i < data.n(); ++i) {
    for (int c = 0; c < data.dim; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.row(i)[c]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
}

namespace {

struct MixtureComponent2 {
  double mx, my;
  double c00, c01, c11;
  long count;
};

void append_bivariate(Data& data, const MixtureComponent2& comp, Rng& rng) {
  double l00 = std::sqrt(comp.c00);
  double l10 = comp.c01 / l00;
  double l11 = std::sqrt(comp.c11 - l10 * l10);
  for (long i = 0; i < comp.count; ++i) {
    double z0 = rng.normal(), z1 = rng.normal();
    data.values.push_back(comp.mx + l00 * z0);
    data.values.push_back(comp.my + l10 * z0 + l11 * z1);
  }
}

}  // namespace

Data generate_synthetic(const std::string& name, std::uint64_t seed) {
  Rng rng(seed);
  Data data;
  if (name == "univ4_like") {
    data.dim = 1;
    const double means[4] = {-5.0, -1.0, 3.0, 8.0};
    const double sds[4] = {1.0, 0.8, 1.2, 0.5};
    const long counts[4] = {50, 44, 38, 12};  // small component on the right
    for (int c = 0; c < 4; ++c)
      for (long i = 0; i < counts[c]; ++i)
        data.values.push_back(means[c] + sds[c] * rng.normal());
    return data;
  }
  if (name == "paw_like") {
    data.dim = 2;
    // Four toes across the top, two blobs forming the pad. Compact,
    // moderately separated clusters.
    const MixtureComponent2 comps[6] = {
        {-2.4, 1.6, 0.14, 0.0, 0.14, 45},
        {-0.9, 2.4, 0.14, 0.0, 0.14, 45},
        {0.9, 2.4, 0.14, 0.0, 0.14, 45},
        {2.4, 1.6, 0.14, 0.0, 0.14, 45},
        {0.0, -0.2, 0.8, 0.0, 0.5, 160},
        {0.0, -1.8, 1.1, 0.15, 0.35, 125},
    };
    for (const auto& comp : comps) append_bivariate(data, comp, rng);
    return data;
  }
  throw data_error("unknown synthetic dataset: " + name);
}

Data permute_data(const Data& data, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<long> order(static_cast<size_t>(data.n()));
  for (long i = 0; i < data.n(); ++i) order[static_cast<size_t>(i)] = i;
  for (long i = data.n() - 1; i > 0; --i) {
    auto j = static_cast<long>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  Data out;
  out.dim = data.dim;
  out.values.reserve(data.values.size());
  for (long i : order) {
    const double* r = data.row(i);
    out.values.insert(out.values.end(), r, r + data.dim);
  }
  return out;
}

}  // namespace oas
