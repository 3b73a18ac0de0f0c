#include "oas/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oas/errors.hpp"

namespace oas {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string encode_counts(const std::vector<long>& counts) {
  std::string out;
  for (size_t j = 0; j < counts.size(); ++j) {
    if (j) out.push_back(' ');
    out += std::to_string(j + 1) + ":" + std::to_string(counts[j]);
  }
  return out;
}

std::string encode_weights(const std::vector<double>& w) {
  std::string out;
  for (size_t j = 0; j < w.size(); ++j) {
    if (j) out.push_back(' ');
    out += std::to_string(j + 1) + ":" + fmt(w[j]);
  }
  return out;
}

std::string encode_atoms(const std::vector<ComponentParams>& atoms) {
  std::string out;
  for (size_t j = 0; j < atoms.size(); ++j) {
    if (j) out.push_back(' ');
    const auto& a = atoms[j];
    out += std::to_string(j + 1) + ":";
    if (a.dim == 1) {
      out += fmt(a.mu.x0) + "," + fmt(a.cov.a00);
    } else {
      out += fmt(a.mu.x0) + "," + fmt(a.mu.x1) + "," + fmt(a.cov.a00) + "," + fmt(a.cov.a01) +
             "," + fmt(a.cov.a11);
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// Splits one CSV line honoring double-quoted cells.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw data_error(std::string("trace: bad ") + what + ": " + s);
  return x;
}

}  // namespace

void write_trace_csv(const ChainTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write trace: " + path);
  out << "# oas-trace v1\n";
  out << "# sampler=" << trace.sampler << "\n";
  out << "# prior=" << trace.prior << "\n";
  out << "# seed=" << trace.seed << "\n";
  out << "# n=" << trace.n << "\n";
  out << "# dim=" << trace.dim << "\n";
  out << "iteration,k_n,m,deviance,counts,weights,atoms\n";
  for (const auto& rec : trace.records) {
    out << rec.iteration << "," << rec.k_n << ",";
    switch (rec.m.kind) {
      case MValue::Kind::finite: out << rec.m.value; break;
      case MValue::Kind::infinite: out << "inf"; break;
      case MValue::Kind::absent: break;
    }
    out << "," << fmt(rec.deviance);
    out << ",\"" << encode_counts(rec.counts) << "\"";
    out << ",\"" << encode_weights(rec.weights) << "\"";
    out << ",\"" << encode_atoms(rec.atoms) << "\"\n";
  }
}

ChainTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open trace: " + path);
  ChainTrace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(2, eq - 2);
      std::string value = line.substr(eq + 1);
      if (!value.empty() && value.back() == '\r') value.pop_back();
      if (key == "sampler") trace.sampler = value;
      else if (key == "prior") trace.prior = value;
      else if (key == "seed") trace.seed = std::strtoull(value.c_str(), nullptr, 10);
      else if (key == "n") trace.n = std::strtol(value.c_str(), nullptr, 10);
      else if (key == "dim") trace.dim = static_cast<int>(std::strtol(value.c_str(), nullptr, 10));
      continue;
    }
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() != 7) throw data_error("trace: expected 7 cells, got " + std::to_string(cells.size()));
    TraceRecord rec;
    rec.iteration = std::strtol(cells[0].c_str(), nullptr, 10);
    rec.k_n = static_cast<int>(std::strtol(cells[1].c_str(), nullptr, 10));
    if (cells[2].empty()) rec.m = MValue::none();
    else if (cells[2] == "inf") rec.m = MValue::inf();
    else rec.m = MValue::finite(std::strtol(cells[2].c_str(), nullptr, 10));
    rec.deviance = parse_double(cells[3], "deviance");
    for (const auto& tok : split(cells[4], ' ')) {
      if (tok.empty()) continue;
      auto kv = split(tok, ':');
      rec.counts.push_back(std::strtol(kv[1].c_str(), nullptr, 10));
    }
    for (const auto& tok : split(cells[5], ' ')) {
      if (tok.empty()) continue;
      auto kv = split(tok, ':');
      rec.weights.push_back(parse_double(kv[1], "weight"));
    }
    for (const auto& tok : split(cells[6], ' ')) {
      if (tok.empty()) continue;
      auto kv = split(tok, ':');
      auto parts = split(kv[1], ',');
      ComponentParams a;
      if (parts.size() == 2) {
        a.dim = 1;
        a.mu.x0 = parse_double(parts[0], "atom");
        a.cov.a00 = parse_double(parts[1], "atom");
        a.cov.a01 = a.cov.a11 = 0.0;
      } else if (parts.size() == 5) {
        a.dim = 2;
        a.mu.x0 = parse_double(parts[0], "atom");
        a.mu.x1 = parse_double(parts[1], "atom");
        a.cov.a00 = parse_double(parts[2], "atom");
        a.cov.a01 = parse_double(parts[3], "atom");
        a.cov.a11 = parse_double(parts[4], "atom");
      } else {
        throw data_error("trace: atom cell with " + std::to_string(parts.size()) + " fields");
      }
      rec.atoms.push_back(a);
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace oas
