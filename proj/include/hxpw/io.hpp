#pragma once

// Table, graph6 and CSV output.

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hxpw/scheme.hpp"
#include "json.hpp"

namespace hxpw {

/// graph6 encoding of the graph whose edges are the pairs in `classes`.
inline std::string graph6(const RelationTable& t, const std::vector<int>& classes) {
  const BitRows g = class_graph(t, classes);
  const std::size_t n = t.n();
  if (n >= 258048) throw std::invalid_argument("graph6: more than 258047 vertices");
  std::string out;
  if (n < 63) {
    out.push_back(static_cast<char>(n + 63));
  } else {
    out.push_back(126);
    for (int shift : {12, 6, 0}) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  }
  int acc = 0, bits = 0;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.test(i, j) ? 1 : 0);
      if (++bits == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = bits = 0;
      }
    }
  if (bits) out.push_back(static_cast<char>((acc << (6 - bits)) + 63));
  out.push_back('\n');
  return out;
}

/// Number of edges the class union would have; zero means nothing to export.
inline std::uint64_t union_pair_count(const RelationTable& t, const std::vector<int>& classes) {
  const auto c = t.class_pair_counts();
  std::uint64_t total = 0;
  for (int k : classes) {
    if (k < 1 || k > t.d()) throw std::invalid_argument("class " + std::to_string(k) + " out of range");
    total += c[k];
  }
  return total;
}

inline void write_rat_csv(std::ostream& os, const RatMatrix& m) {
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << rat_str(row[j]);
    os << '\n';
  }
}

inline void write_table_csv(std::ostream& os, const RelationTable& t, const nlohmann::json& header) {
  for (auto it = header.begin(); it != header.end(); ++it) os << "# " << it.key() << '=' << it.value().dump() << '\n';
  for (std::size_t x = 0; x < t.n(); ++x) {
    for (std::size_t y = 0; y < t.n(); ++y) os << (y ? "," : "") << int(t(x, y));
    os << '\n';
  }
}

inline nlohmann::json table_json(const RelationTable& t, const nlohmann::json& header) {
  nlohmann::json j;
  j["header"] = header;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t x = 0; x < t.n(); ++x) {
    std::vector<int> r(t.n());
    for (std::size_t y = 0; y < t.n(); ++y) r[y] = t(x, y);
    rows.push_back(r);
  }
  j["table"] = rows;
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

/// Writes prefix.P.csv, prefix.Q.csv, prefix.krein.csv and
/// prefix.pnumbers.csv; returns the paths written.
inline std::vector<std::string> write_analytics_csv(const std::string& prefix, const SchemeAnalytics& a,
                                                    const Eigenmatrices& e, const KreinReport& kr) {
  std::vector<std::string> paths;
  auto emit = [&](const std::string& suffix, auto&& body) {
    std::ostringstream os;
    body(os);
    const std::string p = prefix + suffix;
    write_file(p, os.str());
    paths.push_back(p);
  };
  emit(".P.csv", [&](std::ostream& os) { write_rat_csv(os, e.P); });
  emit(".Q.csv", [&](std::ostream& os) { write_rat_csv(os, e.Q); });
  emit(".krein.csv", [&](std::ostream& os) {
    os << "k,i,j,value\n";
    for (int k = 0; k <= a.d; ++k)
      for (int i = 0; i <= a.d; ++i)
        for (int j = 0; j <= a.d; ++j) os << k << ',' << i << ',' << j << ',' << rat_str(kr.q[k][i][j]) << '\n';
  });
  emit(".pnumbers.csv", [&](std::ostream& os) {
    os << "k,i,j,value\n";
    for (int k = 0; k <= a.d; ++k)
      for (int i = 0; i <= a.d; ++i)
        for (int j = 0; j <= a.d; ++j) os << k << ',' << i << ',' << j << ',' << a.p[k][i][j] << '\n';
  });
  return paths;
}

}  // namespace hxpw
