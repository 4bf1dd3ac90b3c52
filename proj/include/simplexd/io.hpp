#pragma once

#include "harness.hpp"
#include "sampling.hpp"
#include "tensor.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplexd::io {

using nlohmann::json;

/// Shortest text that parses back to the same double.
inline std::string exact(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline std::string readable(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

inline json to_json(const DerivTensor& t) {
  if (t.order() == 1) return to_json(t.to_vector());
  if (t.order() == 2) return to_json(t.to_matrix());
  return json{{"dims", t.dims()}, {"data", t.data()}};
}

inline json to_json(const SamplePlan& plan) {
  json pts = json::array();
  for (const auto& p : plan.points) pts.push_back({{"x", to_json(p.coords)}, {"provenance", p.provenances}});
  return {{"scheme", plan.scheme}, {"count", plan.count()}, {"points", pts}};
}

inline json to_json(const SweepReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"h", row.h}, {"delta_u", row.delta_u}, {"error", row.error}, {"evaluations", row.evaluations},
           {"pass", row.pass}};
    j["bound"] = row.bound ? json(*row.bound) : json(nullptr);
    rows.push_back(j);
  }
  json out{{"scheme", r.scheme}, {"function", r.function}, {"rows", rows}, {"exact", r.exact}, {"all_pass", r.all_pass()}};
  out["slope"] = r.slope ? json(*r.slope) : json(nullptr);
  return out;
}

/// One point per row: index, x1..xn, canonical provenance.
inline std::string plan_csv(const SamplePlan& plan) {
  std::ostringstream os;
  const Index n = plan.points.empty() ? 0 : plan.points.front().coords.size();
  os << "index";
  for (Index i = 0; i < n; ++i) os << ",x" << (i + 1);
  os << ",provenance\n";
  for (std::size_t k = 0; k < plan.points.size(); ++k) {
    const auto& p = plan.points[k];
    os << k;
    for (Index i = 0; i < n; ++i) os << ',' << exact(p.coords(i));
    os << ",\"" << p.provenances.front() << "\"\n";
  }
  return os.str();
}

inline std::string report_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "h,delta_u,error,bound,evaluations,pass\n";
  for (const auto& row : r.rows) {
    os << exact(row.h) << ',' << exact(row.delta_u) << ',' << exact(row.error) << ','
       << (row.bound ? exact(*row.bound) : "") << ',' << row.evaluations << ',' << (row.pass ? "true" : "false")
       << '\n';
  }
  return os.str();
}

inline std::string tensor_csv(const DerivTensor& t) {
  std::ostringstream os;
  const Matrix m = t.order() == 1 ? Matrix(t.to_vector()) : t.unfold();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << exact(m(i, j));
    os << '\n';
  }
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace detail

/// Objective values replayed from a CSV table with header x1..xn,f (other
/// columns ignored).
struct EvaluationTable {
  Index n = 0;
  std::vector<std::pair<Vector, double>> rows;

  /// Loads every row into the cache.
  void fill(EvalCache& cache) const {
    for (const auto& [x, f] : rows) cache.insert(x, f);
  }
};

inline EvaluationTable parse_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("evaluation table is empty");
  const auto header = detail::split_csv_line(line);
  std::vector<int> xcol;
  int fcol = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string h = detail::trim(header[c]);
    if (h == "f") {
      fcol = static_cast<int>(c);
    } else if (h.size() > 1 && h[0] == 'x' && h.find_first_not_of("0123456789", 1) == std::string::npos) {
      const auto idx = static_cast<std::size_t>(std::stoul(h.substr(1)));
      if (idx < 1) throw std::runtime_error("evaluation table: coordinate columns start at x1");
      if (xcol.size() < idx) xcol.resize(idx, -1);
      xcol[idx - 1] = static_cast<int>(c);
    }
  }
  if (fcol < 0) throw std::runtime_error("evaluation table: missing f column");
  if (xcol.empty()) throw std::runtime_error("evaluation table: missing x1..xn columns");
  for (std::size_t i = 0; i < xcol.size(); ++i)
    if (xcol[i] < 0) throw std::runtime_error("evaluation table: missing column x" + std::to_string(i + 1));
  EvaluationTable table;
  table.n = static_cast<Index>(xcol.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    auto cell = [&](int c) -> double {
      if (c >= static_cast<int>(cells.size()))
        throw std::runtime_error("evaluation table: line " + std::to_string(lineno) + " is short");
      const std::string s = detail::trim(cells[static_cast<std::size_t>(c)]);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty() || !std::isfinite(v))
        throw std::runtime_error("evaluation table: line " + std::to_string(lineno) + " has a malformed number '" + s +
                                 "'");
      return v;
    };
    Vector x(table.n);
    for (Index i = 0; i < table.n; ++i) x(i) = cell(xcol[static_cast<std::size_t>(i)]);
    table.rows.emplace_back(std::move(x), cell(fcol));
  }
  return table;
}

inline EvaluationTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open evaluation table " + path);
  return parse_table(in);
}

}  // namespace simplexd::io
