#pragma once

// One persisted sweep record and its CSV form.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

inline constexpr std::string_view kSweepCsvHeader =
    "topology,n,s,beta,trial,seed,edges,mean_degree,max_degree,diameter,"
    "diam_exact,num_cuts,half_boundary,cheeger_arc,cheeger_exact,res_p50,"
    "res_p90,res_max,tau_tv,runtime_ms";

struct SweepRow {
  Topology topology = Topology::Cycle;
  int dim = 1;
  std::uint32_t n = 0;
  double s = 0.0;
  double beta = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t edges = 0;
  double mean_degree = 0.0;
  std::uint64_t max_degree = 0;
  std::optional<std::uint64_t> diameter;
  std::optional<bool> diam_exact;
  std::optional<std::uint64_t> num_cuts;
  std::optional<std::uint64_t> half_boundary;
  std::optional<double> cheeger_arc;
  std::optional<double> cheeger_exact;
  std::optional<double> res_p50;
  std::optional<double> res_p90;
  std::optional<double> res_max;
  std::optional<std::uint64_t> tau_tv;
  bool tau_censored = false;  // written as ">cap"
  std::optional<double> runtime_ms;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string topology_label(Topology t, int dim) {
  if (t == Topology::Box) return dim == 2 ? "box2" : "box1";
  return std::string(to_string(t));
}

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw CsvError("format_double failed");
  return std::string(buf, end);
}

template <class T>
T parse_number(std::string_view cell, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw CsvError(std::string("bad value for ") + column + ": '" +
                   std::string(cell) + "'");
  return value;
}

template <class T>
std::optional<T> parse_optional(std::string_view cell, const char* column) {
  if (cell.empty()) return std::nullopt;
  return parse_number<T>(cell, column);
}

template <class T>
void put(std::ostream& os, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, double>) {
    os << format_double(*v);
  } else if constexpr (std::is_same_v<T, bool>) {
    os << (*v ? 1 : 0);
  } else {
    os << *v;
  }
}

}  // namespace detail

inline void write_row(std::ostream& os, const SweepRow& r) {
  using detail::format_double;
  using detail::put;
  os << topology_label(r.topology, r.dim) << ',' << r.n << ','
     << format_double(r.s) << ',' << format_double(r.beta) << ',' << r.trial
     << ',' << r.seed << ',' << r.edges << ',' << format_double(r.mean_degree)
     << ',' << r.max_degree << ',';
  put(os, r.diameter);
  os << ',';
  put(os, r.diam_exact);
  os << ',';
  put(os, r.num_cuts);
  os << ',';
  put(os, r.half_boundary);
  os << ',';
  put(os, r.cheeger_arc);
  os << ',';
  put(os, r.cheeger_exact);
  os << ',';
  put(os, r.res_p50);
  os << ',';
  put(os, r.res_p90);
  os << ',';
  put(os, r.res_max);
  os << ',';
  if (r.tau_tv) os << (r.tau_censored ? ">" : "") << *r.tau_tv;
  os << ',';
  put(os, r.runtime_ms);
  os << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) write_row(os, r);
}

inline SweepRow parse_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (cells.size() != 20)
    throw CsvError("expected 20 columns, got " + std::to_string(cells.size()));
  using detail::parse_number;
  using detail::parse_optional;
  SweepRow r;
  const std::string_view topo = cells[0];
  r.topology = parse_topology(topo);
  r.dim = topo == "box2" ? 2 : 1;
  r.n = parse_number<std::uint32_t>(cells[1], "n");
  r.s = parse_number<double>(cells[2], "s");
  r.beta = parse_number<double>(cells[3], "beta");
  r.trial = parse_number<std::uint64_t>(cells[4], "trial");
  r.seed = parse_number<std::uint64_t>(cells[5], "seed");
  r.edges = parse_number<std::uint64_t>(cells[6], "edges");
  r.mean_degree = parse_number<double>(cells[7], "mean_degree");
  r.max_degree = parse_number<std::uint64_t>(cells[8], "max_degree");
  r.diameter = parse_optional<std::uint64_t>(cells[9], "diameter");
  if (auto e = parse_optional<int>(cells[10], "diam_exact")) r.diam_exact = *e != 0;
  r.num_cuts = parse_optional<std::uint64_t>(cells[11], "num_cuts");
  r.half_boundary = parse_optional<std::uint64_t>(cells[12], "half_boundary");
  r.cheeger_arc = parse_optional<double>(cells[13], "cheeger_arc");
  r.cheeger_exact = parse_optional<double>(cells[14], "cheeger_exact");
  r.res_p50 = parse_optional<double>(cells[15], "res_p50");
  r.res_p90 = parse_optional<double>(cells[16], "res_p90");
  r.res_max = parse_optional<double>(cells[17], "res_max");
  std::string_view tau = cells[18];
  if (!tau.empty() && tau.front() == '>') {
    r.tau_censored = true;
    tau.remove_prefix(1);
  }
  r.tau_tv = parse_optional<std::uint64_t>(tau, "tau_tv");
  r.runtime_ms = parse_optional<double>(cells[19], "runtime_ms");
  return r;
}

inline std::vector<SweepRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw CsvError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) throw CsvError("unexpected CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(parse_row(line));
  }
  return rows;
}

/// Numeric value of a named CSV column, empty when the cell is null.
inline std::optional<double> column_value(const SweepRow& r,
                                          std::string_view column) {
  auto opt = [](const auto& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  if (column == "n") return r.n;
  if (column == "s") return r.s;
  if (column == "beta") return r.beta;
  if (column == "edges") return static_cast<double>(r.edges);
  if (column == "mean_degree") return r.mean_degree;
  if (column == "max_degree") return static_cast<double>(r.max_degree);
  if (column == "diameter") return opt(r.diameter);
  if (column == "num_cuts") return opt(r.num_cuts);
  if (column == "half_boundary") return opt(r.half_boundary);
  if (column == "cheeger_arc") return r.cheeger_arc;
  if (column == "cheeger_exact") return r.cheeger_exact;
  if (column == "res_p50") return r.res_p50;
  if (column == "res_p90") return r.res_p90;
  if (column == "res_max") return r.res_max;
  if (column == "tau_tv") return opt(r.tau_tv);
  if (column == "runtime_ms") return r.runtime_ms;
  throw std::invalid_argument("unknown column '" + std::string(column) + "'");
}

}  // namespace lrp
