#include "diverge/tabular.hpp"

#include <cstdio>

#include "diverge/errors.hpp"

namespace diverge {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
    : out_(path) {
  if (!out_) throw ArgumentError("cannot write " + path.string());
  bool first = true;
  for (auto h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row({}, values); }

void CsvWriter::row(std::initializer_list<std::string_view> labels,
                    std::initializer_list<double> values) {
  bool first = true;
  for (auto l : labels) {
    out_ << (first ? "" : ",") << l;
    first = false;
  }
  for (double v : values) {
    out_ << (first ? "" : ",") << format_number(v);
    first = false;
  }
  out_ << '\n';
}

void write_fields(const std::filesystem::path& path, const std::vector<SimState>& snapshots) {
  CsvWriter csv(path, {"step", "link", "cell", "density", "proportion"});
  for (const SimState& s : snapshots) {
    for (int i = 0; i < 3; ++i) {
      for (std::size_t c = 0; c < s.density[i].size(); ++c) {
        const double xi = i == 0 ? s.proportion[0][c] : 1.0;
        csv.row({static_cast<double>(s.step_index), static_cast<double>(i),
                 static_cast<double>(c + 1), s.density[i][c], xi});
      }
    }
  }
}

void write_junction_trace(const std::filesystem::path& path,
                          const std::vector<StepRecord>& records) {
  CsvWriter csv(path, {"step", "q0", "q1", "q2", "demand_0M", "supply_11", "supply_21",
                       "xi1_M", "xi2_M"});
  for (const StepRecord& r : records) {
    csv.row({static_cast<double>(r.step), r.junction.q0, r.junction.q1, r.junction.q2,
             r.demand_up, r.supply_1, r.supply_2, r.xi_last[0], r.xi_last[1]});
  }
}

void write_epsilon(const std::filesystem::path& path, const std::vector<EpsilonSample>& series) {
  CsvWriter csv(path, {"step", "epsilon"});
  for (const EpsilonSample& e : series) csv.row({static_cast<double>(e.step), e.epsilon});
}

}  // namespace diverge
