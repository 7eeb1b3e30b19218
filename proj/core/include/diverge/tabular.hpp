#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "diverge/ctm_sim.hpp"

namespace diverge {

/// %.12g
std::string format_number(double value);

/// Comma-separated writer with a fixed header.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  void row(std::initializer_list<double> values);
  /// Row whose first cells are text labels.
  void row(std::initializer_list<std::string_view> labels, std::initializer_list<double> values);

 private:
  std::ofstream out_;
};

/// step,link,cell,density,proportion. Link 0 reports xi1; links 1 and 2
/// carry a single commodity and report 1.
void write_fields(const std::filesystem::path& path, const std::vector<SimState>& snapshots);

/// step,q0,q1,q2,demand_0M,supply_11,supply_21,xi1_M,xi2_M
void write_junction_trace(const std::filesystem::path& path,
                          const std::vector<StepRecord>& records);

/// step,epsilon
void write_epsilon(const std::filesystem::path& path, const std::vector<EpsilonSample>& series);

}  // namespace diverge
