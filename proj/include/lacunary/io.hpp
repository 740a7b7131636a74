#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lacunary/block_schedule.hpp"
#include "lacunary/gap_walk.hpp"
#include "lacunary/limit_lab.hpp"
#include "lacunary/periodic_fn.hpp"
#include "lacunary/variance_ax.hpp"

namespace lacunary {

using Json = nlohmann::json;

/// {"type":"trig","cos":[...],"sin":[...]} or {"type":"sampled","values":[...]}.
ShapeFunction parse_function(const Json& node);
Json to_json(const ShapeFunction& f);

/// {"kind":"uniform","a":..,"b":..}, {"kind":"triangular","a":..,"c":..,"b":..}
/// or {"kind":"raised-cosine","a":..,"b":..}.
GapDistribution parse_gap_law(const Json& node);
Json to_json(const GapDistribution& dist);

Json to_json(const VarianceReport& report);
Json to_json(const TestReport& report);
Json to_json(const DecayFit& fit);

/// Fixed 17-significant-digit rendering used for every CSV cell.
std::string format_number(double value);

/// Minimal CSV builder: header once, then rows of numbers.
class CsvTable {
public:
  explicit CsvTable(std::initializer_list<std::string_view> header);

  void add_row(std::initializer_list<double> cells);
  void add_row(const std::vector<double>& cells);
  const std::string& str() const noexcept { return text_; }

private:
  std::size_t columns_;
  std::string text_;
};

std::string mod1_density_csv(const Mod1Density& p);
std::string decay_csv(const DecayFit& fit);
std::string schedule_csv(const BlockSchedule& schedule);
/// Columns N, partialSum, runningMaxAbs, lilStat, chungStat for checkpoints
/// with N >= 16.
std::string checkpoints_csv(const TrajectoryCheckpoints& traj);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace lacunary
