#include "lacunary/io.hpp"

#include <cstdio>
#include <fstream>

#include "lacunary/error.hpp"

namespace lacunary {
namespace {

double number_field(const Json& node, const char* key) {
  const auto it = node.find(key);
  if (it == node.end() || !it->is_number()) {
    throw InvalidInput(std::string("expected numeric field '") + key + "'");
  }
  return it->get<double>();
}

std::vector<double> number_array(const Json& node, const char* key, bool required) {
  const auto it = node.find(key);
  if (it == node.end()) {
    if (required) throw InvalidInput(std::string("expected array field '") + key + "'");
    return {};
  }
  if (!it->is_array()) {
    throw InvalidInput(std::string("field '") + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) {
      throw InvalidInput(std::string("field '") + key + "' must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

ShapeFunction parse_function(const Json& node) {
  if (!node.is_object() || !node.contains("type") || !node["type"].is_string()) {
    throw InvalidInput("function entry needs a string 'type'");
  }
  const auto type = node["type"].get<std::string>();
  if (type == "trig") {
    auto cos_coeffs = number_array(node, "cos", false);
    auto sin_coeffs = number_array(node, "sin", false);
    if (cos_coeffs.empty() && sin_coeffs.empty()) {
      throw InvalidInput("trig function needs 'cos' or 'sin' coefficients");
    }
    return TrigPolynomial(std::move(cos_coeffs), std::move(sin_coeffs));
  }
  if (type == "sampled") {
    return mean_zero_project(number_array(node, "values", true));
  }
  throw InvalidInput("unknown function type '" + type + "'");
}

Json to_json(const ShapeFunction& f) {
  if (const auto* trig = std::get_if<TrigPolynomial>(&f)) {
    return {{"type", "trig"},
            {"cos", std::vector<double>(trig->cos_coeffs().begin(), trig->cos_coeffs().end())},
            {"sin", std::vector<double>(trig->sin_coeffs().begin(), trig->sin_coeffs().end())}};
  }
  const auto& sampled = std::get<SampledLipschitz>(f);
  return {{"type", "sampled"}, {"values", std::vector<double>(sampled.values().begin(), sampled.values().end())}};
}

GapDistribution parse_gap_law(const Json& node) {
  if (!node.is_object() || !node.contains("kind") || !node["kind"].is_string()) {
    throw InvalidInput("gap law entry needs a string 'kind'");
  }
  const auto kind = node["kind"].get<std::string>();
  if (kind == "uniform") {
    return GapDistribution::uniform(number_field(node, "a"), number_field(node, "b"));
  }
  if (kind == "triangular") {
    return GapDistribution::triangular(number_field(node, "a"), number_field(node, "c"), number_field(node, "b"));
  }
  if (kind == "raised-cosine") {
    return GapDistribution::raised_cosine(number_field(node, "a"), number_field(node, "b"));
  }
  throw InvalidInput("unknown gap law kind '" + kind + "'");
}

Json to_json(const GapDistribution& dist) {
  switch (dist.kind()) {
    case GapKind::Uniform:
      return {{"kind", "uniform"}, {"a", dist.lower()}, {"b", dist.upper()}};
    case GapKind::Triangular:
      return {{"kind", "triangular"}, {"a", dist.lower()}, {"c", dist.mode()}, {"b", dist.upper()}};
    case GapKind::RaisedCosine:
      return {{"kind", "raised-cosine"}, {"a", dist.lower()}, {"b", dist.upper()}};
  }
  return {};
}

Json to_json(const VarianceReport& r) {
  return {{"closedForm", optional_number(r.closed_form)},
          {"seriesTruncated", r.series_truncated},
          {"seriesTailBound", optional_number(r.series_tail_bound)},
          {"monteCarlo", r.monte_carlo},
          {"monteCarloStdErr", r.monte_carlo_std_err},
          {"truncationK", r.truncation_k}};
}

Json to_json(const TestReport& r) {
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  Json band = r.band ? Json::array({r.band->first, r.band->second}) : Json(nullptr);
  return {{"name", r.name},
          {"statistic", r.statistic},
          {"pValue", optional_number(r.p_value)},
          {"band", band},
          {"sampleSize", r.sample_size},
          {"verdict", to_string(r.verdict)},
          {"details", details}};
}

Json to_json(const DecayFit& fit) {
  Json points = Json::array();
  for (const auto& p : fit.points) points.push_back({{"n", p.n}, {"gap", p.gap}});
  return {{"C", fit.c}, {"w", fit.w}, {"rSquared", fit.r_squared}, {"envelopeC", fit.envelope_c}, {"points", points}};
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvTable::CsvTable(std::initializer_list<std::string_view> header) : columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    if (!first) text_ += ',';
    text_ += h;
    first = false;
  }
  text_ += '\n';
}

void CsvTable::add_row(std::initializer_list<double> cells) { add_row(std::vector<double>(cells)); }

void CsvTable::add_row(const std::vector<double>& cells) {
  if (cells.size() != columns_) {
    throw InvalidInput("CSV row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += format_number(cells[i]);
  }
  text_ += '\n';
}

std::string mod1_density_csv(const Mod1Density& p) {
  CsvTable table({"bin", "value"});
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    table.add_row({static_cast<double>(j), p.values[j]});
  }
  return table.str();
}

std::string decay_csv(const DecayFit& fit) {
  CsvTable table({"n", "gap"});
  for (const auto& p : fit.points) table.add_row({static_cast<double>(p.n), p.gap});
  return table.str();
}

std::string schedule_csv(const BlockSchedule& s) {
  CsvTable table({"k", "mTilde", "mHat", "m", "longStart", "longEnd", "shortStart", "shortEnd"});
  for (std::uint64_t k = 1; k <= s.blocks; ++k) {
    const auto& lr = s.long_ranges[k - 1];
    const auto& sr = s.short_ranges[k - 1];
    table.add_row({static_cast<double>(k), static_cast<double>(s.m_tilde[k]), static_cast<double>(s.m_hat[k]),
                   static_cast<double>(s.m[k]), static_cast<double>(lr.first), static_cast<double>(lr.last),
                   static_cast<double>(sr.first), static_cast<double>(sr.last)});
  }
  return table.str();
}

std::string checkpoints_csv(const TrajectoryCheckpoints& traj) {
  const auto lil = lil_statistic(traj);
  const auto chung = chung_statistic(traj);
  CsvTable table({"N", "partialSum", "runningMaxAbs", "lilStat", "chungStat"});
  std::size_t j = 0;
  for (std::size_t i = 0; i < traj.checkpoints.size(); ++i) {
    if (j >= lil.checkpoints.size() || traj.checkpoints[i] != lil.checkpoints[j]) continue;
    table.add_row({static_cast<double>(traj.checkpoints[i]), traj.partial_sums[i], traj.running_max_abs[i],
                   lil.value[j], chung.value[j]});
    ++j;
  }
  return table.str();
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("io", "cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw Error("io", "write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lacunary
