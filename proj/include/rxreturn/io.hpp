// Copyright 2026 The rxreturn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Instance files.
//
//   sites.csv       id,name,fixed_cost,capacity[,lat,lon]
//   zones.csv       id,name
//   profiles.csv    id,descriptor,reserve_<level>...   (one column per level)
//   quantities.csv  zone_id,profile_id,pills           (absent pairs are 0)
//   distances.csv   site_id,zone_id,<units>            units: miles | cost_dollars
//   scenario.json   theta, incentive_level, penalty_per_prescription,
//                   pills_per_prescription, mileage_rate, max_distance{level: mi}
//
// A distances file in cost_dollars is converted to miles on load by dividing
// by the scenario's mileage rate. CSV fields may be double-quoted (RFC 4180).

#ifndef RXRETURN_IO_HPP_
#define RXRETURN_IO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rxreturn/error.hpp"
#include "rxreturn/model.hpp"

namespace rxreturn {

struct InstanceFiles {
  std::filesystem::path sites;
  std::filesystem::path zones;
  std::filesystem::path profiles;
  std::filesystem::path quantities;
  std::filesystem::path distances;
  std::filesystem::path scenario;

  static InstanceFiles in_directory(const std::filesystem::path& dir) {
    return {dir / "sites.csv",      dir / "zones.csv",
            dir / "profiles.csv",   dir / "quantities.csv",
            dir / "distances.csv",  dir / "scenario.json"};
  }
};

namespace csv {

using Record = std::vector<std::string>;

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Splits one line. Quoted fields may contain commas and doubled quotes.
inline Record split_line(std::string_view line) {
  Record out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (ch == ',') {
      out.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else if (!was_quoted) {
      field.push_back(ch);
    }
  }
  out.push_back(was_quoted ? field : std::string(trim(field)));
  return out;
}

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos &&
      trim(field) == field) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

struct Table {
  std::filesystem::path source;
  Record header;
  std::vector<Record> rows;

  std::size_t column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::MissingColumn, source.filename().string() +
                                                ": missing column '" +
                                                std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
  bool has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
  }
};

inline Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  }
  Table table;
  table.source = path;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto rec = split_line(line);
    if (!have_header) {
      table.header = std::move(rec);
      have_header = true;
      continue;
    }
    if (rec.size() < table.header.size()) rec.resize(table.header.size());
    table.rows.push_back(std::move(rec));
  }
  if (!have_header) {
    throw Error(ErrorCode::MissingColumn, path.string() + ": empty file");
  }
  return table;
}

}  // namespace csv

namespace detail {

inline double parse_number(std::string_view text, const std::string& what) {
  text = csv::trim(text);
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::InvalidValue,
                what + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

// Shortest decimal text that reads back to the same double.
inline std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

inline std::map<std::string, std::size_t> index_ids(
    const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> out;
  for (std::size_t k = 0; k < ids.size(); ++k) out.emplace(ids[k], k);
  return out;
}

inline std::size_t lookup(const std::map<std::string, std::size_t>& index,
                          const std::string& id, const char* what,
                          const std::filesystem::path& file) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw Error(ErrorCode::UnknownId, file.filename().string() + ": " + what +
                                          " '" + id + "' is not declared");
  }
  return it->second;
}

}  // namespace detail

struct ScenarioFile {
  ScenarioParams scenario;
  IncentiveLevelPolicy policy;
};

inline ScenarioFile parse_scenario(const nlohmann::json& j) {
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) {
      throw Error(ErrorCode::MissingColumn,
                  std::string("scenario.json: missing field '") + key + "'");
    }
    return j.at(key);
  };
  auto number = [&](const char* key) {
    const auto& v = field(key);
    if (!v.is_number()) {
      throw Error(ErrorCode::InvalidValue,
                  std::string("scenario.json: '") + key + "' must be a number");
    }
    return v.get<double>();
  };

  ScenarioFile out;
  out.scenario.theta = number("theta");
  const auto& level = field("incentive_level");
  if (!level.is_string()) {
    throw Error(ErrorCode::InvalidValue,
                "scenario.json: 'incentive_level' must be a string");
  }
  out.scenario.incentive_level = level.get<std::string>();
  out.scenario.penalty_per_prescription = number("penalty_per_prescription");
  out.scenario.pills_per_prescription = number("pills_per_prescription");
  out.scenario.mileage_rate = number("mileage_rate");

  const auto& radii = field("max_distance");
  if (!radii.is_object() || radii.empty()) {
    throw Error(ErrorCode::InvalidValue,
                "scenario.json: 'max_distance' must be a non-empty object");
  }
  std::vector<std::pair<double, std::string>> levels;
  for (auto it = radii.begin(); it != radii.end(); ++it) {
    if (!it.value().is_number()) {
      throw Error(ErrorCode::InvalidValue,
                  "scenario.json: max_distance." + it.key() + " must be a number");
    }
    levels.emplace_back(it.value().get<double>(), it.key());
  }
  // Levels are ordered by willingness radius, lowest first.
  std::sort(levels.begin(), levels.end());
  for (auto& [radius, name] : levels) {
    out.policy.levels.push_back(name);
    out.policy.max_distance.push_back(radius);
  }
  validate_policy(out.policy);
  validate_scenario(out.scenario, out.policy);
  return out;
}

inline nlohmann::json scenario_to_json(const ScenarioParams& s,
                                       const IncentiveLevelPolicy& policy) {
  nlohmann::json radii = nlohmann::json::object();
  for (std::size_t k = 0; k < policy.levels.size(); ++k) {
    radii[policy.levels[k]] = policy.max_distance[k];
  }
  return {{"theta", s.theta},
          {"incentive_level", s.incentive_level},
          {"penalty_per_prescription", s.penalty_per_prescription},
          {"pills_per_prescription", s.pills_per_prescription},
          {"mileage_rate", s.mileage_rate},
          {"max_distance", radii}};
}

inline ScenarioFile read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidValue,
                path.filename().string() + ": " + e.what());
  }
  return parse_scenario(j);
}

inline Instance load_instance(const InstanceFiles& files) {
  for (const auto* p : {&files.sites, &files.zones, &files.profiles,
                        &files.quantities, &files.distances, &files.scenario}) {
    if (!std::filesystem::exists(*p)) {
      throw Error(ErrorCode::MissingFile, p->string() + " does not exist");
    }
  }

  Instance inst;
  auto sf = read_scenario(files.scenario);
  inst.scenario = sf.scenario;
  inst.level_policy = sf.policy;

  {
    auto t = csv::read(files.sites);
    const auto c_id = t.column("id");
    const auto c_name = t.column("name");
    const auto c_cost = t.column("fixed_cost");
    const auto c_cap = t.column("capacity");
    const bool has_pos = t.has_column("lat") && t.has_column("lon");
    const auto c_lat = has_pos ? t.column("lat") : 0;
    const auto c_lon = has_pos ? t.column("lon") : 0;
    for (const auto& r : t.rows) {
      KioskSite s;
      s.id = r[c_id];
      s.name = r[c_name];
      s.fixed_cost = detail::parse_number(r[c_cost], "sites.csv fixed_cost");
      s.capacity = detail::parse_number(r[c_cap], "sites.csv capacity");
      if (has_pos && !r[c_lat].empty() && !r[c_lon].empty()) {
        s.position = std::make_pair(
            detail::parse_number(r[c_lat], "sites.csv lat"),
            detail::parse_number(r[c_lon], "sites.csv lon"));
      }
      inst.sites.push_back(std::move(s));
    }
  }
  {
    auto t = csv::read(files.zones);
    const auto c_id = t.column("id");
    const auto c_name = t.column("name");
    for (const auto& r : t.rows) inst.zones.push_back({r[c_id], r[c_name]});
  }
  {
    auto t = csv::read(files.profiles);
    const auto c_id = t.column("id");
    const auto c_desc = t.column("descriptor");
    std::vector<std::size_t> c_levels;
    for (const auto& level : inst.level_policy.levels) {
      c_levels.push_back(t.column("reserve_" + level));
    }
    for (const auto& r : t.rows) {
      Profile p;
      p.id = r[c_id];
      p.descriptor = r[c_desc];
      for (auto c : c_levels) {
        p.reservation_incentive.push_back(
            detail::parse_number(r[c], "profiles.csv " + t.header[c]));
      }
      inst.profiles.push_back(std::move(p));
    }
  }

  // Ids must be unique before they can be used as keys below.
  std::vector<std::string> site_ids, zone_ids, profile_ids;
  for (const auto& s : inst.sites) site_ids.push_back(s.id);
  for (const auto& z : inst.zones) zone_ids.push_back(z.id);
  for (const auto& p : inst.profiles) profile_ids.push_back(p.id);
  detail::require_unique(site_ids, "site");
  detail::require_unique(zone_ids, "zone");
  detail::require_unique(profile_ids, "profile");
  const auto site_index = detail::index_ids(site_ids);
  const auto zone_index = detail::index_ids(zone_ids);
  const auto profile_index = detail::index_ids(profile_ids);

  {
    auto t = csv::read(files.quantities);
    const auto c_zone = t.column("zone_id");
    const auto c_profile = t.column("profile_id");
    const auto c_pills = t.column("pills");
    inst.unused_quantity = Grid2<double>(zone_ids.size(), profile_ids.size());
    Grid2<unsigned char> seen(zone_ids.size(), profile_ids.size(), 0);
    for (const auto& r : t.rows) {
      const auto j = detail::lookup(zone_index, r[c_zone], "zone", t.source);
      const auto p =
          detail::lookup(profile_index, r[c_profile], "profile", t.source);
      if (seen(j, p)) {
        throw Error(ErrorCode::DuplicateId, "quantities.csv: duplicate entry (" +
                                                r[c_zone] + ", " +
                                                r[c_profile] + ")");
      }
      seen(j, p) = 1;
      const double q = detail::parse_number(r[c_pills], "quantities.csv pills");
      detail::require_nonnegative(q, "quantities.csv pills for (" + r[c_zone] +
                                         ", " + r[c_profile] + ")");
      inst.unused_quantity(j, p) = q;
    }
  }
  {
    auto t = csv::read(files.distances);
    if (t.header.size() < 3 ||
        (t.header[2] != "miles" && t.header[2] != "cost_dollars")) {
      throw Error(ErrorCode::UnitMismatch,
                  "distances.csv: third header column must declare units "
                  "(miles | cost_dollars)");
    }
    const bool in_dollars = t.header[2] == "cost_dollars";
    if (in_dollars && !(inst.scenario.mileage_rate > 0.0)) {
      throw Error(ErrorCode::UnitMismatch,
                  "distances.csv is in cost_dollars but mileage_rate is 0");
    }
    const auto c_site = t.column("site_id");
    const auto c_zone = t.column("zone_id");
    inst.distance = Grid2<double>(site_ids.size(), zone_ids.size(),
                                  std::numeric_limits<double>::quiet_NaN());
    for (const auto& r : t.rows) {
      const auto i = detail::lookup(site_index, r[c_site], "site", t.source);
      const auto j = detail::lookup(zone_index, r[c_zone], "zone", t.source);
      if (!std::isnan(inst.distance(i, j))) {
        throw Error(ErrorCode::DuplicateId, "distances.csv: duplicate entry (" +
                                                r[c_site] + ", " + r[c_zone] +
                                                ")");
      }
      double v = detail::parse_number(r[2], "distances.csv value");
      detail::require_nonnegative(v, "distances.csv value for (" + r[c_site] +
                                         ", " + r[c_zone] + ")");
      if (in_dollars) v /= inst.scenario.mileage_rate;
      inst.distance(i, j) = v;
    }
  }

  validate(inst);
  if (!(total_unused(inst) > 0.0)) {
    throw Error(ErrorCode::InvalidValue,
                "quantities.csv: total unused quantity must be positive");
  }
  return inst;
}

// Writes the instance back out (distances in miles). Loading the result
// reproduces an Instance equal to `inst`.
inline void write_instance(const std::filesystem::path& dir,
                           const Instance& inst) {
  std::filesystem::create_directories(dir);
  const auto files = InstanceFiles::in_directory(dir);
  using detail::format_number;

  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + p.string());
    return out;
  };

  {
    auto out = open(files.sites);
    const bool has_pos = std::any_of(inst.sites.begin(), inst.sites.end(),
                                     [](const auto& s) { return s.position.has_value(); });
    out << "id,name,fixed_cost,capacity" << (has_pos ? ",lat,lon" : "") << '\n';
    for (const auto& s : inst.sites) {
      out << csv::quote(s.id) << ',' << csv::quote(s.name) << ','
          << format_number(s.fixed_cost) << ',' << format_number(s.capacity);
      if (has_pos) {
        if (s.position) {
          out << ',' << format_number(s.position->first) << ','
              << format_number(s.position->second);
        } else {
          out << ",,";
        }
      }
      out << '\n';
    }
  }
  {
    auto out = open(files.zones);
    out << "id,name\n";
    for (const auto& z : inst.zones) {
      out << csv::quote(z.id) << ',' << csv::quote(z.name) << '\n';
    }
  }
  {
    auto out = open(files.profiles);
    out << "id,descriptor";
    for (const auto& level : inst.level_policy.levels) out << ",reserve_" << level;
    out << '\n';
    for (const auto& p : inst.profiles) {
      out << csv::quote(p.id) << ',' << csv::quote(p.descriptor);
      for (double a : p.reservation_incentive) out << ',' << format_number(a);
      out << '\n';
    }
  }
  {
    auto out = open(files.quantities);
    out << "zone_id,profile_id,pills\n";
    for (std::size_t j = 0; j < inst.num_zones(); ++j) {
      for (std::size_t p = 0; p < inst.num_profiles(); ++p) {
        out << csv::quote(inst.zones[j].id) << ','
            << csv::quote(inst.profiles[p].id) << ','
            << format_number(inst.unused_quantity(j, p)) << '\n';
      }
    }
  }
  {
    auto out = open(files.distances);
    out << "site_id,zone_id,miles\n";
    for (std::size_t i = 0; i < inst.num_sites(); ++i) {
      for (std::size_t j = 0; j < inst.num_zones(); ++j) {
        out << csv::quote(inst.sites[i].id) << ',' << csv::quote(inst.zones[j].id)
            << ',' << format_number(inst.distance(i, j)) << '\n';
      }
    }
  }
  {
    auto out = open(files.scenario);
    out << scenario_to_json(inst.scenario, inst.level_policy).dump(2) << '\n';
  }
}

}  // namespace rxreturn

#endif  // RXRETURN_IO_HPP_
