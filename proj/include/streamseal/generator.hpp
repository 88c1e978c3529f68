#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <streamseal/config.hpp>
#include <streamseal/record.hpp>

namespace streamseal {

// Deterministic synthetic readings for one station: a diurnal sine curve
// plus seeded noise, rounded to one decimal place. The same spec always
// yields the same records.
std::vector<Record> generate_records(const std::string& source_name,
                                     const std::string& station_id,
                                     const GeneratorSpec& spec);

// Writes one NDJSON file per station plus a ready-to-run config.json into
// out_dir. Returns the config path. Stations beyond the two named Berlin
// stations are called "Berlin Station<i>".
std::filesystem::path write_generated_corpus(const std::filesystem::path& out_dir,
                                             std::uint64_t seed, int stations,
                                             std::int64_t hours,
                                             std::int64_t interval_seconds,
                                             std::int64_t start_time);

}  // namespace streamseal
