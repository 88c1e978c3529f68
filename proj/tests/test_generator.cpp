#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>
#include <streamseal/config.hpp>
#include <streamseal/generator.hpp>

using namespace streamseal;
namespace fs = std::filesystem;

TEST_CASE("same spec yields identical records") {
  GeneratorSpec spec;
  spec.seed = 42;
  spec.hours = 2;
  auto a = generate_records("S", "ST-01", spec);
  auto b = generate_records("S", "ST-01", spec);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == 12);  // 2h at 600s
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].event_time == b[i].event_time);
    CHECK(a[i].temperature == b[i].temperature);
    CHECK(a[i].extras == b[i].extras);
  }
}

TEST_CASE("different seeds diverge") {
  GeneratorSpec a_spec;
  a_spec.seed = 1;
  a_spec.hours = 1;
  GeneratorSpec b_spec = a_spec;
  b_spec.seed = 2;
  auto a = generate_records("S", "ST-01", a_spec);
  auto b = generate_records("S", "ST-01", b_spec);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].temperature != b[i].temperature) {
      any_difference = true;
    }
  }
  CHECK(any_difference);
}

TEST_CASE("records are well-formed observations") {
  GeneratorSpec spec;
  spec.hours = 3;
  auto records = generate_records("Berlin Tempelhof", "ST-02", spec);
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];
    CHECK(record.source_stream == "Berlin Tempelhof");
    CHECK(record.extras["stationId"] == "ST-02");
    auto humidity = record.extras["humidityPct"].get<std::int64_t>();
    CHECK(humidity >= 30);
    CHECK(humidity <= 90);
    // One decimal place: scaling by 10 is integral.
    double scaled = record.temperature * 10.0;
    CHECK(scaled == std::round(scaled));
    // Plausible Berlin range given base 15, amplitude 8, noise 1.5.
    CHECK(record.temperature > -10.0);
    CHECK(record.temperature < 40.0);
    if (i > 0) {
      CHECK(record.event_time == previous + spec.interval_seconds);
    }
    previous = record.event_time;
  }
  CHECK(records.front().event_time == spec.start_time);
}

TEST_CASE("corpus writer lays out station files and a config") {
  auto dir = fs::temp_directory_path() / "streamseal_gen_corpus";
  fs::remove_all(dir);
  auto config_path = write_generated_corpus(dir, 7, 2, 4, 600, 1764547200);
  CHECK(config_path == dir / "config.json");
  CHECK(fs::exists(dir / "Berlin_Brandenburg.ndjson"));
  CHECK(fs::exists(dir / "Berlin_Tempelhof.ndjson"));

  auto config = load_config(config_path);
  REQUIRE(config.sources.size() == 2);
  CHECK(config.sources[0].name == "Berlin Brandenburg");
  CHECK(config.sources[0].stream == "BrandenburgCheck");
  CHECK(config.sources[1].name == "Berlin Tempelhof");
  CHECK(config.sources[1].stream == "TempelhofCheck");
  REQUIRE(config.region.has_value());
  CHECK(config.region->name == "Berlin");
  CHECK(config.region->stream == "BerlinCheck");
  CHECK(config.ledger.backend == "sim");

  // 4 hours at 600s = 24 records per file.
  std::ifstream in(dir / "Berlin_Brandenburg.ndjson");
  std::string l;
  int lines = 0;
  while (std::getline(in, l)) {
    auto row = nlohmann::json::parse(l);
    CHECK(row["sourceStream"] == "Berlin Brandenburg");
    ++lines;
  }
  CHECK(lines == 24);
  fs::remove_all(dir);
}

TEST_CASE("corpus is reproducible byte for byte") {
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  auto dir_a = fs::temp_directory_path() / "streamseal_gen_a";
  auto dir_b = fs::temp_directory_path() / "streamseal_gen_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  write_generated_corpus(dir_a, 11, 2, 2, 600, 1764547200);
  write_generated_corpus(dir_b, 11, 2, 2, 600, 1764547200);
  CHECK(read(dir_a / "Berlin_Brandenburg.ndjson") ==
        read(dir_b / "Berlin_Brandenburg.ndjson"));
  CHECK(read(dir_a / "Berlin_Tempelhof.ndjson") ==
        read(dir_b / "Berlin_Tempelhof.ndjson"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("station files differ from each other") {
  auto dir = fs::temp_directory_path() / "streamseal_gen_diff";
  fs::remove_all(dir);
  write_generated_corpus(dir, 3, 2, 2, 600, 1764547200);
  std::ifstream a(dir / "Berlin_Brandenburg.ndjson");
  std::ifstream b(dir / "Berlin_Tempelhof.ndjson");
  std::string line_a;
  std::string line_b;
  bool differ = false;
  while (std::getline(a, line_a) && std::getline(b, line_b)) {
    auto ja = nlohmann::json::parse(line_a);
    auto jb = nlohmann::json::parse(line_b);
    if (ja["temperature"] != jb["temperature"]) {
      differ = true;
    }
  }
  CHECK(differ);
  fs::remove_all(dir);
}
