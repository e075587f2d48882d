#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavekin/io.hpp"
#include "wavekin/rng.hpp"

using namespace wavekin;

TEST_CASE("csv quoting follows rfc-4180") {
  CHECK(CsvWriter::quote("plain") == "plain");
  CHECK(CsvWriter::quote("a,b") == "\"a,b\"");
  CHECK(CsvWriter::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(CsvWriter::quote("line\nbreak") == "\"line\nbreak\"");
  CHECK(CsvWriter::format(0.1) == "0.10000000000000001");
}

TEST_CASE("binary record round-trips") {
  const auto path = std::filesystem::temp_directory_path() / "wavekin_test_record.bin";
  BinaryRecord rec;
  rec.extents = {3, 5};
  rec.header_text = "header text\nwith lines";
  RngStream rng(21, 0, 0);
  for (int i = 0; i < 15; ++i) rec.payload.push_back(rng.uniform() * 100 - 50);

  write_binary_record(path, rec);
  const BinaryRecord back = read_binary_record(path);
  CHECK(back.extents == rec.extents);
  CHECK(back.header_text == rec.header_text);
  REQUIRE(back.payload.size() == rec.payload.size());
  for (std::size_t i = 0; i < rec.payload.size(); ++i) {
    CHECK(back.payload[i] == rec.payload[i]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("run directory name is hash-seed") {
  RunConfig cfg;
  cfg.seed = 17;
  const auto dir = run_directory(std::filesystem::temp_directory_path() / "wavekin_runs", cfg);
  CHECK(dir.filename().string() == config_hash(cfg) + "-17");
  CHECK(std::filesystem::exists(dir));
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("csv files start with the resolved config") {
  const auto path = std::filesystem::temp_directory_path() / "wavekin_test.csv";
  {
    RunConfig cfg;
    CsvWriter csv(path);
    csv.embed_config(cfg);
    csv.header({"a", "b"});
    csv.row_values({1.0, 2.0});
  }
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  CHECK(text.rfind("# wavekin", 0) == 0);
  CHECK(text.find("config_hash") != std::string::npos);
  CHECK(text.find("a,b\r\n") != std::string::npos);
  std::filesystem::remove(path);
}
