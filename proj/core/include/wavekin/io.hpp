#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "wavekin/config.hpp"

namespace wavekin {

/// CSV writer with RFC-4180-style quoting; '#'-prefixed comment lines carry
/// the resolved config so every output is self-describing. Doubles are
/// written with 17 significant digits (value-exact round trip).
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void comment(const std::string& text);
  void embed_config(const RunConfig& cfg);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

  static std::string quote(const std::string& cell);
  static std::string format(double v);

 private:
  std::ofstream out_;
};

/// Compact binary snapshot record shared by simulate and zs-pdf:
///   magic "WKB1", u32 version, u32 rank, u32 extents[rank],
///   u32 header_text_len, header_text (resolved config + artifact version),
///   then little-endian f64 payload.
struct BinaryRecord {
  std::vector<std::uint32_t> extents;
  std::string header_text;
  std::vector<double> payload;
};

void write_binary_record(const std::filesystem::path& path, const BinaryRecord& record);
BinaryRecord read_binary_record(const std::filesystem::path& path);

/// Run directory <out>/<config-hash>-<seed>; created on demand.
std::filesystem::path run_directory(const std::filesystem::path& out_root,
                                    const RunConfig& cfg);

/// Header text embedded into binary records and JSON summaries.
std::string provenance_text(const RunConfig& cfg);

}  // namespace wavekin
