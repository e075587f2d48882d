#include "wavekin/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "wavekin/errors.hpp"
#include "wavekin/version.hpp"

namespace wavekin {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary records are little-endian; byte swapping is not implemented");

constexpr char kMagic[4] = {'W', 'K', 'B', '1'};
constexpr std::uint32_t kBinaryVersion = 1;

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) throw ValidationError("cannot open output file " + path.string());
}

void CsvWriter::comment(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) out_ << "# " << line << "\n";
}

void CsvWriter::embed_config(const RunConfig& cfg) { comment(provenance_text(cfg)); }

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << quote(cells[i]);
  }
  out_ << "\r\n";
}

void CsvWriter::row_values(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ",";
    out_ << format(values[i]);
  }
  out_ << "\r\n";
}

std::string CsvWriter::quote(const std::string& cell) {
  const bool needs = cell.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_binary_record(const std::filesystem::path& path, const BinaryRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file " + path.string());
  out.write(kMagic, 4);
  auto put_u32 = [&out](std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  put_u32(kBinaryVersion);
  put_u32(static_cast<std::uint32_t>(record.extents.size()));
  std::size_t expect = 1;
  for (std::uint32_t e : record.extents) {
    put_u32(e);
    expect *= e;
  }
  if (expect != record.payload.size()) {
    throw ValidationError("binary record payload does not match extents");
  }
  put_u32(static_cast<std::uint32_t>(record.header_text.size()));
  out.write(record.header_text.data(),
            static_cast<std::streamsize>(record.header_text.size()));
  out.write(reinterpret_cast<const char*>(record.payload.data()),
            static_cast<std::streamsize>(record.payload.size() * sizeof(double)));
}

BinaryRecord read_binary_record(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ValidationError("not a wavekin binary record: " + path.string());
  }
  auto get_u32 = [&in]() {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  };
  const std::uint32_t version = get_u32();
  if (version != kBinaryVersion) {
    throw ValidationError("unsupported binary record version " + std::to_string(version));
  }
  BinaryRecord rec;
  const std::uint32_t rank = get_u32();
  std::size_t total = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    rec.extents.push_back(get_u32());
    total *= rec.extents.back();
  }
  const std::uint32_t text_len = get_u32();
  rec.header_text.resize(text_len);
  in.read(rec.header_text.data(), text_len);
  rec.payload.resize(total);
  in.read(reinterpret_cast<char*>(rec.payload.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!in) throw ValidationError("truncated binary record: " + path.string());
  return rec;
}

std::filesystem::path run_directory(const std::filesystem::path& out_root,
                                    const RunConfig& cfg) {
  const std::filesystem::path dir =
      out_root / (config_hash(cfg) + "-" + std::to_string(cfg.seed));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string provenance_text(const RunConfig& cfg) {
  std::string text = "wavekin ";
  text += kVersion;
  text += "\nconfig_hash = " + config_hash(cfg) + "\n";
  text += serialize_config(cfg);
  return text;
}

}  // namespace wavekin
