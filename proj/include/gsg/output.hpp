#pragma once

// Byte-stable emission: CSV with RFC-4180 quoting, shortest round-trip floats,
// '\n' line endings, and FNV-1a checksums of everything written.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsg/errors.hpp"

namespace gsg::io {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return std::signbit(x) ? "-0" : "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

inline std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

using CsvCell = std::variant<double, long long, std::string>;

/// In-memory CSV table; column names carry their unit as a suffix.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw DomainError("CsvTable: header must not be empty");
    append_row(header_);
  }

  void row(std::initializer_list<CsvCell> cells) { row(std::vector<CsvCell>(cells)); }

  void row(const std::vector<CsvCell>& cells) {
    if (cells.size() != header_.size()) throw DimensionMismatchError("CsvTable: row width differs from header");
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (const auto& c : cells) {
      if (const double* d = std::get_if<double>(&c))
        text.push_back(format_double(*d));
      else if (const long long* i = std::get_if<long long>(&c))
        text.push_back(std::to_string(*i));
      else
        text.push_back(std::get<std::string>(c));
    }
    append_row(text);
    ++rows_;
  }

  const std::string& str() const noexcept { return body_; }
  std::size_t rows() const noexcept { return rows_; }
  const std::vector<std::string>& header() const noexcept { return header_; }

 private:
  void append_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) body_ += ',';
      body_ += csv_quote(fields[i]);
    }
    body_ += '\n';
  }

  std::vector<std::string> header_;
  std::string body_;
  std::size_t rows_ = 0;
};

struct EmittedFile {
  std::string path;  // relative to the output directory
  std::uint64_t checksum = 0;
  std::size_t bytes = 0;
};

/// Writes files under one directory and remembers their checksums.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec || !std::filesystem::is_directory(root_))
      throw IoError("cannot create output directory " + root_.string() + (ec ? ": " + ec.message() : ""));
  }

  const EmittedFile& write(const std::string& name, std::string_view bytes) {
    const auto path = root_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    if (!f) throw IoError("write failed for " + path.string());
    files_.push_back({name, fnv1a64(bytes), bytes.size()});
    return files_.back();
  }

  const EmittedFile& write(const std::string& name, const CsvTable& t) { return write(name, t.str()); }

  const std::filesystem::path& root() const noexcept { return root_; }
  const std::vector<EmittedFile>& files() const noexcept { return files_; }

 private:
  std::filesystem::path root_;
  std::vector<EmittedFile> files_;
};

}  // namespace gsg::io
