#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "srp/error.hpp"

namespace srp {

/// Round-trip formatting: %.17g, with inf/nan spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

/// CSV table built in memory and written in one go through a temporary file,
/// so a failed run never leaves a partial file behind.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    explicit Row(CsvTable& t) : t_(t) {}
    Row& operator<<(double v) { return cell(format_number(v)); }
    Row& operator<<(int v) { return cell(std::to_string(v)); }
    Row& operator<<(long v) { return cell(std::to_string(v)); }
    Row& operator<<(unsigned long v) { return cell(std::to_string(v)); }
    Row& operator<<(unsigned long long v) { return cell(std::to_string(v)); }
    Row& operator<<(bool v) { return cell(v ? "1" : "0"); }
    Row& operator<<(const std::string& v) { return cell(quote(v)); }
    Row& operator<<(const char* v) { return cell(quote(v)); }
    ~Row() { t_.rows_.push_back(std::move(cells_)); }

   private:
    Row& cell(std::string s) {
      cells_.push_back(std::move(s));
      return *this;
    }
    CsvTable& t_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }

  std::string str() const {
    std::string out;
    append_line(out, header_);
    for (const auto& r : rows_) {
      if (r.size() != header_.size()) throw Error(ErrorKind::validation, "csv: row width does not match header");
      append_line(out, r);
    }
    return out;
  }

  void write(const std::filesystem::path& path) const { write_atomic(path, str()); }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Minimal CSV reader for files produced by CsvTable (quoted cells allowed).
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    cells.push_back(std::move(cur));
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace srp
