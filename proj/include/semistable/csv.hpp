#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

// CSV emission with stable bytes: 17 significant digits, '.' decimal
// separator, LF line endings, metadata as leading '#' comment lines.
// Runs with identical inputs must produce identical files, so nothing
// environment-dependent (time, locale, paths) may enter here.

namespace semistable::io {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline std::string format_integer(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
  return std::string(buf);
}

// RFC-4180 quoting for the rare non-numeric cell.
inline std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  void metadata(const std::string& key, const std::string& value) {
    if (header_written_)
      throw std::logic_error("CsvWriter: metadata must precede the header");
    text_ += "# " + key + "=" + value + "\n";
  }
  void metadata(const std::string& key, double value) {
    metadata(key, format_number(value));
  }
  void metadata(const std::string& key, std::uint64_t value) {
    metadata(key, format_integer(value));
  }

  void header(const std::vector<std::string>& cols) {
    if (header_written_) throw std::logic_error("CsvWriter: duplicate header");
    append_line(cols);
    header_written_ = true;
    width_ = cols.size();
  }

  void row(const std::vector<std::string>& cells) {
    if (!header_written_) throw std::logic_error("CsvWriter: header first");
    if (cells.size() != width_)
      throw std::logic_error("CsvWriter: row width mismatch");
    append_line(cells);
  }

  const std::string& text() const { return text_; }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f.write(text_.data(), static_cast<std::streamsize>(text_.size()));
    if (!f) throw std::runtime_error("failed writing output file: " + path);
  }

 private:
  void append_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_escape(cells[i]);
    }
    text_ += '\n';
  }

  std::string text_;
  bool header_written_ = false;
  std::size_t width_ = 0;
};

}  // namespace semistable::io
