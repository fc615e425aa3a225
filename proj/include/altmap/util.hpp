#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace altmap::util {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower_ascii(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix) noexcept;
bool ends_with_icase(std::string_view s, std::string_view suffix) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

/// 64-bit FNV-1a; used for snapshot checksums and manifest content hashes.
class Fnv1a64 {
 public:
  void update(std::string_view bytes) noexcept;
  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view s);
/// Splits one CSV line honoring double-quoted fields. Returns false on an
/// unterminated quote.
bool parse_csv_line(std::string_view line, std::vector<std::string>& out);

/// Shortest round-trip representation ("%.17g" trimmed by std::to_chars).
std::string format_double(double v);
/// Fixed-point with `decimals` digits; "-0.000" is printed as "0.000".
std::string format_fixed(double v, int decimals);

/// Reads a whole file; throws Error(FileUnreadable) on failure.
std::string read_file(const std::string& path);
/// Writes a whole file; throws Error(IoError) on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace altmap::util
