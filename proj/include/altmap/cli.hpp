#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace altmap::cli {

inline constexpr std::string_view kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kIo = 3 };

/// Flat `key = value` lines; '#' starts a comment. Throws Error(InvalidConfig)
/// on syntax errors or a repeated key. Keys are not checked here.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// Every accepted config key with its default value.
const std::map<std::string, std::string>& default_config();

/// argv without the program name. Human-readable results go to `out`,
/// diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace altmap::cli
