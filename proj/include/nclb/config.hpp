#pragma once

// `key = value` configuration files for the command-line tool.

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace nclb {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Parses lines of the form `key = value`. Blank lines and `#` comments are
/// skipped; a repeated key or a line without '=' throws ParseError.
ConfigEntries parse_config(std::istream& in);
ConfigEntries load_config(const std::string& path);

/// Removes `--config <path>` (or `--config=<path>`) from args and appends
/// `--key=value` for every file entry whose option was not given on the
/// command line, so flags beat the file. args[0] is the program name.
std::vector<std::string> merge_config_args(std::vector<std::string> args);

}  // namespace nclb
