#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uqdesk::cli {

/// Runs one CLI invocation. `args` excludes the program name. Returns the
/// process exit code: 0 on success, 1 on error, 2 when `evaluate` wrote a
/// partial report.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Replaces `--config <file>` with the flags stored in that file. The file is
/// either a flat JSON object whose keys mirror flag names, or a run manifest
/// (its "command" and "config" are used). Flags given explicitly on the
/// command line win over the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace uqdesk::cli
