#pragma once

#include <string>
#include <vector>

namespace streamcd::cli {

/// Entry point behind the streamcd binary; returns the process exit status.
/// Kept callable so the command surface is testable in-process.
int run(const std::vector<std::string>& args);

}  // namespace streamcd::cli
