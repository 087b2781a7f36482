#pragma once

#include <string>
#include <vector>

namespace panelfc {

// Entry point behind the panelfc binary; args excludes the program name.
// Returns the process exit code; diagnostics go to stderr.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace panelfc
