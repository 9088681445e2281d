#pragma once

#include <iosfwd>

namespace discordkit::cli {

/// Command-line entry point. Returns 0 on success, 1 for domain errors
/// (message starts with the error name), 2 for usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace discordkit::cli
