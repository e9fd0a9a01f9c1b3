#pragma once

#include <ostream>

namespace upl::cli {

/// Exit codes shared by every subcommand.
enum Exit : int { Positive = 0, Negative = 1, Undetermined = 2, InputError = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace upl::cli
