#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qclone/hilbert.hpp"

namespace qclone::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

/// Parses "<basis>:<k>" (1-based, basis I or IV) or comma-separated complex
/// amplitudes "re+imj,...". Amplitude lists are normalized; a norm off by more
/// than 1e-6 produces a warning on `warn`.
PureState parse_input_spec(const std::string& spec, int dim, std::ostream& warn);

/// Entry point behind the qclone binary. args excludes the program name.
/// Errors go to `err` as a single "qclone: error[usage|runtime]: ..." line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qclone::cli
