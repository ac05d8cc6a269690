#pragma once

// Command-line driver: `check`, `elaborate`, `equiv` and `coherence`.
//
// Exit status: 0 success, 1 type or safety error (or a negative answer
// from `equiv`/`coherence`), 2 usage or parse error, 3 an internal bound
// (fuel, closure, search) was exceeded.

#include <iosfwd>
#include <string>
#include <vector>

#include "dictapp/surface.h"
#include "dictapp/typecheck.h"

namespace dictapp {

/// `args` excludes the program name. Data goes to `out`, diagnostics to
/// `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// The elaborated program as a `.sysf` module: constructors, instance and
/// primitive declarations, then one definition per item.
SysfModule to_sysf(const Program &program, const ProgramResult &result);

}  // namespace dictapp
