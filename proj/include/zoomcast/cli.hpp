#pragma once

#include <iosfwd>

namespace zoomcast {

// Exit codes: 0 ok, 1 domain infeasible or run failure, 2 usage or parse
// error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace zoomcast
