#ifndef GAUSSMOSER_CLI_HPP
#define GAUSSMOSER_CLI_HPP

#include <ostream>

namespace gaussmoser {

// Command-line front end; returns the process exit code. Deterministic:
// identical invocations produce byte-identical output. Exit code 0 iff no
// verdict is inconclusive and no registered check failed.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace gaussmoser

#endif
