#ifndef HILBERTMARK_CLI_HPP_
#define HILBERTMARK_CLI_HPP_

#include <iosfwd>
#include <stdexcept>

namespace hilbertmark {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

/// Bad command-line input (unknown flag value, malformed attack text, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Entry point of the `hilbertmark` tool. Commands: embed, extract,
/// optimize-lambda, attack, metrics, diff, bench.
/// Returns 0 on success, 2 on usage errors and 1 on data errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hilbertmark

#endif  // HILBERTMARK_CLI_HPP_
