#ifndef RSG_CLI_HPP
#define RSG_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

namespace rsg {

// Exit codes: 0 success, 1 property failure, 2 input error,
// 3 search exhausted without a witness.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotFound = 3;

struct ValidateOptions {
  int witness_cap = 100;
};

struct ImplicationOptions {
  int max_base = 3;
  bool exhaustive = false;
  std::uint64_t random_count = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct SearchRepOptions {
  int max_base = 3;
  bool square = false;
  int jobs = 1;
  bool progress = false;
};

struct VerifyPaperOptions {
  int max_base = 3;
  int jobs = 1;
};

int cmd_validate(const std::string& path, const ValidateOptions& opts, std::ostream& out,
                 std::ostream& err);
int cmd_tables(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_close(const std::string& path, const std::string& output_path, std::ostream& out,
              std::ostream& err);
int cmd_check_implication(const ImplicationOptions& opts, std::ostream& out, std::ostream& err);
int cmd_search_rep(const std::string& path, const SearchRepOptions& opts, std::ostream& out,
                   std::ostream& err);
int cmd_verify_paper(const VerifyPaperOptions& opts, std::ostream& out, std::ostream& err);

// Argument parsing + dispatch for the rsg binary.
int run_cli(int argc, const char* const* argv);

}  // namespace rsg

#endif
