#ifndef NLSBOX_CLI_HPP
#define NLSBOX_CLI_HPP

#include <string>

namespace nlsbox::cli {

/// Exit-code contract: 0 ok, 2 domain error, 3 certification failure,
/// 4 steering failure, 1 anything else.
struct Options {
    std::string command;
    std::string config_path;
    std::string out_dir;   // overrides [run] out when nonempty
    long long seed = -1;   // overrides [run] seed when >= 0
    int threads = 0;       // overrides [run] threads when > 0
};

int run_command(const Options& opt);

/// argv-style entry used by the binary and by tests.
int run(int argc, const char* const* argv);

} // namespace nlsbox::cli

#endif
