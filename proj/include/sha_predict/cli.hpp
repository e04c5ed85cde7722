#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sha_predict/lmfdb.hpp"

namespace sha_predict::cli {

enum ExitCode : int {
    ok = 0,
    internal_error = 1,
    input_error = 2,
    bound_exhausted = 3,
    network_error = 4,
};

inline constexpr const char* output_version = "1";

// Hooks for tests; anything unset comes from the environment.
struct Context {
    std::shared_ptr<lmfdb::Transport> transport;
    std::optional<lmfdb::Config> config;
    lmfdb::Clock clock;
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Context& ctx = {});

} // namespace sha_predict::cli
