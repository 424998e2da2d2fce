#pragma once

#include <cstdint>
#include <string>

namespace critwalk::cli {

// Process entry point; returns the exit code (0 success, 1 I/O failure,
// 2 usage or config error).
int run(int argc, const char* const* argv);

// In-process entry for tests: subcommand plus config JSON text ("" for
// defaults). Writes report files under out_dir.
int run_command(const std::string& subcommand, const std::string& config_json,
                const std::string& out_dir, std::uint64_t seed, int workers);

} // namespace critwalk::cli
