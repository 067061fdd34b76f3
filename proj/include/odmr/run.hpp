#pragma once

#include <cstdint>
#include <string>

#include "odmr/config.hpp"

namespace odmr {

struct RunContext {
  RunConfig config;
  std::string out_dir;
  std::uint64_t seed = 0;
};

// CLI subcommand bodies. Each writes its outputs plus a JSON manifest
// (config hash, seed, version, file list) into out_dir and returns a
// process exit code.
int cmd_lines(const RunContext& ctx);
int cmd_map(const RunContext& ctx);
int cmd_fit(const RunContext& ctx);
int cmd_dipolar(const RunContext& ctx);
int cmd_acoustic(const RunContext& ctx);

// Embedded figure-preset configs (fig2..fig7); throws on unknown name.
std::string preset_config(const std::string& name);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace odmr
