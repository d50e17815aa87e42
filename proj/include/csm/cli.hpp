#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csm/measures.hpp"
#include "csm/model.hpp"

namespace csm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the `csm` tool: discover, top, serve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Aligned condition / consequence / measure table; header only for no records.
std::string format_top_table(const std::vector<InteractionRecord>& records, Measure measure,
                             const std::vector<ArtifactDecl>& artifacts);

/// Applies CSM_LOG_LEVEL (error, warn, info, debug; default warn) and routes
/// log output to standard error. Returns false for an unrecognised level.
bool configure_logging();

}  // namespace csm
