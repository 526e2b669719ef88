#pragma once

#include <cstdio>

namespace sdl {

/// Runs the ten acceptance criteria with pinned resolutions and tolerances,
/// printing one PASS/FAIL line per criterion; returns true iff all pass.
bool run_acceptance(std::FILE* out);

} // namespace sdl
