#pragma once

#ifndef TRIPHASE_VERSION
#define TRIPHASE_VERSION "0.0.0"
#endif

namespace triphase::cli {
inline constexpr const char* kVersion = TRIPHASE_VERSION;
}
