#pragma once

#define FOMATCH_VERSION "1.0.0"

namespace fomatch {
inline const char* version() { return FOMATCH_VERSION; }
} // namespace fomatch
