#pragma once

namespace metashock {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace metashock
