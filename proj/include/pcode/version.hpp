#pragma once

namespace pcode {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pcode
