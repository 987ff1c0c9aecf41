#pragma once

namespace adiascope {
inline constexpr const char* kVersion = "0.1.0";
}
