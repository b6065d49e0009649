#pragma once

namespace nono {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kWeightsFormat = "NONOMLP1";

}  // namespace nono
