#ifndef DWARP_VERSION_HPP_
#define DWARP_VERSION_HPP_

namespace dwarp {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace dwarp

#endif  // DWARP_VERSION_HPP_
