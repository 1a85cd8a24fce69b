#ifndef WQED_VERSION_HPP
#define WQED_VERSION_HPP

#include <string_view>

namespace wqed {

inline constexpr std::string_view kVersion = "1.0.0";

} // namespace wqed

#endif // WQED_VERSION_HPP
