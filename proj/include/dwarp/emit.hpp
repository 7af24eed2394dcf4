// dwarp - report emission: human-readable text and CI-stable JSON

#ifndef DWARP_EMIT_HPP_
#define DWARP_EMIT_HPP_

#include "dwarp/checks.hpp"

namespace dwarp {

// JSON field names are stable (see README); identical reports serialize to
// identical bytes.
std::string emit_json(const RunReport& report);
std::string emit_text(const RunReport& report);
// format: "text" or "json".
std::string emit(const RunReport& report, const std::string& format);

}  // namespace dwarp

#endif  // DWARP_EMIT_HPP_
