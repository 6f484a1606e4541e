#pragma once

#include <string>

#include "json.hpp"

namespace nbx {

/// Canonical JSON rendering: sorted keys, LF-only, UTF-8, doubles with up to
/// 12 significant digits, so equal documents serialize byte-identically.
/// Non-finite numbers become null, with a "warnings" array added at the root
/// naming each replaced path. Pretty mode indents by two spaces; otherwise
/// the document is a single line. A trailing newline is always appended.
std::string emit_report(nlohmann::json report, bool pretty);

}  // namespace nbx
