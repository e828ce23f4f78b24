#pragma once

namespace bslip {

// Sets the spdlog level from BSLIP_LOG (trace, debug, info, warn, error,
// off); defaults to info.
void init_logging_from_env();

} // namespace bslip
