#include "bslip/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace bslip {

void init_logging_from_env()
{
    auto logger = spdlog::stderr_color_mt("bslip");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%H:%M:%S.%e] [%l] %v");
    const char* env = std::getenv("BSLIP_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
}

} // namespace bslip
