#pragma once

#include <string>

#include "aerotarget/pipeline.hpp"

namespace aerotarget::cfg {

/// Parses a key=value document into a PipelineConfig. Blank lines and lines
/// starting with '#' are skipped. Unknown keys, duplicate keys, and
/// unparseable values throw with the offending line in the message.
pipe::PipelineConfig parse_config_text(const std::string& text);

pipe::PipelineConfig load_config(const std::string& path);

/// The accepted keys, one per line, for usage messages.
std::string config_key_help();

}  // namespace aerotarget::cfg
