#pragma once

#include <string>

#include "tslab/norming.hpp"

namespace tslab {

// Canonical JSON form of certificate trees, used by the CLI and transcripts.
std::string cert_to_json(const CertNode& node);
CertNode cert_from_json(const std::string& text);

}  // namespace tslab
