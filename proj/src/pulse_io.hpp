#pragma once

#include <string>

#include "dynamics.hpp"

namespace isingqoc {

/// Pulse files carry the endpoints, the duration, and every super-iteration's
/// basis and coefficients, so a stored pulse is rebuilt exactly rather than
/// resampled. JSON, format tag "isingqoc-pulse-v1".
void save_pulse(const ControlProtocol& pulse, const std::string& path);
ControlProtocol load_pulse(const std::string& path);

std::string pulse_to_json(const ControlProtocol& pulse);
ControlProtocol pulse_from_json(const std::string& text);

}  // namespace isingqoc
