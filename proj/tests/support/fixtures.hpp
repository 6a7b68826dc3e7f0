#pragma once

#include <string>

#include "cfsmkit/cfsm.hpp"
#include "cfsmkit/globaltype.hpp"

namespace fixtures {

using cfsmkit::Cfsm;

/// Absolute path of a file under tests/data.
std::string data_path(const std::string& name);
std::string read_data(const std::string& name);

/// Client J of the working example: sends a text to M, waits for ok/fail.
Cfsm m_j();
/// Server K: serves A, then B, each until it gets an ok.
Cfsm m_k();

/// The two gateways drawn for the working example, transcribed by hand with
/// their own state names.
Cfsm drawn_gateway_j();
Cfsm drawn_gateway_k();

cfsmkit::GlobalType fig1();
cfsmkit::GlobalType s_prime();

}  // namespace fixtures
