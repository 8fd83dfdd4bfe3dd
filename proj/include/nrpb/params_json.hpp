// params_json.hpp — JSON schema for SystemParams and HilbertConfig
//
// SystemParams is a flat object with keys gamma, delta, omega_b, J, K,
// Lambda, beta, E, delta_F, m_th, gamma_p. Every rate may instead be given
// through a companion key "<name>_over_gamma" or "<name>_over_omega_b";
// giving both forms of one quantity is a ConfigError, as is any unknown key.
// gamma and omega_b are required (one of them must be absolute). Missing
// optional quantities default to zero.

#pragma once

#include "nrpb/model.hpp"
#include "nrpb/operators.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace nrpb {

SystemParams params_from_json(const nlohmann::json& j);

// Absolute keys only; params_from_json(params_to_json(p)) == p.
nlohmann::json params_to_json(const SystemParams& p);

// Every rate expressed as <name>_over_gamma and <name>_over_omega_b.
nlohmann::json params_to_reduced_json(const SystemParams& p);

HilbertConfig hilbert_from_json(const nlohmann::json& j);
nlohmann::json hilbert_to_json(const HilbertConfig& cfg);

// True for any key params_from_json accepts, absolute or reduced.
bool is_param_key(std::string_view key);

// Sets one quantity by (possibly reduced) key, converting with the current
// gamma and omega_b of `params`. Throws ConfigError on an unknown key.
void set_param(SystemParams& params, std::string_view key, double value);

} // namespace nrpb
