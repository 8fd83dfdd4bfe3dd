#include "nrpb/params_json.hpp"

#include "nrpb/errors.hpp"

#include <array>
#include <optional>

namespace nrpb {
namespace {

using nlohmann::json;

struct Field {
    std::string_view name;
    double SystemParams::*member;
    bool is_rate;
};

constexpr std::array<Field, 11> kFields{{
    {"gamma", &SystemParams::gamma, true},
    {"delta", &SystemParams::delta, true},
    {"omega_b", &SystemParams::omega_b, true},
    {"J", &SystemParams::J, true},
    {"K", &SystemParams::K, true},
    {"Lambda", &SystemParams::Lambda, true},
    {"beta", &SystemParams::beta, false},
    {"E", &SystemParams::E, true},
    {"delta_F", &SystemParams::delta_F, true},
    {"m_th", &SystemParams::m_th, false},
    {"gamma_p", &SystemParams::gamma_p, true},
}};

constexpr std::string_view kOverGamma = "_over_gamma";
constexpr std::string_view kOverOmegaB = "_over_omega_b";

enum class Unit { Absolute, Gamma, OmegaB };

struct KeyRef {
    const Field* field;
    Unit unit;
};

std::optional<KeyRef> lookup(std::string_view key) {
    for (const Field& f : kFields) {
        if (key == f.name) return KeyRef{&f, Unit::Absolute};
        if (!f.is_rate || !key.starts_with(f.name)) continue;
        const std::string_view rest = key.substr(f.name.size());
        // gamma_over_gamma and omega_b_over_omega_b would be identically 1.
        if (rest == kOverGamma && f.name != "gamma") return KeyRef{&f, Unit::Gamma};
        if (rest == kOverOmegaB && f.name != "omega_b") return KeyRef{&f, Unit::OmegaB};
    }
    return std::nullopt;
}

double number_at(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError("parameter '" + key + "' must be a number");
    }
    return v.get<double>();
}

} // namespace

bool is_param_key(std::string_view key) { return lookup(key).has_value(); }

SystemParams params_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("parameters must be a JSON object");
    }

    struct Entry {
        Unit unit{Unit::Absolute};
        double value{0.0};
        std::string key;
    };
    std::array<std::optional<Entry>, kFields.size()> entries;

    for (const auto& [key, _] : j.items()) {
        const auto ref = lookup(key);
        if (!ref) {
            throw ConfigError("unknown parameter key '" + key + "'");
        }
        const auto idx = static_cast<std::size_t>(ref->field - kFields.data());
        if (entries[idx]) {
            throw ConfigError("parameter '" + std::string(ref->field->name) + "' given twice ('" +
                              entries[idx]->key + "' and '" + key + "')");
        }
        entries[idx] = Entry{ref->unit, number_at(j, key), key};
    }

    const auto& g = entries[0];
    const auto& wb = entries[2];
    if (!g) throw ConfigError("missing required parameter 'gamma'");
    if (!wb) throw ConfigError("missing required parameter 'omega_b'");
    if (g->unit != Unit::Absolute && wb->unit != Unit::Absolute) {
        throw ConfigError("gamma and omega_b cannot both be given in reduced units");
    }

    SystemParams p;
    if (g->unit == Unit::Absolute) {
        p.gamma = g->value;
        p.omega_b = wb->unit == Unit::Absolute ? wb->value : wb->value * p.gamma;
    } else {
        p.omega_b = wb->value;
        p.gamma = g->value * p.omega_b;
    }

    for (std::size_t i = 0; i < kFields.size(); ++i) {
        if (i == 0 || i == 2 || !entries[i]) continue;
        const Entry& e = *entries[i];
        double v = e.value;
        if (e.unit == Unit::Gamma) v *= p.gamma;
        if (e.unit == Unit::OmegaB) v *= p.omega_b;
        p.*(kFields[i].member) = v;
    }
    p.validate();
    return p;
}

json params_to_json(const SystemParams& p) {
    json j = json::object();
    for (const Field& f : kFields) {
        j[std::string(f.name)] = p.*(f.member);
    }
    return j;
}

json params_to_reduced_json(const SystemParams& p) {
    json j = json::object();
    for (const Field& f : kFields) {
        const double v = p.*(f.member);
        if (!f.is_rate) {
            j[std::string(f.name)] = v;
            continue;
        }
        if (f.name != "gamma") j[std::string(f.name) + std::string(kOverGamma)] = v / p.gamma;
        if (f.name != "omega_b") j[std::string(f.name) + std::string(kOverOmegaB)] = v / p.omega_b;
    }
    return j;
}

HilbertConfig hilbert_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("cfg must be a JSON object");
    }
    HilbertConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key != "n_magnon" && key != "n_photon") {
            throw ConfigError("unknown cfg key '" + key + "'");
        }
        if (!value.is_number_integer() || value.get<long long>() < 0) {
            throw ConfigError("cfg '" + key + "' must be a non-negative integer");
        }
        (key == "n_magnon" ? cfg.n_magnon : cfg.n_photon) = value.get<std::size_t>();
    }
    cfg.validate();
    return cfg;
}

json hilbert_to_json(const HilbertConfig& cfg) {
    return json{{"n_magnon", cfg.n_magnon}, {"n_photon", cfg.n_photon}};
}

void set_param(SystemParams& params, std::string_view key, double value) {
    const auto ref = lookup(key);
    if (!ref) {
        throw ConfigError("unknown parameter '" + std::string(key) + "'");
    }
    if (ref->unit == Unit::Gamma) value *= params.gamma;
    if (ref->unit == Unit::OmegaB) value *= params.omega_b;
    params.*(ref->field->member) = value;
}

} // namespace nrpb
