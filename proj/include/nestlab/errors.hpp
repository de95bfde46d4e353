#pragma once

#include <stdexcept>
#include <string>

namespace nestlab {

// Failure conditions surfaced by the library. The CLI maps a subset to
// dedicated process exit codes; everything else exits 1.
enum class errc {
    not_bimodal,
    not_in_class_g,
    central_return,
    precision_exhausted,
    inadmissible,
    not_found,
    malformed_input,
    no_preimage,
    no_sign_change,
    no_return,
    boundary_hit,
    non_monotone,
    fixed_point_configuration,
    unlisted_case,
    constraint_violated,
    type_d,
    depth_exceeded,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::not_bimodal: return "not_bimodal";
    case errc::not_in_class_g: return "not_in_class_g";
    case errc::central_return: return "central_return";
    case errc::precision_exhausted: return "precision_exhausted";
    case errc::inadmissible: return "inadmissible";
    case errc::not_found: return "not_found";
    case errc::malformed_input: return "malformed_input";
    case errc::no_preimage: return "no_preimage";
    case errc::no_sign_change: return "no_sign_change";
    case errc::no_return: return "no_return";
    case errc::boundary_hit: return "boundary_hit";
    case errc::non_monotone: return "non_monotone";
    case errc::fixed_point_configuration: return "fixed_point_configuration";
    case errc::unlisted_case: return "unlisted_case";
    case errc::constraint_violated: return "constraint_violated";
    case errc::type_d: return "type_d";
    case errc::depth_exceeded: return "depth_exceeded";
    case errc::internal: return "internal";
    }
    return "unknown";
}

inline int exit_code_for(errc c) {
    switch (c) {
    case errc::not_bimodal: return 2;
    case errc::not_in_class_g: return 3;
    case errc::central_return: return 3;
    case errc::precision_exhausted: return 4;
    case errc::inadmissible: return 5;
    case errc::not_found: return 6;
    case errc::malformed_input: return 64;
    default: return 1;
    }
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const { return code_; }
    int exit_code() const { return exit_code_for(code_); }

private:
    errc code_;
};

} // namespace nestlab
