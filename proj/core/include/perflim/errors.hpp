#pragma once

#include <stdexcept>
#include <string>

namespace perflim {

enum class Errc {
    degenerate_input,
    pole_evaluation,
    not_right_invertible,
    repeated_nmp_zeros,
    not_in_h2,
    improper_plant,
    not_stabilizable,
    conjugacy_violation,
    spectral_factorization_singular,
    no_stabilizing_solution,
    expansion_singular,
    not_simple_pole,
    not_a_pole,
    consistency_failure,
    quadrature_failure,
    numerical_inconsistency,
    evaluation_collision,
    not_siso,
    precondition_violated,
    marginal_pole,
    not_h2_admissible,
    ill_conditioned_basis,
    unstable_simulation,
    usage_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::degenerate_input: return "degenerate_input";
        case Errc::pole_evaluation: return "pole_evaluation";
        case Errc::not_right_invertible: return "not_right_invertible";
        case Errc::repeated_nmp_zeros: return "repeated_nmp_zeros";
        case Errc::not_in_h2: return "not_in_h2";
        case Errc::improper_plant: return "improper_plant";
        case Errc::not_stabilizable: return "not_stabilizable";
        case Errc::conjugacy_violation: return "conjugacy_violation";
        case Errc::spectral_factorization_singular: return "spectral_factorization_singular";
        case Errc::no_stabilizing_solution: return "no_stabilizing_solution";
        case Errc::expansion_singular: return "expansion_singular";
        case Errc::not_simple_pole: return "not_simple_pole";
        case Errc::not_a_pole: return "not_a_pole";
        case Errc::consistency_failure: return "consistency_failure";
        case Errc::quadrature_failure: return "quadrature_failure";
        case Errc::numerical_inconsistency: return "numerical_inconsistency";
        case Errc::evaluation_collision: return "evaluation_collision";
        case Errc::not_siso: return "not_siso";
        case Errc::precondition_violated: return "precondition_violated";
        case Errc::marginal_pole: return "marginal_pole";
        case Errc::not_h2_admissible: return "not_h2_admissible";
        case Errc::ill_conditioned_basis: return "ill_conditioned_basis";
        case Errc::unstable_simulation: return "unstable_simulation";
        case Errc::usage_error: return "usage_error";
    }
    return "unknown";
}

} // namespace perflim
