#pragma once

#include <stdexcept>
#include <string>

// Canonical-commutator consistency check for the virtual-cavity local field.
// Including the polarization noise, the equal-time [E_loc, B_loc] commutator
// picks up the scalar factor 1 + (alpha^2/9)(eps_static - 1) relative to the
// free-space one; the model is trustworthy only while the excess stays small.

namespace lfdecay {

/// Lattice structure constant s of the local-field relation; cubic symmetry
/// is s = 0. The commutator correction enters through alpha = 1 + 3s.
struct StructureConstant {
    double s = 0.0;

    double alpha() const { return 1.0 + 3.0 * s; }
};

enum class ValidityClass { Strict, Marginal, Violated };

inline const char* to_string(ValidityClass c) {
    switch (c) {
        case ValidityClass::Strict: return "strict";
        case ValidityClass::Marginal: return "marginal";
        case ValidityClass::Violated: return "violated";
    }
    return "?";
}

struct ValidityMargin {
    double rho = 0.0; // spurious commutator term relative to the canonical one
    ValidityClass cls = ValidityClass::Strict;
};

namespace detail {
inline void check_eps_static(double eps_static) {
    if (!(eps_static >= 1.0))
        throw std::invalid_argument("consistency: eps_static must be >= 1, got " +
                                    std::to_string(eps_static));
}
} // namespace detail

namespace detail {
// shared by coefficient and margin so that coefficient == 1 + rho bitwise
inline double spurious_term(double eps_static, StructureConstant s) {
    const double a = s.alpha();
    return a * a * (eps_static - 1.0) / 9.0;
}
} // namespace detail

/// Scalar multiplying the canonical [E_loc, B_loc] commutator:
/// 1 + (alpha^2/9)(eps_static - 1). Exactly 1 means full QED consistency.
inline double commutator_coefficient(double eps_static, StructureConstant s = {}) {
    detail::check_eps_static(eps_static);
    return 1.0 + detail::spurious_term(eps_static, s);
}

/// rho = alpha^2 (eps_static - 1)/9, the size of the spurious commutator
/// term. Classification thresholds: rho < 0.1 "strict" (the eps_static/10
/// reading of the validity condition), rho >= 1 "violated" (spurious term
/// as large as the canonical one), "marginal" in between.
inline ValidityMargin validity_margin(double eps_static, StructureConstant s = {}) {
    detail::check_eps_static(eps_static);
    const double rho = detail::spurious_term(eps_static, s);
    ValidityClass cls = ValidityClass::Strict;
    if (rho >= 1.0)
        cls = ValidityClass::Violated;
    else if (rho >= 0.1)
        cls = ValidityClass::Marginal;
    return {rho, cls};
}

} // namespace lfdecay
