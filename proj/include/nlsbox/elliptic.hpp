#ifndef NLSBOX_ELLIPTIC_HPP
#define NLSBOX_ELLIPTIC_HPP

#include <stdexcept>

namespace nlsbox::elliptic {

// Moduli this close to 1 make K blow up; the modulus equations never need them.
inline constexpr double kModulusGuard = 1.0 - 1e-12;

struct JacobiValues {
    double cn;
    double sn;
    double dn;
};

/// Complete elliptic integral of the first kind, AGM iteration.
double complete_K(double k);

/// Complete elliptic integral of the second kind. Accepts k = 1 (E = 1).
double complete_E(double k);

/// Jacobi elliptic functions cn, sn, dn by the descending Landen (AGM) method.
JacobiValues jacobi_cn_sn(double x, double k);

} // namespace nlsbox::elliptic

#endif
