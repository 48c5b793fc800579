#include "nlsbox/elliptic.hpp"

#include <cmath>
#include <algorithm>

namespace nlsbox::elliptic {

namespace {
constexpr int kMaxAgm = 32;
}

double complete_K(double k) {
    if (k < 0.0 || k > kModulusGuard)
        throw std::domain_error("complete_K: modulus must lie in [0, 1 - 1e-12]");
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int i = 0; i < kMaxAgm && std::abs(a - b) > 1e-17 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

double complete_E(double k) {
    if (k < 0.0 || k > 1.0)
        throw std::domain_error("complete_E: modulus must lie in [0, 1]");
    if (k > kModulusGuard) {
        // E(k) = 1 + (1/2) k'^2 (log(4/k') - 1/2) + O(k'^4 log k')
        const double kp2 = (1.0 - k) * (1.0 + k);
        if (kp2 <= 0.0) return 1.0;
        const double kp = std::sqrt(kp2);
        return 1.0 + 0.5 * kp2 * (std::log(4.0 / kp) - 0.5);
    }
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    double c = k;
    double sum = 0.5 * c * c; // 2^{-1} c_0^2
    double pow2 = 0.5;
    for (int i = 0; i < kMaxAgm && std::abs(c) > 1e-18; ++i) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    const double K = M_PI / (2.0 * a);
    return K * (1.0 - sum);
}

JacobiValues jacobi_cn_sn(double x, double k) {
    if (k < 0.0 || k > kModulusGuard)
        throw std::domain_error("jacobi_cn_sn: modulus must lie in [0, 1 - 1e-12]");
    if (k < 1e-14)
        return {std::cos(x), std::sin(x), 1.0};

    // Reduce the argument by the 4K period to keep the phase recursion accurate.
    const double K = complete_K(k);
    x -= 4.0 * K * std::round(x / (4.0 * K));

    double a[kMaxAgm + 1], c[kMaxAgm + 1];
    a[0] = 1.0;
    c[0] = k;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    int n = 0;
    while (n < kMaxAgm) {
        c[n + 1] = 0.5 * (a[n] - b);
        const double an = 0.5 * (a[n] + b);
        b = std::sqrt(a[n] * b);
        a[n + 1] = an;
        ++n;
        if (std::abs(c[n]) < 1e-17 * a[n]) break;
    }
    double phi = std::ldexp(a[n] * x, n); // 2^n a_n x
    double phi_prev = phi;
    for (int i = n; i >= 1; --i) {
        phi_prev = phi;
        const double s = std::clamp(c[i] * std::sin(phi) / a[i], -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    JacobiValues v;
    v.sn = std::sin(phi);
    v.cn = std::cos(phi);
    const double denom = std::cos(phi_prev - phi);
    v.dn = (std::abs(denom) > 1e-12) ? v.cn / denom
                                     : std::sqrt(1.0 - k * k * v.sn * v.sn);
    return v;
}

} // namespace nlsbox::elliptic
