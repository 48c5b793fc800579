#include "nlsbox/discretization.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nlsbox {

Eigen::VectorXd SineGrid::points() const {
    Eigen::VectorXd x(M);
    for (int j = 0; j < M; ++j) x(j) = point(j);
    return x;
}

const Eigen::MatrixXd& sine_matrix(int M) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<Eigen::MatrixXd>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(M);
    if (it == cache.end()) {
        auto S = std::make_unique<Eigen::MatrixXd>(M, M);
        const double w = M_PI / (M + 1);
        for (int j = 0; j < M; ++j)
            for (int n = 0; n < M; ++n)
                (*S)(j, n) = std::sin(w * (j + 1) * (n + 1));
        it = cache.emplace(M, std::move(S)).first;
    }
    return *it->second;
}

StateField sine_forward(const StateField& f) {
    if (f.rep != Rep::Point) throw std::logic_error("sine_forward: expects point representation");
    StateField out(f.grid, Rep::Coefficient);
    out.v = (2.0 / (f.grid.M + 1)) * (sine_matrix(f.grid.M) * f.v);
    return out;
}

StateField sine_inverse(const StateField& f) {
    if (f.rep != Rep::Coefficient) throw std::logic_error("sine_inverse: expects coefficients");
    StateField out(f.grid, Rep::Point);
    out.v = sine_matrix(f.grid.M) * f.v;
    return out;
}

StateField to_rep(const StateField& f, Rep r) {
    if (f.rep == r) return f;
    return (r == Rep::Coefficient) ? sine_forward(f) : sine_inverse(f);
}

double h_norm(const StateField& f, double s) {
    const StateField c = to_rep(f, Rep::Coefficient);
    double sum = 0.0;
    for (int n = 0; n < f.grid.M; ++n) {
        const double w = std::pow((n + 1) * M_PI, s);
        sum += w * w * std::norm(c.v(n));
    }
    return std::sqrt(0.5 * sum);
}

StateField laplacian_apply(const StateField& f) {
    StateField c = to_rep(f, Rep::Coefficient);
    for (int n = 0; n < f.grid.M; ++n) {
        const double w = (n + 1) * M_PI;
        c.v(n) *= w * w;
    }
    return to_rep(c, f.rep);
}

Complex l2_inner(const StateField& f, const StateField& g) {
    if (f.grid.M != g.grid.M) throw std::invalid_argument("l2_inner: grid mismatch");
    const StateField a = to_rep(f, Rep::Coefficient);
    const StateField b = to_rep(g, Rep::Coefficient);
    return 0.5 * b.v.dot(a.v); // dot conjugates its first argument
}

StateField field_from_function(const SineGrid& g, const std::function<Complex(double)>& fn) {
    StateField out(g, Rep::Point);
    for (int j = 0; j < g.M; ++j) out.v(j) = fn(g.point(j));
    return out;
}

Eigen::VectorXd sine_coeffs_of(const std::function<double(double)>& f, int M, int oversample) {
    const int R = oversample * (M + 1);
    Eigen::VectorXd fv(R - 1);
    for (int j = 1; j < R; ++j) fv(j - 1) = f(double(j) / R);
    Eigen::VectorXd a(M);
    const double w = M_PI / R;
    for (int n = 1; n <= M; ++n) {
        double s = 0.0;
        for (int j = 1; j < R; ++j) s += fv(j - 1) * std::sin(w * n * j);
        a(n - 1) = 2.0 * s / R; // endpoint terms vanish with sin
    }
    return a;
}

Eigen::VectorXd cosine_coeffs_of(const std::function<double(double)>& f, int P, int oversample) {
    const int R = oversample * (P + 1);
    Eigen::VectorXd fv(R + 1);
    for (int j = 0; j <= R; ++j) fv(j) = f(double(j) / R);
    Eigen::VectorXd c(P + 1);
    const double w = M_PI / R;
    for (int p = 0; p <= P; ++p) {
        double s = 0.5 * (fv(0) + ((p % 2 == 0) ? fv(R) : -fv(R)));
        for (int j = 1; j < R; ++j) s += fv(j) * std::cos(w * p * j);
        c(p) = 2.0 * s / R;
    }
    return c;
}

} // namespace nlsbox
