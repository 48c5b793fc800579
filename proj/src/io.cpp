#include "nlsbox/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlsbox::io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
    out << content;
}

std::string table2(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const std::string& header) {
    std::ostringstream os;
    if (!header.empty()) os << header << "\n";
    for (Eigen::Index i = 0; i < a.size(); ++i) os << fmt(a(i)) << " " << fmt(b(i)) << "\n";
    return os.str();
}

std::string field_table(const Eigen::VectorXd& x, const Eigen::VectorXcd& f,
                        bool add_dirichlet_ends, const std::string& header) {
    std::ostringstream os;
    if (!header.empty()) os << header << "\n";
    auto row = [&](double xx, std::complex<double> v) {
        os << fmt(xx) << " " << fmt(v.real()) << " " << fmt(v.imag()) << " " << fmt(std::norm(v))
           << "\n";
    };
    if (add_dirichlet_ends) row(0.0, {0.0, 0.0});
    for (Eigen::Index i = 0; i < x.size(); ++i) row(x(i), f(i));
    if (add_dirichlet_ends) row(1.0, {0.0, 0.0});
    return os.str();
}

Eigen::MatrixXd read_columns(const std::string& path, int cols) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double v;
        int got = 0;
        while (ss >> v) {
            vals.push_back(v);
            ++got;
        }
        if (got != 0 && got != cols)
            throw std::runtime_error("io: ragged row in " + path);
    }
    const int rows = int(vals.size()) / cols;
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = vals[i * cols + j];
    return out;
}

} // namespace nlsbox::io
