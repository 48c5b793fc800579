#ifndef NLSBOX_IO_HPP
#define NLSBOX_IO_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace nlsbox::io {

/// All numeric output uses 17 significant digits for byte-reproducibility.
std::string fmt(double v);

void write_file(const std::string& path, const std::string& content);

/// Two-column table "a b" per row.
std::string table2(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const std::string& header = "");

/// Columns x, Re f, Im f, |f|^2 with explicit zero end rows.
std::string field_table(const Eigen::VectorXd& x, const Eigen::VectorXcd& f,
                        bool add_dirichlet_ends, const std::string& header = "");

Eigen::MatrixXd read_columns(const std::string& path, int cols);

} // namespace nlsbox::io

#endif
