#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "riplab/sparse_metrics.hpp"

namespace riplab {

/// Formats a double with 17 significant digits (lossless round trip).
std::string format_double(double value);

/// Dense CSV, one matrix row per line, full precision.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& A);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& A);
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

Eigen::VectorXd read_vector_csv(const std::string& path);

/// Certificate as a JSON record with fields (value, I, J, y, method);
/// indices are 0-based, y lists the coefficients aligned with J.
std::string certificate_to_json(const GammaCertificate& cert);
GammaCertificate certificate_from_json(const std::string& text, int dimension);

std::string delta_report_to_json(const DeltaReport& report);

}  // namespace riplab
