#include "riplab/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "riplab/errors.hpp"

namespace riplab {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out << ',';
      out << format_double(A(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& A) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  write_matrix_csv(out, A);
  if (!out) throw io_error("write to '" + path + "' failed");
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string cell = line.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw io_error("malformed CSV cell '" + cell + "'");
      }
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw io_error("ragged CSV: inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw io_error("empty CSV matrix");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return A;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return read_matrix_csv(in);
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  Eigen::MatrixXd A = read_matrix_csv(path);
  if (A.cols() == 1) return A.col(0);
  if (A.rows() == 1) return A.row(0).transpose();
  throw io_error("'" + path + "' is not a vector");
}

std::string certificate_to_json(const GammaCertificate& cert) {
  nlohmann::ordered_json j;
  j["value"] = cert.value;
  j["I"] = cert.rows;
  j["J"] = cert.support;
  std::vector<double> y;
  y.reserve(cert.support.size());
  for (int idx : cert.support) y.push_back(cert.direction[idx]);
  j["y"] = y;
  j["method"] = to_string(cert.method);
  return j.dump();
}

GammaCertificate certificate_from_json(const std::string& text, int dimension) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw io_error(std::string("bad certificate JSON: ") + e.what());
  }
  GammaCertificate cert;
  try {
    cert.value = j.at("value").get<double>();
    cert.rows = j.at("I").get<std::vector<int>>();
    cert.support = j.at("J").get<std::vector<int>>();
    const auto y = j.at("y").get<std::vector<double>>();
    if (y.size() != cert.support.size())
      throw io_error("certificate: y and J length mismatch");
    cert.direction = Eigen::VectorXd::Zero(dimension);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const int idx = cert.support[i];
      if (idx < 0 || idx >= dimension) throw io_error("certificate: support index out of range");
      cert.direction[idx] = y[i];
    }
    const std::string method = j.at("method").get<std::string>();
    cert.method = method == "exact" ? GammaMethod::exact : GammaMethod::heuristic;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("bad certificate JSON: ") + e.what());
  }
  return cert;
}

std::string delta_report_to_json(const DeltaReport& report) {
  nlohmann::ordered_json j;
  j["value"] = report.value;
  j["J"] = report.support;
  j["eigenvalue"] = report.eigenvalue;
  j["side"] = report.side == DeltaSide::upper ? "upper" : "lower";
  j["method"] = report.method == DeltaMethod::exact ? "exact" : "support_sampled";
  j["supports_checked"] = report.supports_checked;
  return j.dump();
}

}  // namespace riplab
