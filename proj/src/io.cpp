#include "trineq/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace trineq::io {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return nlohmann::json{{"dim", m.rows()}, {"re", std::move(re)},
                        {"im", std::move(im)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") ||
      !j.contains("im")) {
    throw IoError("matrix JSON needs the fields dim, re, im");
  }
  const auto n = j.at("dim").get<Eigen::Index>();
  if (n < 1) throw IoError("matrix JSON: dim must be >= 1");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != n ||
      static_cast<Eigen::Index>(im.size()) != n) {
    throw IoError("matrix JSON: row count does not match dim");
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row_re = re.at(static_cast<std::size_t>(i));
    const auto& row_im = im.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row_re.size()) != n ||
        static_cast<Eigen::Index>(row_im.size()) != n) {
      throw IoError("matrix JSON: column count does not match dim");
    }
    for (Eigen::Index jj = 0; jj < n; ++jj) {
      m(i, jj) = Complex(row_re.at(static_cast<std::size_t>(jj)).get<double>(),
                         row_im.at(static_cast<std::size_t>(jj)).get<double>());
    }
  }
  return m;
}

HermitianMatrix hermitian_from_json(const nlohmann::json& j) {
  const Matrix m = matrix_from_json(j);
  double worst = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index jj = 0; jj < m.cols(); ++jj) {
      const double dev = std::abs(m(i, jj) - std::conj(m(jj, i)));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = jj;
      }
    }
  }
  const double tol = 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff());
  if (worst > tol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: entry (" << wi << ", " << wj
        << ") deviates from the conjugate of its mirror by " << worst;
    throw IoError(msg.str());
  }
  return HermitianMatrix(m);
}

HermitianMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return hermitian_from_json(j);
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  write_text(path, matrix_to_json(m).dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace trineq::io
