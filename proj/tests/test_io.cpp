#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

#include "trineq/io.hpp"
#include "trineq/probes.hpp"

using namespace trineq;
using namespace trineq::testing;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

TEST_CASE("matrix json round trip is bit exact") {
  std::mt19937_64 rng(2);
  const HermitianMatrix h = random_hermitian(4, 1.0, rng);
  TempFile f("trineq_roundtrip.json");
  io::save_matrix(h.matrix(), f.path);
  const HermitianMatrix back = io::load_matrix(f.path);
  CHECK(back.matrix() == h.matrix());
}

TEST_CASE("matrix json validation") {
  nlohmann::json j;
  j["dim"] = 2;
  j["re"] = {{1.0, 2.0}, {2.0, 1.0}};
  j["im"] = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK(io::hermitian_from_json(j).dim() == 2);

  // Hermiticity violation beyond tolerance names the worst entry.
  j["re"] = {{1.0, 2.0}, {2.5, 1.0}};
  try {
    io::hermitian_from_json(j);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
  }

  nlohmann::json bad;
  bad["dim"] = 2;
  bad["re"] = {{1.0, 2.0}};
  bad["im"] = {{0.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(io::hermitian_from_json(bad), IoError);
  CHECK_THROWS_AS(io::matrix_from_json(nlohmann::json::array()), IoError);
}

TEST_CASE("imaginary parts survive the round trip") {
  Matrix m(2, 2);
  m << Complex(1.0, 0.0), Complex(0.25, -0.125), Complex(0.25, 0.125),
      Complex(2.0, 0.0);
  const nlohmann::json j = io::matrix_to_json(m);
  CHECK(io::matrix_from_json(j) == m);
}

TEST_CASE("report csv has one row per trial") {
  const TensorSpace space({2, 2});
  const auto rep = probes::verify_minkowski2(5, space, PExponent(2.0), 3);
  const std::string csv = rep.to_csv();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "trial,seed,slack");
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
    if (rows == 1) CHECK(line.rfind("0,3,", 0) == 0);  // seed + trial index
  }
  CHECK(rows == 5);
}

TEST_CASE("report json includes the slack vector and passes through dumps") {
  const TensorSpace space({2, 2});
  const auto rep = probes::verify_minkowski2(5, space, PExponent(2.0), 3);
  const nlohmann::json j = rep.to_json();
  CHECK(j["slacks"].size() == 5);
  CHECK(j["name"] == "minkowski2");
  CHECK(j["passed"] == true);
  CHECK_FALSE(j.contains("timestamp"));  // added only by the CLI
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(io::load_matrix("/nonexistent/trineq.json"), IoError);
}
