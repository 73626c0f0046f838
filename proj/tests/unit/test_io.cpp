#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "sist/errors.hpp"
#include "sist/io.hpp"

using namespace sist;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sist_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV round trip") {
  const fs::path dir = scratch("csv");
  const std::vector<std::vector<double>> rows{{1.0, 0.1, 1.0 / 3.0}, {2.0, 1e-300, -7.25}};
  write_csv(dir / "t.csv", {"i", "a", "b"}, rows);
  std::vector<std::string> header;
  CHECK(read_csv(dir / "t.csv", &header) == rows);
  CHECK(header == std::vector<std::string>{"i", "a", "b"});
  CHECK_THROWS_AS(write_csv(dir / "bad.csv", {"i"}, rows), Error);
}

TEST_CASE("SHA-256 test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const fs::path dir = scratch("sha");
  std::ofstream(dir / "f.txt") << "abc";
  CHECK(sha256_file(dir / "f.txt") == sha256_hex("abc"));
}

TEST_CASE("field round trip") {
  GridField f;
  f.grid = make_grid(BoundingBox{-1.0, 1.0, -0.5, 0.5}, 0.25);
  for (std::size_t i = 0; i < f.grid.size(); ++i) f.values.push_back(std::sin(0.37 * i));
  const fs::path dir = scratch("field");
  write_field(dir / "psi", f, {{"k", 3.5}});
  const GridField g = read_field(dir / "psi");
  CHECK(g.grid.nx == f.grid.nx);
  CHECK(g.grid.ny == f.grid.ny);
  CHECK(g.grid.h == f.grid.h);
  CHECK(g.values == f.values);
  CHECK(fs::file_size(dir / "psi.bin") == 8 * f.values.size());
  std::ifstream hs(dir / "psi.json");
  const nlohmann::json j = nlohmann::json::parse(hs);
  CHECK(j["k"] == 3.5);
  CHECK(j["dtype"] == "float64");
  CHECK(j["endianness"] == "little");
}

TEST_CASE("shape JSON") {
  const ShapeConfig shapes[] = {Interval1D{10.0, 6.0}, NestedDisks{1.0, 0.2, 0.3}, NestedSquares{2.0, 1.0, 30.0},
                                Rectangle{1.0, 1.5}};
  for (const auto& s : shapes) {
    const nlohmann::json j = shape_to_json(s);
    CHECK(shape_to_json(shape_from_json(j)) == j);
  }
  const ShapeConfig d = shape_from_json({{"family", "nested_squares"}, {"a_out", 2.0}});
  CHECK(std::get<NestedSquares>(d).a_in == doctest::Approx(1.35));
  CHECK(std::get<Interval1D>(shape_from_json({{"family", "interval"}, {"L", 8.0}})).l == 4.0);
  CHECK_THROWS_AS(shape_from_json({{"family", "triangle"}}), ConfigError);
  CHECK_THROWS_AS(shape_from_json({{"family", "interval"}, {"L", "ten"}}), ConfigError);
  CHECK_THROWS_AS(shape_from_json({{"L", 1.0}}), ConfigError);
}

TEST_CASE("manifest lists checksums of its outputs") {
  const fs::path dir = scratch("manifest");
  std::ofstream(dir / "a.csv") << "x\n1\n";
  RunManifest m;
  m.tool_version = "9.9.9";
  m.config = {{"family", "interval"}};
  m.input_hashes["config"] = sha256_hex("{}");
  m.outputs = {"a.csv"};
  write_manifest(dir, m);
  std::ifstream is(dir / "manifest.json");
  const nlohmann::json j = nlohmann::json::parse(is);
  CHECK(j["tool_version"] == "9.9.9");
  CHECK(j["outputs"][0]["file"] == "a.csv");
  CHECK(j["outputs"][0]["sha256"] == sha256_hex("x\n1\n"));
  CHECK(j["config"]["family"] == "interval");
}

TEST_CASE("SIST_OUT overrides the output directory") {
  const fs::path env = fs::temp_directory_path() / "sist_unit_env_out";
  fs::remove_all(env);
  ::setenv("SIST_OUT", env.c_str(), 1);
  CHECK(resolve_output_dir("elsewhere") == env);
  CHECK(fs::is_directory(env));
  ::unsetenv("SIST_OUT");
  const fs::path req = scratch("req") / "nested" / "dir";
  CHECK(resolve_output_dir(req.string()) == req);
  CHECK(fs::is_directory(req));
}
