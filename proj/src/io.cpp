#include "sist/io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "sist/errors.hpp"

namespace sist {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xFFu) << (8 * (7 - b));
    return r;
  }
  return v;
}

double number_at(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("shape parameter '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ofstream os = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error("CSV row width does not match the header of " + path.string());
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
}

std::vector<std::vector<double>> read_csv(const fs::path& path, std::vector<std::string>* header) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV file " + path.string());
  if (header) {
    header->clear();
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return sha256_hex(ss.str());
}

void write_field(const fs::path& stem, const GridField& field, const json& extra) {
  const GridSpec& g = field.grid;
  if (field.values.size() != g.size()) throw ValidationError("field size does not match its grid");
  fs::path bin = stem;
  bin += ".bin";
  fs::path hdr = stem;
  hdr += ".json";
  {
    std::ofstream os = open_out(bin, std::ios::out | std::ios::binary);
    for (double v : field.values) {
      const std::uint64_t w = to_little(std::bit_cast<std::uint64_t>(v));
      os.write(reinterpret_cast<const char*>(&w), sizeof w);
    }
  }
  json j = {{"file", bin.filename().string()},
            {"dtype", "float64"},
            {"endianness", "little"},
            {"ordering", "row-major, y outer, x inner"},
            {"nx", g.nx},
            {"ny", g.ny},
            {"h", g.h},
            {"center", {g.cx, g.cy}},
            {"bbox", {g.x(0), g.y(0), g.x(g.nx - 1), g.y(g.ny - 1)}}};
  if (extra.is_object())
    for (const auto& [k, v] : extra.items()) j[k] = v;
  open_out(hdr) << j.dump(2) << '\n';
}

GridField read_field(const fs::path& stem) {
  fs::path hdr = stem;
  hdr += ".json";
  std::ifstream hs(hdr);
  if (!hs) throw Error("cannot open " + hdr.string());
  const json j = json::parse(hs);
  GridField f;
  f.grid.nx = j.at("nx").get<int>();
  f.grid.ny = j.at("ny").get<int>();
  f.grid.h = j.at("h").get<double>();
  f.grid.cx = j.at("center").at(0).get<double>();
  f.grid.cy = j.at("center").at(1).get<double>();
  std::ifstream bs(stem.parent_path() / j.at("file").get<std::string>(), std::ios::binary);
  if (!bs) throw Error("cannot open field data for " + stem.string());
  f.values.resize(f.grid.size());
  for (double& v : f.values) {
    std::uint64_t w = 0;
    if (!bs.read(reinterpret_cast<char*>(&w), sizeof w)) throw Error("field data shorter than its header claims");
    v = std::bit_cast<double>(to_little(w));
  }
  return f;
}

std::vector<std::string> shape_keys(Family family) {
  switch (family) {
    case Family::Interval1D: return {"L", "l"};
    case Family::NestedDisks: return {"R", "r", "s"};
    case Family::NestedSquares: return {"a_out", "a_in", "theta"};
    case Family::Rectangle: return {"a", "b"};
  }
  return {};
}

ShapeConfig shape_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw ConfigError("shape needs a string 'family'");
  Family fam{};
  try {
    fam = parse_family(j["family"].get<std::string>());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  auto get = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = number_at(j, key);
  };
  switch (fam) {
    case Family::Interval1D: {
      Interval1D s;
      get("L", s.L);
      s.l = s.L / 2.0;
      get("l", s.l);
      return s;
    }
    case Family::NestedDisks: {
      NestedDisks s;
      get("R", s.R);
      s.r = s.R / 4.0;
      get("r", s.r);
      get("s", s.s);
      return s;
    }
    case Family::NestedSquares: {
      NestedSquares s;
      get("a_out", s.a_out);
      s.a_in = s.a_out / 2.0 * 1.35;
      get("a_in", s.a_in);
      get("theta", s.theta);
      return s;
    }
    case Family::Rectangle: {
      Rectangle s;
      get("a", s.a);
      s.b = s.a;
      get("b", s.b);
      return s;
    }
  }
  throw ConfigError("unhandled family");
}

json shape_to_json(const ShapeConfig& shape) {
  json j = {{"family", std::string(family_name(family_of(shape)))}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval1D>) {
          j["L"] = s.L;
          j["l"] = s.l;
        } else if constexpr (std::is_same_v<T, NestedDisks>) {
          j["R"] = s.R;
          j["r"] = s.r;
          j["s"] = s.s;
        } else if constexpr (std::is_same_v<T, NestedSquares>) {
          j["a_out"] = s.a_out;
          j["a_in"] = s.a_in;
          j["theta"] = s.theta;
        } else {
          j["a"] = s.a;
          j["b"] = s.b;
        }
      },
      shape);
  return j;
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  json outputs = json::array();
  for (const auto& name : m.outputs) outputs.push_back({{"file", name}, {"sha256", sha256_file(dir / name)}});
  json j = {{"tool", "sist"},
            {"tool_version", m.tool_version},
            {"config", m.config},
            {"input_hashes", m.input_hashes},
            {"outputs", outputs},
            {"wall_time_s", m.wall_time_s}};
  open_out(dir / "manifest.json") << j.dump(2) << '\n';
}

fs::path resolve_output_dir(const std::string& requested) {
  fs::path dir = requested.empty() ? fs::path("out") : fs::path(requested);
  if (const char* env = std::getenv("SIST_OUT"); env && *env) dir = env;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

}  // namespace sist
