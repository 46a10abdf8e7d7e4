#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "localtest/adversarial.hpp"
#include "localtest/array.hpp"
#include "localtest/property.hpp"

namespace localtest {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlphabetSpec {
  enum class Kind { kInt, kTokens };
  Kind kind = Kind::kInt;
  std::vector<std::string> tokens;  // token i maps to value i

  int64_t value_of(const std::string& tok) const {
    for (size_t i = 0; i < tokens.size(); ++i)
      if (tokens[i] == tok) return static_cast<int64_t>(i);
    throw io_error("unknown token: " + tok);
  }
};

struct LoadedArray {
  Array<int64_t> values;
  AlphabetSpec alphabet;
};

// {"n":, "d":, "alphabet": {"kind":"int"} | {"kind":"tokens","tokens":[...]},
//  "data": [row-major]}
inline LoadedArray read_array_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  int32_t n = j.at("n").get<int32_t>();
  int d = j.at("d").get<int>();
  AlphabetSpec alpha;
  if (j.contains("alphabet")) {
    const auto& aj = j.at("alphabet");
    std::string kind = aj.at("kind").get<std::string>();
    if (kind == "tokens") {
      alpha.kind = AlphabetSpec::Kind::kTokens;
      alpha.tokens = aj.at("tokens").get<std::vector<std::string>>();
    } else if (kind != "int") {
      throw io_error("array json: unknown alphabet kind " + kind);
    }
  }
  std::vector<int64_t> data;
  for (const auto& v : j.at("data")) {
    if (v.is_string()) {
      if (alpha.kind != AlphabetSpec::Kind::kTokens)
        throw io_error("array json: token value in an int array");
      data.push_back(alpha.value_of(v.get<std::string>()));
    } else {
      data.push_back(v.get<int64_t>());
    }
  }
  return LoadedArray{Array<int64_t>::from_data(n, d, std::move(data)), std::move(alpha)};
}

inline LoadedArray read_array_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open " + path);
  return read_array_json(f);
}

inline void write_array_json(std::ostream& out, const Array<int64_t>& a,
                             const AlphabetSpec& alpha = {}) {
  nlohmann::json j;
  j["n"] = a.width();
  j["d"] = a.dim();
  if (alpha.kind == AlphabetSpec::Kind::kTokens) {
    j["alphabet"] = {{"kind", "tokens"}, {"tokens", alpha.tokens}};
    nlohmann::json data = nlohmann::json::array();
    for (size_t i = 0; i < a.size(); ++i)
      data.push_back(alpha.tokens.at(static_cast<size_t>(a.at_index(i))));
    j["data"] = std::move(data);
  } else {
    j["alphabet"] = {{"kind", "int"}};
    nlohmann::json data = nlohmann::json::array();
    for (size_t i = 0; i < a.size(); ++i) data.push_back(a.at_index(i));
    j["data"] = std::move(data);
  }
  out << j.dump(2) << '\n';
}

// Raw binary variant for integer alphabets: 16-byte header (magic "LTAR",
// u32 n, u32 d, u32 value-width-bytes), then row-major little-endian
// two's-complement values.
inline void write_array_binary(std::ostream& out, const Array<int64_t>& a, int width_bytes = 8) {
  if (width_bytes != 1 && width_bytes != 2 && width_bytes != 4 && width_bytes != 8)
    throw io_error("binary array: width must be 1, 2, 4, or 8 bytes");
  out.write("LTAR", 4);
  auto put_u32 = [&](uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  put_u32(static_cast<uint32_t>(a.width()));
  put_u32(static_cast<uint32_t>(a.dim()));
  put_u32(static_cast<uint32_t>(width_bytes));
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t v = static_cast<uint64_t>(a.at_index(i));
    for (int b = 0; b < width_bytes; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
  }
}

inline Array<int64_t> read_array_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "LTAR") throw io_error("binary array: bad magic");
  auto get_u32 = [&]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw io_error("binary array: truncated header");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
  };
  uint32_t n = get_u32(), d = get_u32(), width = get_u32();
  if (width != 1 && width != 2 && width != 4 && width != 8)
    throw io_error("binary array: bad value width");
  Array<int64_t> a(static_cast<int32_t>(n), static_cast<int>(d));
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t v = 0;
    for (uint32_t b = 0; b < width; ++b) {
      int ch = in.get();
      if (ch < 0) throw io_error("binary array: truncated data");
      v |= static_cast<uint64_t>(static_cast<unsigned char>(ch)) << (8 * b);
    }
    // sign-extend
    if (width < 8 && (v >> (8 * width - 1)) & 1) v |= ~uint64_t{0} << (8 * width);
    a.at_index(i) = static_cast<int64_t>(v);
  }
  return a;
}

// {"k":, "d":, "alphabet": [...], "forbidden": [[row-major pattern], ...]}
inline ExplicitFamily<int64_t> read_family_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  ExplicitFamily<int64_t> fam;
  fam.k = j.at("k").get<int32_t>();
  fam.d = j.at("d").get<int>();
  std::vector<std::string> tokens;
  for (const auto& v : j.at("alphabet")) {
    if (v.is_string()) {
      tokens.push_back(v.get<std::string>());
      fam.alphabet.push_back(static_cast<int64_t>(tokens.size()) - 1);
    } else {
      fam.alphabet.push_back(v.get<int64_t>());
    }
  }
  auto decode = [&](const nlohmann::json& v) -> int64_t {
    if (v.is_string()) {
      for (size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i] == v.get<std::string>()) return static_cast<int64_t>(i);
      throw io_error("family json: unknown token");
    }
    return v.get<int64_t>();
  };
  for (const auto& pj : j.at("forbidden")) {
    std::vector<int64_t> pat;
    for (const auto& v : pj) pat.push_back(decode(v));
    fam.patterns.insert(std::move(pat));
  }
  return fam;
}

inline ExplicitFamily<int64_t> read_family_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open " + path);
  return read_family_json(f);
}

// Adversarial instance serialization; bitsets travel hex-encoded.
inline void write_instance_json(std::ostream& out, const AdversarialInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.cells.width();
  j["d"] = inst.cells.dim();
  j["k"] = inst.k;
  j["kind"] = kind_name(inst.kind);
  j["variant"] = variant_name(inst.variant);
  auto coord_json = [](const Coord& c) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < c.dim(); ++i) a.push_back(c[i]);
    return a;
  };
  j["ell"] = coord_json(inst.ell);
  j["u"] = coord_json(inst.upper);
  nlohmann::json cells = nlohmann::json::array();
  for (size_t i = 0; i < inst.cells.size(); ++i) {
    const GravityValue& v = inst.cells.at_index(i);
    nlohmann::json cj;
    cj["a1"] = coord_json(v.self_ptr);
    cj["a2"] = coord_json(v.center_ptr);
    if (inst.variant == GravityVariant::kSet) {
      cj["bits"] = v.data.bits();
      cj["set"] = v.data.to_hex();
    } else {
      cj["zeros"] = v.zeros;
      cj["ones"] = v.ones;
    }
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  out << j.dump() << '\n';
}

inline AdversarialInstance read_instance_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  int32_t n = j.at("n").get<int32_t>();
  int d = j.at("d").get<int>();
  AdversarialInstance inst(n, d);
  inst.k = j.at("k").get<int32_t>();
  inst.kind = j.at("kind").get<std::string>() == "accept" ? GravityKind::kAccept : GravityKind::kReject;
  inst.variant =
      j.at("variant").get<std::string>() == "set" ? GravityVariant::kSet : GravityVariant::kCounting;
  auto coord_from = [d](const nlohmann::json& a) {
    Coord c = Coord::filled(d, 1);
    for (int i = 0; i < d; ++i) c[i] = a.at(i).get<int32_t>();
    return c;
  };
  inst.ell = coord_from(j.at("ell"));
  inst.upper = coord_from(j.at("u"));
  const auto& cells = j.at("cells");
  if (cells.size() != inst.cells.size()) throw io_error("instance json: wrong cell count");
  for (size_t i = 0; i < inst.cells.size(); ++i) {
    const auto& cj = cells.at(i);
    GravityValue v;
    v.self_ptr = coord_from(cj.at("a1"));
    v.center_ptr = coord_from(cj.at("a2"));
    if (inst.variant == GravityVariant::kSet)
      v.data = DynBitset::from_hex(cj.at("bits").get<int>(), cj.at("set").get<std::string>());
    else {
      v.zeros = cj.at("zeros").get<int32_t>();
      v.ones = cj.at("ones").get<int32_t>();
    }
    inst.cells.at_index(i) = v;
  }
  return inst;
}

}  // namespace localtest
