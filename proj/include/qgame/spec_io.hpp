#pragma once

// Game spec JSON ingestion:
//   {
//     "pairs": K,
//     "frame_a": {"kind": "fixed_xyz"} | {"kind": "planar", "angles": [...]},
//     "frame_b": {...},
//     "payoff": {"diag": [v1..v2K]} | {"full": [[...], ...]},
//     "units": "currency"
//   }
// "diag" fills the table-shaped matrix v[i][i'] = diag[i]; planar angles
// are radians. Atom numbering pairs a with a+K (matching both the
// quadrangle pairs 1-3/2-4 at K=2 and the hexagon pairs 1-4/2-5/3-6 at
// K=3).

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "qgame/errors.hpp"
#include "qgame/payoff.hpp"

namespace qgame {

class FileError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON syntax error with 1-based line/column resolved from the byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// FNV-1a 64-bit digest, hex encoded; used to stamp reports with the
/// exact spec file they came from.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

inline std::pair<int, int> line_column_at(std::string_view text,
                                          size_t byte_offset) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte_offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

namespace detail {

inline ObservableFrame frame_from_json(const nlohmann::json& j, int pairs,
                                       const std::string& path) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SpecError(path, "expected an object with a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "fixed_xyz") {
    if (pairs != 3)
      throw SpecError(path + ".kind",
                      "fixed_xyz is a 3-pair frame but pairs=" +
                          std::to_string(pairs));
    return ObservableFrame::fixed_xyz();
  }
  if (kind == "planar") {
    if (!j.contains("angles") || !j["angles"].is_array())
      throw SpecError(path + ".angles", "planar frame needs an angle array");
    std::vector<double> angles;
    for (const auto& a : j["angles"]) {
      if (!a.is_number())
        throw SpecError(path + ".angles", "angles must be numbers (radians)");
      angles.push_back(a.get<double>());
    }
    if (static_cast<int>(angles.size()) != pairs)
      throw SpecError(path + ".angles",
                      "expected " + std::to_string(pairs) + " angles, got " +
                          std::to_string(angles.size()));
    return ObservableFrame::planar(std::move(angles));
  }
  throw SpecError(path + ".kind", "unknown frame kind \"" + kind + "\"");
}

inline PayoffMatrix payoff_from_json(const nlohmann::json& j, int pairs) {
  if (!j.is_object())
    throw SpecError("payoff", "expected an object with \"diag\" or \"full\"");
  if (j.contains("diag")) {
    const auto& d = j["diag"];
    if (!d.is_array())
      throw SpecError("payoff.diag", "expected an array of numbers");
    std::vector<double> diag;
    for (const auto& v : d) {
      if (!v.is_number())
        throw SpecError("payoff.diag", "entries must be numbers");
      diag.push_back(v.get<double>());
    }
    if (static_cast<int>(diag.size()) != 2 * pairs)
      throw SpecError("payoff.diag",
                      "expected " + std::to_string(2 * pairs) +
                          " entries for pairs=" + std::to_string(pairs) +
                          ", got " + std::to_string(diag.size()));
    return PayoffMatrix::table(diag);
  }
  if (j.contains("full")) {
    const auto& f = j["full"];
    if (!f.is_array())
      throw SpecError("payoff.full", "expected a 2K x 2K array of numbers");
    std::vector<std::vector<double>> rows;
    for (const auto& row : f) {
      if (!row.is_array())
        throw SpecError("payoff.full", "expected rows of numbers");
      std::vector<double> r;
      for (const auto& v : row) {
        if (!v.is_number())
          throw SpecError("payoff.full", "entries must be numbers");
        r.push_back(v.get<double>());
      }
      rows.push_back(std::move(r));
    }
    if (static_cast<int>(rows.size()) != 2 * pairs)
      throw SpecError("payoff.full",
                      "expected " + std::to_string(2 * pairs) + " rows, got " +
                          std::to_string(rows.size()));
    for (const auto& r : rows)
      if (static_cast<int>(r.size()) != 2 * pairs)
        throw SpecError("payoff.full",
                        "expected " + std::to_string(2 * pairs) +
                            " columns per row");
    return PayoffMatrix::full(pairs, rows);
  }
  throw SpecError("payoff", "needs either \"diag\" or \"full\"");
}

}  // namespace detail

inline GameSpec game_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("", "spec root must be a JSON object");
  if (!j.contains("pairs") || !j["pairs"].is_number_integer())
    throw SpecError("pairs", "missing or non-integer");
  const int pairs = j["pairs"].get<int>();
  if (pairs < 2) throw SpecError("pairs", "must be >= 2");
  if (!j.contains("frame_a")) throw SpecError("frame_a", "missing");
  if (!j.contains("frame_b")) throw SpecError("frame_b", "missing");
  if (!j.contains("payoff")) throw SpecError("payoff", "missing");

  ObservableFrame fa = detail::frame_from_json(j["frame_a"], pairs, "frame_a");
  ObservableFrame fb = detail::frame_from_json(j["frame_b"], pairs, "frame_b");
  fa.validate();
  fb.validate();
  PayoffMatrix payoff = detail::payoff_from_json(j["payoff"], pairs);
  std::string units = "currency";
  if (j.contains("units")) {
    if (!j["units"].is_string()) throw SpecError("units", "must be a string");
    units = j["units"].get<std::string>();
  }
  return GameSpec(OrthoLattice(pairs), std::move(fa), std::move(fb),
                  std::move(payoff), std::move(units));
}

struct LoadedSpec {
  GameSpec game;
  std::string digest;  // FNV-1a of the file bytes
};

inline LoadedSpec load_game_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column_at(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(path + ": " + e.what(), line, col);
  }
  return {game_spec_from_json(j), fnv1a_hex(text)};
}

}  // namespace qgame
