#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "silhlab/mesh.hpp"
#include "silhlab/util.hpp"

namespace silhlab {

struct ParseError : MeshError {
  ParseError(const std::string& msg, int line)
      : MeshError("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  int line_number;
};

struct NonTriangularFace : MeshError {
  using MeshError::MeshError;
};

namespace detail {

// Logical line: 1-based number, "#" comments stripped, blank lines skipped.
struct TokenLine {
  int number;
  std::vector<std::string_view> tokens;
};

inline std::vector<TokenLine> tokenize_lines(std::string_view text) {
  std::vector<TokenLine> out;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    TokenLine tl{line_no, {}};
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tl.tokens.push_back(line.substr(start, i - start));
    }
    if (!tl.tokens.empty()) out.push_back(std::move(tl));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return out;
}

inline double parse_double(std::string_view tok, int line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + std::string(tok) + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite coordinate", line);
  return v;
}

inline long parse_int(std::string_view tok, int line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

/// ASCII OFF: header "OFF", counts "V F E" (E ignored), V vertex lines,
/// F face lines "3 i j k".
inline TriangleMesh load_off(std::string_view text) {
  auto lines = detail::tokenize_lines(text);
  size_t li = 0;
  auto next = [&](const char* what) -> const detail::TokenLine& {
    if (li >= lines.size()) throw ParseError(std::string("unexpected end of input, expected ") + what,
                                             lines.empty() ? 1 : lines.back().number);
    return lines[li++];
  };

  const auto& header = next("OFF header");
  if (header.tokens.size() != 1 || header.tokens[0] != "OFF")
    throw ParseError("expected OFF header", header.number);

  const auto& counts = next("vertex/face counts");
  if (counts.tokens.size() != 3) throw ParseError("expected 'V F E' counts", counts.number);
  long nv = detail::parse_int(counts.tokens[0], counts.number);
  long nf = detail::parse_int(counts.tokens[1], counts.number);
  detail::parse_int(counts.tokens[2], counts.number);
  if (nv < 0 || nf < 0) throw ParseError("negative count", counts.number);

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    const auto& tl = next("vertex line");
    if (tl.tokens.size() != 3) throw ParseError("expected 'x y z'", tl.number);
    mesh.vertices.push_back({detail::parse_double(tl.tokens[0], tl.number),
                             detail::parse_double(tl.tokens[1], tl.number),
                             detail::parse_double(tl.tokens[2], tl.number)});
  }
  mesh.faces.reserve(static_cast<size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    const auto& tl = next("face line");
    if (tl.tokens.empty()) throw ParseError("empty face line", tl.number);
    long arity = detail::parse_int(tl.tokens[0], tl.number);
    if (arity != 3)
      throw NonTriangularFace("line " + std::to_string(tl.number) + ": face with " +
                              std::to_string(arity) + " vertices, only triangles are supported");
    if (tl.tokens.size() != 4) throw ParseError("expected '3 i j k'", tl.number);
    std::array<int, 3> fc{};
    for (int k = 0; k < 3; ++k) {
      long idx = detail::parse_int(tl.tokens[static_cast<size_t>(k + 1)], tl.number);
      if (idx < 0 || idx >= nv) throw ParseError("vertex index out of range", tl.number);
      fc[static_cast<size_t>(k)] = static_cast<int>(idx);
    }
    mesh.faces.push_back(fc);
  }
  if (li != lines.size()) throw ParseError("trailing content", lines[li].number);
  return mesh;
}

inline std::string save_off(const TriangleMesh& mesh) {
  std::string out = "OFF\n";
  out += std::to_string(mesh.vertices.size());
  out += ' ';
  out += std::to_string(mesh.faces.size());
  out += " 0\n";
  for (const Vec3& v : mesh.vertices) {
    out += fmt_g17(v.x);
    out += ' ';
    out += fmt_g17(v.y);
    out += ' ';
    out += fmt_g17(v.z);
    out += '\n';
  }
  for (const auto& f : mesh.faces) {
    out += "3 ";
    out += std::to_string(f[0]);
    out += ' ';
    out += std::to_string(f[1]);
    out += ' ';
    out += std::to_string(f[2]);
    out += '\n';
  }
  return out;
}

/// Wavefront OBJ subset: "v x y z" and triangular "f" lines. Negative indices
/// are relative to the vertices defined so far; "a/b/c" references keep only
/// the vertex index; vt/vn/materials and other statements are ignored.
inline TriangleMesh load_obj(std::string_view text) {
  TriangleMesh mesh;
  for (const auto& tl : detail::tokenize_lines(text)) {
    std::string_view kw = tl.tokens[0];
    if (kw == "v") {
      if (tl.tokens.size() != 4) throw ParseError("expected 'v x y z'", tl.number);
      mesh.vertices.push_back({detail::parse_double(tl.tokens[1], tl.number),
                               detail::parse_double(tl.tokens[2], tl.number),
                               detail::parse_double(tl.tokens[3], tl.number)});
    } else if (kw == "f") {
      if (tl.tokens.size() != 4)
        throw NonTriangularFace("line " + std::to_string(tl.number) + ": face with " +
                                std::to_string(tl.tokens.size() - 1) +
                                " vertices, only triangles are supported");
      std::array<int, 3> fc{};
      long defined = static_cast<long>(mesh.vertices.size());
      for (int k = 0; k < 3; ++k) {
        std::string_view ref = tl.tokens[static_cast<size_t>(k + 1)];
        if (size_t slash = ref.find('/'); slash != std::string_view::npos) ref = ref.substr(0, slash);
        long idx = detail::parse_int(ref, tl.number);
        if (idx < 0) idx += defined;         // relative reference
        else if (idx == 0) throw ParseError("vertex index 0 is invalid", tl.number);
        else idx -= 1;                       // OBJ indices are 1-based
        if (idx < 0 || idx >= defined) throw ParseError("vertex index out of range", tl.number);
        fc[static_cast<size_t>(k)] = static_cast<int>(idx);
      }
      mesh.faces.push_back(fc);
    }
  }
  return mesh;
}

/// Loads by extension: .off or .obj.
inline TriangleMesh load_mesh_file(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  std::string text = read_file(path);
  if (ends_with(".off") || ends_with(".OFF")) return load_off(text);
  if (ends_with(".obj") || ends_with(".OBJ")) return load_obj(text);
  throw FileError("unsupported mesh extension (want .off or .obj): " + path);
}

}  // namespace silhlab
