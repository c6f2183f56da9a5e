#include "chroma3d/lattice.h"

namespace chroma3d {

char color_char(Color c) {
  switch (c) {
    case Color::r:
      return 'r';
    case Color::g:
      return 'g';
    case Color::b:
      return 'b';
    case Color::y:
      return 'y';
  }
  return '?';
}

std::optional<Color> parse_color(char ch) {
  switch (ch) {
    case 'r':
      return Color::r;
    case 'g':
      return Color::g;
    case 'b':
      return Color::b;
    case 'y':
      return Color::y;
    default:
      return std::nullopt;
  }
}

bool color_less(Color a, Color b) { return color_char(a) < color_char(b); }

MixedColor mix(Color a, Color b) {
  if (a == b) {
    throw std::invalid_argument("mixed color needs two distinct colors");
  }
  return color_less(a, b) ? MixedColor{a, b} : MixedColor{b, a};
}

std::string to_string(MixedColor m) { return {color_char(m.lo), color_char(m.hi)}; }

std::optional<MixedColor> parse_mixed(std::string_view s) {
  if (s.size() != 2) {
    return std::nullopt;
  }
  auto a = parse_color(s[0]);
  auto b = parse_color(s[1]);
  if (!a || !b || *a == *b) {
    return std::nullopt;
  }
  return mix(*a, *b);
}

bool contains(MixedColor m, Color c) { return m.lo == c || m.hi == c; }

std::string_view family_name(Family f) {
  return f == Family::tetrahedral ? "tetrahedral" : "cubic";
}

std::optional<Family> parse_family(std::string_view s) {
  if (s == "tetrahedral" || s == "tetra") {
    return Family::tetrahedral;
  }
  if (s == "cubic") {
    return Family::cubic;
  }
  return std::nullopt;
}

}  // namespace chroma3d
