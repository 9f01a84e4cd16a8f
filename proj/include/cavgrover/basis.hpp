#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cavgrover/errors.hpp"

namespace cavgrover {

/// Reduction level of the single-photon sector.
///
/// Basis orderings are fixed:
///   Full        g'_1..g'_N, e_1..e_N, (g,1), (g,0)   dimension 2N+2
///   Collective5 g'_u, g'_N, (g,1), e_u, e_N           dimension 5
///   Effective3  g'_N, gamma0, g'_u                    dimension 3
///   Adiabatic3  +, 0, -                               dimension 3
enum class Level { Full, Collective5, Effective3, Adiabatic3 };

enum class Tag {
  GPrime,   // |g'_j,0>, Full only
  Excited,  // |e_j,0>, Full only
  Photon,   // |g,1>
  Ground,   // |g,0>, Full only; uncoupled from the single-photon block
  GPrimeU,
  GPrimeN,
  ExcitedU,
  ExcitedN,
  Gamma0,
  Plus,
  Zero,
  Minus,
};

/// A basis state of one reduction level. Atom indices run 1..N and are only
/// meaningful for the GPrime/Excited tags of the Full level; the marked atom is N.
struct BasisLabel {
  Level level;
  Tag tag;
  int atom = 0;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;

  static BasisLabel gprime(int j) { return {Level::Full, Tag::GPrime, j}; }
  static BasisLabel excited(int j) { return {Level::Full, Tag::Excited, j}; }
  static BasisLabel photon(Level level = Level::Full) { return {level, Tag::Photon, 0}; }
  static BasisLabel ground() { return {Level::Full, Tag::Ground, 0}; }
  static BasisLabel collective(Tag tag) { return {Level::Collective5, tag, 0}; }
  static BasisLabel effective(Tag tag) { return {Level::Effective3, tag, 0}; }
  static BasisLabel adiabatic(Tag tag) { return {Level::Adiabatic3, tag, 0}; }
};

inline std::string_view level_name(Level level) {
  switch (level) {
    case Level::Full: return "full";
    case Level::Collective5: return "collective5";
    case Level::Effective3: return "effective3";
    case Level::Adiabatic3: return "adiabatic3";
  }
  return "?";
}

inline Level parse_level(std::string_view name) {
  for (Level l : {Level::Full, Level::Collective5, Level::Effective3, Level::Adiabatic3})
    if (level_name(l) == name) return l;
  throw InvalidArgument("unknown basis level '" + std::string(name) + "'");
}

inline void require_atom_count(int n_atoms) {
  if (n_atoms < 2)
    throw InvalidParameter("atom count N must be >= 2, got " + std::to_string(n_atoms));
}

inline std::size_t dimension(Level level, int n_atoms) {
  switch (level) {
    case Level::Full:
      require_atom_count(n_atoms);
      return static_cast<std::size_t>(2 * n_atoms + 2);
    case Level::Collective5: return 5;
    case Level::Effective3:
    case Level::Adiabatic3: return 3;
  }
  return 0;
}

namespace detail {

inline const std::vector<Tag>& fixed_tags(Level level) {
  static const std::vector<Tag> collective{Tag::GPrimeU, Tag::GPrimeN, Tag::Photon, Tag::ExcitedU,
                                           Tag::ExcitedN};
  static const std::vector<Tag> effective{Tag::GPrimeN, Tag::Gamma0, Tag::GPrimeU};
  static const std::vector<Tag> adiabatic{Tag::Plus, Tag::Zero, Tag::Minus};
  static const std::vector<Tag> none;
  switch (level) {
    case Level::Collective5: return collective;
    case Level::Effective3: return effective;
    case Level::Adiabatic3: return adiabatic;
    case Level::Full: break;
  }
  return none;
}

}  // namespace detail

/// Position of a label in its level's basis; throws if the label is not
/// representable at that level.
inline std::size_t index_of(const BasisLabel& label, int n_atoms) {
  if (label.level == Level::Full) {
    require_atom_count(n_atoms);
    const bool indexed = label.tag == Tag::GPrime || label.tag == Tag::Excited;
    if (indexed && (label.atom < 1 || label.atom > n_atoms))
      throw InvalidArgument("atom index " + std::to_string(label.atom) + " outside 1.." +
                            std::to_string(n_atoms));
    switch (label.tag) {
      case Tag::GPrime: return static_cast<std::size_t>(label.atom - 1);
      case Tag::Excited: return static_cast<std::size_t>(n_atoms + label.atom - 1);
      case Tag::Photon: return static_cast<std::size_t>(2 * n_atoms);
      case Tag::Ground: return static_cast<std::size_t>(2 * n_atoms + 1);
      default: break;
    }
    throw InvalidArgument("label not representable at the full level");
  }
  const auto& tags = detail::fixed_tags(label.level);
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == label.tag) return i;
  throw InvalidArgument("label not representable at level " + std::string(level_name(label.level)));
}

inline BasisLabel label_at(Level level, std::size_t index, int n_atoms) {
  if (index >= dimension(level, n_atoms)) throw InvalidArgument("basis index out of range");
  if (level == Level::Full) {
    const auto n = static_cast<std::size_t>(n_atoms);
    if (index < n) return BasisLabel::gprime(static_cast<int>(index + 1));
    if (index < 2 * n) return BasisLabel::excited(static_cast<int>(index - n + 1));
    return index == 2 * n ? BasisLabel::photon() : BasisLabel::ground();
  }
  return {level, detail::fixed_tags(level)[index], 0};
}

/// Whitespace-free label used in the text formats.
inline std::string label_name(const BasisLabel& label) {
  switch (label.tag) {
    case Tag::GPrime: return "g'_" + std::to_string(label.atom) + ",0";
    case Tag::Excited: return "e_" + std::to_string(label.atom) + ",0";
    case Tag::Photon: return "g,1";
    case Tag::Ground: return "g,0";
    case Tag::GPrimeU: return "g'_u,0";
    case Tag::GPrimeN: return "g'_N,0";
    case Tag::ExcitedU: return "e_u,0";
    case Tag::ExcitedN: return "e_N,0";
    case Tag::Gamma0: return "gamma0";
    case Tag::Plus: return "+";
    case Tag::Zero: return "0";
    case Tag::Minus: return "-";
  }
  return "?";
}

inline std::vector<BasisLabel> basis_labels(Level level, int n_atoms) {
  std::vector<BasisLabel> out;
  const std::size_t dim = dimension(level, n_atoms);
  out.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) out.push_back(label_at(level, i, n_atoms));
  return out;
}

}  // namespace cavgrover
