#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cwb {

// An element of a finite Boolean algebra: the set of atoms below it, as a
// bitmask over atom indices.
using BAElement = std::uint32_t;

// The powerset algebra P(n) of an n-atom set. Every finite Boolean algebra is
// isomorphic to one of these, so this is also the carrier of CL(X) for finite X.
class FiniteBoolAlg {
public:
  static constexpr std::size_t kMaxAtoms = 24;

  FiniteBoolAlg() = default;
  explicit FiniteBoolAlg(std::size_t atoms);

  std::size_t atom_count() const { return atoms_; }
  std::uint64_t size() const { return std::uint64_t{1} << atoms_; }

  BAElement bottom() const { return 0; }
  BAElement top() const { return atoms_ == 0 ? 0 : static_cast<BAElement>(size() - 1); }
  BAElement atom(std::size_t i) const { return BAElement{1} << i; }

  BAElement meet(BAElement a, BAElement b) const { return a & b; }
  BAElement join(BAElement a, BAElement b) const { return a | b; }
  BAElement complement(BAElement a) const { return top() & ~a; }
  bool leq(BAElement a, BAElement b) const { return (a & ~b) == 0; }
  bool contains(BAElement a) const { return (a & ~top()) == 0; }

  std::vector<BAElement> elements() const;

  friend bool operator==(const FiniteBoolAlg&, const FiniteBoolAlg&) = default;

private:
  std::size_t atoms_ = 0;
};

// Discrete finite space {0, ..., points-1}.
struct FiniteSpace {
  std::size_t points = 0;
  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;
};

// A total map between finite spaces, given by the image of each point.
struct SpaceMap {
  FiniteSpace domain;
  FiniteSpace codomain;
  std::vector<std::size_t> image;

  bool is_injective() const;
  bool is_surjective() const;
  // (*this after inner): domain of inner -> codomain of *this.
  SpaceMap after(const SpaceMap& inner) const;
};

// Homomorphism CL(Y) -> CL(X) induced by a point map X -> Y, stored at atom
// level: target atom x is sent into source atom point_map[x].
class BAHomomorphism {
public:
  BAHomomorphism(FiniteBoolAlg source, FiniteBoolAlg target, std::vector<std::size_t> point_map);

  const FiniteBoolAlg& source() const { return source_; }
  const FiniteBoolAlg& target() const { return target_; }
  const std::vector<std::size_t>& point_map() const { return point_map_; }

  BAElement apply(BAElement c) const;

  // Exhaustive checks over all source elements.
  bool preserves_operations() const;
  bool is_injective() const;
  bool is_surjective() const;

  // (*this after inner): inner's source -> this target.
  BAHomomorphism after(const BAHomomorphism& inner) const;

  friend bool operator==(const BAHomomorphism&, const BAHomomorphism&) = default;

private:
  FiniteBoolAlg source_;
  FiniteBoolAlg target_;
  std::vector<std::size_t> point_map_;
};

struct Subalgebra {
  FiniteBoolAlg algebra;
  // Image in the parent of each atom of `algebra`.
  std::vector<BAElement> atom_images;

  BAElement embed(BAElement e) const;
};

Subalgebra generate_subalgebra(const FiniteBoolAlg& parent, const std::vector<BAElement>& generators);

// Ultrafilters of a finite algebra are principal at atoms: one point per atom.
FiniteSpace stone_space(const FiniteBoolAlg& b);

FiniteSpace stone_space(const Subalgebra& b);

FiniteBoolAlg clopen_algebra(const FiniteSpace& x);

// Preimage homomorphism C -> f^{-1}[C], from CL(codomain) to CL(domain).
BAHomomorphism dual_morphism(const SpaceMap& f);

// Builds an atom bijection and checks it is a homomorphism on every element.
bool isomorphic(const FiniteBoolAlg& a, const FiniteBoolAlg& b);
bool isomorphic(const Subalgebra& a, const FiniteBoolAlg& b);

}  // namespace cwb
