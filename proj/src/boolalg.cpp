#include "cwb/boolalg.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "cwb/errors.hpp"

namespace cwb {

FiniteBoolAlg::FiniteBoolAlg(std::size_t atoms) : atoms_(atoms) {
  if (atoms > kMaxAtoms) throw PreconditionError("finite Boolean algebra limited to 24 atoms");
}

std::vector<BAElement> FiniteBoolAlg::elements() const {
  std::vector<BAElement> out(size());
  for (std::uint64_t i = 0; i < size(); ++i) out[i] = static_cast<BAElement>(i);
  return out;
}

bool SpaceMap::is_injective() const {
  std::vector<bool> hit(codomain.points, false);
  for (auto y : image) {
    if (hit[y]) return false;
    hit[y] = true;
  }
  return true;
}

bool SpaceMap::is_surjective() const {
  std::vector<bool> hit(codomain.points, false);
  for (auto y : image) hit[y] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

SpaceMap SpaceMap::after(const SpaceMap& inner) const {
  if (inner.codomain != domain) throw PreconditionError("composing maps with mismatched spaces");
  SpaceMap r{inner.domain, codomain, {}};
  r.image.reserve(inner.image.size());
  for (auto y : inner.image) r.image.push_back(image[y]);
  return r;
}

BAHomomorphism::BAHomomorphism(FiniteBoolAlg source, FiniteBoolAlg target, std::vector<std::size_t> point_map)
    : source_(source), target_(target), point_map_(std::move(point_map)) {
  if (point_map_.size() != target_.atom_count()) {
    throw PreconditionError("point map must cover every target atom");
  }
  for (auto s : point_map_) {
    if (s >= source_.atom_count()) throw PreconditionError("point map leaves the source space");
  }
}

BAElement BAHomomorphism::apply(BAElement c) const {
  BAElement r = 0;
  for (std::size_t x = 0; x < point_map_.size(); ++x) {
    if (c >> point_map_[x] & 1U) r |= BAElement{1} << x;
  }
  return r;
}

bool BAHomomorphism::preserves_operations() const {
  if (apply(source_.bottom()) != target_.bottom() || apply(source_.top()) != target_.top()) return false;
  const auto elems = source_.elements();
  for (auto a : elems) {
    if (apply(source_.complement(a)) != target_.complement(apply(a))) return false;
    for (auto b : elems) {
      if (apply(source_.meet(a, b)) != target_.meet(apply(a), apply(b))) return false;
      if (apply(source_.join(a, b)) != target_.join(apply(a), apply(b))) return false;
    }
  }
  return true;
}

bool BAHomomorphism::is_injective() const {
  // A homomorphism is injective iff its kernel is {0}.
  for (auto a : source_.elements()) {
    if (a != 0 && apply(a) == 0) return false;
  }
  return true;
}

bool BAHomomorphism::is_surjective() const {
  std::vector<bool> hit(target_.size(), false);
  for (auto a : source_.elements()) hit[apply(a)] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

BAHomomorphism BAHomomorphism::after(const BAHomomorphism& inner) const {
  if (inner.target_ != source_) throw PreconditionError("composing homomorphisms with mismatched algebras");
  std::vector<std::size_t> composed(point_map_.size());
  for (std::size_t x = 0; x < point_map_.size(); ++x) composed[x] = inner.point_map_[point_map_[x]];
  return BAHomomorphism(inner.source_, target_, std::move(composed));
}

BAElement Subalgebra::embed(BAElement e) const {
  BAElement r = 0;
  for (std::size_t i = 0; i < atom_images.size(); ++i) {
    if (e >> i & 1U) r |= atom_images[i];
  }
  return r;
}

Subalgebra generate_subalgebra(const FiniteBoolAlg& parent, const std::vector<BAElement>& generators) {
  for (auto g : generators) {
    if (!parent.contains(g)) throw PreconditionError("generator is not an element of the parent algebra");
  }
  // Atoms of the generated subalgebra are the nonempty cells: parent atoms
  // grouped by their membership pattern across the generators.
  std::map<std::vector<bool>, BAElement> cells;
  std::vector<std::vector<bool>> order;
  for (std::size_t a = 0; a < parent.atom_count(); ++a) {
    std::vector<bool> pattern;
    pattern.reserve(generators.size());
    for (auto g : generators) pattern.push_back((g >> a & 1U) != 0);
    auto [it, inserted] = cells.emplace(pattern, 0);
    if (inserted) order.push_back(pattern);
    it->second |= parent.atom(a);
  }
  Subalgebra s{FiniteBoolAlg(order.size()), {}};
  for (const auto& p : order) s.atom_images.push_back(cells.at(p));
  return s;
}

FiniteSpace stone_space(const FiniteBoolAlg& b) { return FiniteSpace{b.atom_count()}; }

FiniteSpace stone_space(const Subalgebra& b) { return stone_space(b.algebra); }

FiniteBoolAlg clopen_algebra(const FiniteSpace& x) { return FiniteBoolAlg(x.points); }

BAHomomorphism dual_morphism(const SpaceMap& f) {
  if (f.image.size() != f.domain.points) throw PreconditionError("map must be total on its domain");
  for (auto y : f.image) {
    if (y >= f.codomain.points) throw PreconditionError("map leaves its codomain");
  }
  return BAHomomorphism(clopen_algebra(f.codomain), clopen_algebra(f.domain), f.image);
}

namespace {

bool atom_bijection_is_iso(const FiniteBoolAlg& a, const FiniteBoolAlg& b,
                           const std::vector<BAElement>& atom_images_in_b) {
  auto map = [&](BAElement e) {
    BAElement r = 0;
    for (std::size_t i = 0; i < a.atom_count(); ++i) {
      if (e >> i & 1U) r |= atom_images_in_b[i];
    }
    return r;
  };
  std::vector<bool> hit(b.size(), false);
  for (auto x : a.elements()) {
    const BAElement fx = map(x);
    if (!b.contains(fx) || hit[fx]) return false;
    hit[fx] = true;
    if (map(a.complement(x)) != b.complement(fx)) return false;
    for (auto y : a.elements()) {
      if (map(a.meet(x, y)) != b.meet(fx, map(y))) return false;
    }
  }
  return true;
}

}  // namespace

bool isomorphic(const FiniteBoolAlg& a, const FiniteBoolAlg& b) {
  if (a.atom_count() != b.atom_count()) return false;
  std::vector<BAElement> images;
  for (std::size_t i = 0; i < a.atom_count(); ++i) images.push_back(b.atom(i));
  return atom_bijection_is_iso(a, b, images);
}

bool isomorphic(const Subalgebra& a, const FiniteBoolAlg& b) { return isomorphic(a.algebra, b); }

}  // namespace cwb
