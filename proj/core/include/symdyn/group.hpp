#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

/// An element of one of the supported groups, stored as integer coordinates.
/// Unused trailing coordinates are zero. Ordering is lexicographic, which is
/// the canonical order used everywhere (scans, serialization, tie-breaks).
struct Element {
  std::array<std::int64_t, 3> c{};

  friend auto operator<=>(const Element&, const Element&) = default;
  friend bool operator==(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : e.c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

enum class GroupId { kZ1, kZ2, kHeisenberg };

class Subset;

/// A concrete countable, torsion-free amenable group: Z, Z^2, or the discrete
/// Heisenberg group H3(Z) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
class Group {
 public:
  constexpr explicit Group(GroupId id = GroupId::kZ1) : id_(id) {}

  /// Accepts "z", "z1", "z2", "h3" / "heisenberg".
  static Group parse(std::string_view name);

  GroupId id() const { return id_; }
  std::string name() const;
  int rank() const;  // number of coordinates in use
  bool abelian() const { return id_ != GroupId::kHeisenberg; }

  Element identity() const { return Element{}; }
  Element make(std::initializer_list<std::int64_t> coords) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;

  /// F_n: increasing, symmetric, contains e. Boxes [-n,n]^d for Z^d; for H3 the
  /// box |a|,|b| <= n, |c| <= n^2 symmetrized by adding its inverse.
  Subset folner(int n) const;

  friend bool operator==(const Group&, const Group&) = default;

 private:
  GroupId id_;
};

/// A finite subset of the group. Elements are kept sorted and unique.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::vector<Element> elems);
  Subset(std::initializer_list<Element> elems) : Subset(std::vector<Element>(elems)) {}

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  const Element& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Element>& elements() const { return elems_; }

  bool contains(const Element& e) const;
  /// Position of e in canonical order, or -1.
  std::ptrdiff_t rank(const Element& e) const;
  bool is_subset_of(const Subset& other) const;

  friend bool operator==(const Subset&, const Subset&) = default;
  friend auto operator<=>(const Subset& a, const Subset& b) { return a.elems_ <=> b.elems_; }

 private:
  std::vector<Element> elems_;
};

Subset set_union(const Subset& a, const Subset& b);
Subset set_intersection(const Subset& a, const Subset& b);
Subset set_difference(const Subset& a, const Subset& b);
std::size_t symmetric_difference_size(const Subset& a, const Subset& b);

enum class Side { kLeft, kRight };

/// gF (left) or Fg (right).
Subset translate_set(const Group& g, const Subset& f, const Element& by, Side side);
/// AB = {ab : a in A, b in B}.
Subset set_product(const Group& g, const Subset& a, const Subset& b);
Subset set_inverse(const Group& g, const Subset& a);

/// max over k in K of |kF symmetric-difference F| / |F|.
double invariance_defect(const Group& g, const Subset& f, const Subset& k);

/// A coordinate box [origin, origin + extents) of the group: the finite piece
/// of G on which every experiment lives. Sites are indexed row-major with the
/// last coordinate fastest, which coincides with canonical element order.
class Window {
 public:
  Window() = default;
  Window(Group group, std::vector<std::int64_t> extents, Element origin = {});
  /// [0, side)^rank.
  static Window cube(Group group, std::int64_t side);

  const Group& group() const { return group_; }
  const std::vector<std::int64_t>& extents() const { return extents_; }
  const Element& origin() const { return origin_; }
  std::size_t size() const { return size_; }

  bool contains(const Element& e) const;
  std::size_t index(const Element& e) const;  // requires contains(e)
  Element element(std::size_t index) const;
  Subset region() const;
  Window translated(const Element& by) const;

  /// For abelian groups the index shift of adding `delta` is constant.
  std::int64_t linear_offset(const Element& delta) const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  Group group_{};
  std::vector<std::int64_t> extents_;
  std::vector<std::int64_t> strides_;
  Element origin_{};
  std::size_t size_ = 0;
};

/// Window-scale lower Banach density: min over g with F_n g inside the window
/// of |A cap F_n g| / |F_n|. `mask` is indexed by window site.
double lower_banach_density_window(const Window& w, const std::vector<char>& mask, int n);
double lower_banach_density_window(const Subset& a, const Window& w, int n);

/// Sites g of the window for which F g lies inside it, in canonical order.
std::vector<Element> contained_translates(const Window& w, const Subset& f);

}  // namespace symdyn
