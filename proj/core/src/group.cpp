#include "symdyn/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <iterator>

#include "symdyn/error.hpp"

namespace symdyn {

Group Group::parse(std::string_view name) {
  if (name == "z" || name == "z1" || name == "Z") return Group(GroupId::kZ1);
  if (name == "z2" || name == "Z2") return Group(GroupId::kZ2);
  if (name == "h3" || name == "heisenberg" || name == "H3") return Group(GroupId::kHeisenberg);
  fail(ErrorCode::kUnknownGroup, "unknown group id '" + std::string(name) + "'");
}

std::string Group::name() const {
  switch (id_) {
    case GroupId::kZ1: return "z1";
    case GroupId::kZ2: return "z2";
    case GroupId::kHeisenberg: return "h3";
  }
  return "?";
}

int Group::rank() const {
  switch (id_) {
    case GroupId::kZ1: return 1;
    case GroupId::kZ2: return 2;
    case GroupId::kHeisenberg: return 3;
  }
  return 0;
}

Element Group::make(std::initializer_list<std::int64_t> coords) const {
  require(static_cast<int>(coords.size()) == rank(), ErrorCode::kInvalidArgument,
          "element arity does not match group " + name());
  Element e;
  std::copy(coords.begin(), coords.end(), e.c.begin());
  return e;
}

Element Group::multiply(const Element& a, const Element& b) const {
  Element r;
  r.c[0] = a.c[0] + b.c[0];
  r.c[1] = a.c[1] + b.c[1];
  r.c[2] = a.c[2] + b.c[2];
  if (id_ == GroupId::kHeisenberg) r.c[2] += a.c[0] * b.c[1];
  return r;
}

Element Group::inverse(const Element& a) const {
  Element r;
  r.c[0] = -a.c[0];
  r.c[1] = -a.c[1];
  r.c[2] = -a.c[2];
  if (id_ == GroupId::kHeisenberg) r.c[2] += a.c[0] * a.c[1];
  return r;
}

Subset Group::folner(int n) const {
  require(n >= 1, ErrorCode::kInvalidArgument, "Folner index must be >= 1");
  std::vector<Element> out;
  switch (id_) {
    case GroupId::kZ1:
      for (std::int64_t a = -n; a <= n; ++a) out.push_back(make({a}));
      break;
    case GroupId::kZ2:
      for (std::int64_t a = -n; a <= n; ++a)
        for (std::int64_t b = -n; b <= n; ++b) out.push_back(make({a, b}));
      break;
    case GroupId::kHeisenberg: {
      const std::int64_t cn = static_cast<std::int64_t>(n) * n;
      for (std::int64_t a = -n; a <= n; ++a)
        for (std::int64_t b = -n; b <= n; ++b)
          for (std::int64_t c = -cn; c <= cn; ++c) {
            Element e = make({a, b, c});
            out.push_back(e);
            out.push_back(inverse(e));
          }
      break;
    }
  }
  return Subset(std::move(out));
}

Subset::Subset(std::vector<Element> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool Subset::contains(const Element& e) const {
  return std::binary_search(elems_.begin(), elems_.end(), e);
}

std::ptrdiff_t Subset::rank(const Element& e) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), e);
  if (it == elems_.end() || *it != e) return -1;
  return it - elems_.begin();
}

bool Subset::is_subset_of(const Subset& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

Subset set_union(const Subset& a, const Subset& b) {
  std::vector<Element> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Subset(std::move(out));
}

Subset set_intersection(const Subset& a, const Subset& b) {
  std::vector<Element> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Subset(std::move(out));
}

Subset set_difference(const Subset& a, const Subset& b) {
  std::vector<Element> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Subset(std::move(out));
}

std::size_t symmetric_difference_size(const Subset& a, const Subset& b) {
  return a.size() + b.size() - 2 * set_intersection(a, b).size();
}

Subset translate_set(const Group& g, const Subset& f, const Element& by, Side side) {
  std::vector<Element> out;
  out.reserve(f.size());
  for (const auto& e : f) out.push_back(side == Side::kLeft ? g.multiply(by, e) : g.multiply(e, by));
  return Subset(std::move(out));
}

Subset set_product(const Group& g, const Subset& a, const Subset& b) {
  std::vector<Element> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(g.multiply(x, y));
  return Subset(std::move(out));
}

Subset set_inverse(const Group& g, const Subset& a) {
  std::vector<Element> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(g.inverse(x));
  return Subset(std::move(out));
}

double invariance_defect(const Group& g, const Subset& f, const Subset& k) {
  require(!f.empty(), ErrorCode::kInvalidArgument, "invariance_defect: F is empty");
  double worst = 0.0;
  for (const auto& h : k) {
    const auto moved = translate_set(g, f, h, Side::kLeft);
    worst = std::max(worst, static_cast<double>(symmetric_difference_size(moved, f)) /
                                static_cast<double>(f.size()));
  }
  return worst;
}

// ---------------------------------------------------------------------------

Window::Window(Group group, std::vector<std::int64_t> extents, Element origin)
    : group_(group), extents_(std::move(extents)), origin_(origin) {
  require(static_cast<int>(extents_.size()) == group_.rank(), ErrorCode::kInvalidArgument,
          "window extents must match group rank");
  size_ = 1;
  for (auto e : extents_) {
    require(e > 0, ErrorCode::kInvalidArgument, "window must be nonempty");
    size_ *= static_cast<std::size_t>(e);
  }
  strides_.assign(extents_.size(), 1);
  for (int i = static_cast<int>(extents_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * extents_[i + 1];
}

Window Window::cube(Group group, std::int64_t side) {
  return Window(group, std::vector<std::int64_t>(group.rank(), side));
}

bool Window::contains(const Element& e) const {
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    const auto v = e.c[i] - origin_.c[i];
    if (v < 0 || v >= extents_[i]) return false;
  }
  for (std::size_t i = extents_.size(); i < 3; ++i)
    if (e.c[i] != 0) return false;
  return true;
}

std::size_t Window::index(const Element& e) const {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < extents_.size(); ++i) idx += (e.c[i] - origin_.c[i]) * strides_[i];
  return static_cast<std::size_t>(idx);
}

Element Window::element(std::size_t index) const {
  Element e;
  auto rem = static_cast<std::int64_t>(index);
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    e.c[i] = origin_.c[i] + rem / strides_[i];
    rem %= strides_[i];
  }
  return e;
}

Subset Window::region() const {
  std::vector<Element> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(element(i));
  return Subset(std::move(out));
}

Window Window::translated(const Element& by) const {
  Element o = origin_;
  for (std::size_t i = 0; i < extents_.size(); ++i) o.c[i] += by.c[i];
  return Window(group_, extents_, o);
}

std::int64_t Window::linear_offset(const Element& delta) const {
  std::int64_t off = 0;
  for (std::size_t i = 0; i < extents_.size(); ++i) off += delta.c[i] * strides_[i];
  return off;
}

std::vector<Element> contained_translates(const Window& w, const Subset& f) {
  std::vector<Element> out;
  const Group& g = w.group();
  if (g.abelian() && !f.empty()) {
    // F g is inside the box iff g lies in the box shrunk by F's bounding box.
    std::array<std::int64_t, 3> lo{}, hi{};
    for (int i = 0; i < g.rank(); ++i) {
      lo[i] = hi[i] = f[0].c[i];
      for (const auto& e : f) {
        lo[i] = std::min(lo[i], e.c[i]);
        hi[i] = std::max(hi[i], e.c[i]);
      }
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Element e = w.element(i);
      bool ok = true;
      for (int d = 0; d < g.rank() && ok; ++d) {
        const auto v = e.c[d] - w.origin().c[d];
        ok = v + lo[d] >= 0 && v + hi[d] < w.extents()[d];
      }
      if (ok) out.push_back(e);
    }
    return out;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Element e = w.element(i);
    bool ok = true;
    for (const auto& x : f) {
      if (!w.contains(g.multiply(x, e))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(e);
  }
  return out;
}

double lower_banach_density_window(const Window& w, const std::vector<char>& mask, int n) {
  require(mask.size() == w.size(), ErrorCode::kInvalidArgument, "mask size does not match window");
  const Group& g = w.group();
  const Subset f = g.folner(n);
  const auto positions = contained_translates(w, f);
  require(!positions.empty(), ErrorCode::kWindowTooSmall,
          "no translate of F_" + std::to_string(n) + " fits in the window");
  std::size_t worst = f.size();
  if (g.abelian()) {
    std::vector<std::int64_t> offsets;
    for (const auto& x : f) offsets.push_back(w.linear_offset(x));
    for (const auto& p : positions) {
      const auto base = static_cast<std::int64_t>(w.index(p));
      std::size_t hits = 0;
      for (auto off : offsets) hits += mask[static_cast<std::size_t>(base + off)] ? 1 : 0;
      worst = std::min(worst, hits);
      if (worst == 0) break;
    }
  } else {
    for (const auto& p : positions) {
      std::size_t hits = 0;
      for (const auto& x : f) hits += mask[w.index(g.multiply(x, p))] ? 1 : 0;
      worst = std::min(worst, hits);
      if (worst == 0) break;
    }
  }
  return static_cast<double>(worst) / static_cast<double>(f.size());
}

double lower_banach_density_window(const Subset& a, const Window& w, int n) {
  std::vector<char> mask(w.size(), 0);
  for (const auto& e : a)
    if (w.contains(e)) mask[w.index(e)] = 1;
  return lower_banach_density_window(w, mask, n);
}

}  // namespace symdyn
