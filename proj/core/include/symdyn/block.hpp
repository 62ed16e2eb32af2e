#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/group.hpp"

namespace symdyn {

using Symbol = std::uint8_t;

/// Symbols of a block listed in canonical order of its domain, one byte per
/// site. Used as the hash/map key for block tables.
using BlockKey = std::string;

/// A map from a finite domain into {1..alphabet}. Stored sparsely: symbols[i]
/// belongs to domain[i]. Alphabet 0 is reserved for tiling codes which also
/// use the symbol 0.
struct Block {
  int alphabet = 0;
  Subset domain;
  std::vector<Symbol> symbols;

  Block() = default;
  Block(int alphabet, Subset domain, std::vector<Symbol> symbols);

  std::optional<Symbol> at(const Element& e) const;
  BlockKey key() const { return BlockKey(symbols.begin(), symbols.end()); }
  std::size_t size() const { return domain.size(); }

  friend bool operator==(const Block&, const Block&) = default;
};

/// A dense configuration on a window: the usual carrier of sampled data.
struct Configuration {
  int alphabet = 0;
  Window window;
  std::vector<Symbol> symbols;  // indexed by window site

  Configuration() = default;
  Configuration(int alphabet, Window window, Symbol fill = 1);

  std::optional<Symbol> at(const Element& e) const {
    if (!window.contains(e)) return std::nullopt;
    return symbols[window.index(e)];
  }
  Symbol& operator[](const Element& e) { return symbols[window.index(e)]; }
  Symbol operator[](const Element& e) const { return symbols[window.index(e)]; }

  Block to_block() const;
  /// Restriction to a subset of the window.
  Block restrict(const Subset& domain) const;
  static Configuration from_block(const Block& b, const Window& w, Symbol fill);

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// The read pattern of a domain F inside a window: for every g with F g in the
/// window, the window indices of F g in canonical order of F. Abelian groups
/// get a constant offset list; Heisenberg falls back to explicit products.
class PatternScan {
 public:
  PatternScan(const Window& w, const Subset& f);

  const std::vector<Element>& positions() const { return positions_; }
  std::size_t count() const { return positions_.size(); }
  /// Window index of the k-th domain element translated to position i.
  std::size_t site(std::size_t i, std::size_t k) const;
  BlockKey key(const std::vector<Symbol>& symbols, std::size_t i) const;
  BlockKey key(const Configuration& c, std::size_t i) const { return key(c.symbols, i); }

 private:
  const Window* window_;
  Subset f_;
  std::vector<Element> positions_;
  bool abelian_;
  std::vector<std::int64_t> offsets_;
  std::vector<std::size_t> base_;
};

/// True iff domain(B)·g is inside domain(C) and C agrees with B there.
bool occurs_at(const Block& b, const Block& c, const Element& g, const Group& grp);
bool occurs_at(const Block& b, const Configuration& c, const Element& g);

/// (1/|domain(B)|) |{h in domain(B) : Bp occurs in B at h}|.
double frequency(const Block& bp, const Block& b, const Group& grp);
double frequency(const Block& bp, const Configuration& b);

/// Number of h in domain(B) with domain(Bp)·h inside domain(B). When it is
/// zero, frequency() returns 0 and callers should flag the case.
std::size_t fitting_translates(const Subset& dp, const Subset& d, const Group& grp);

/// {"alphabet": s, "domain": [[coords]...], "symbols": [ints]}.
nlohmann::json block_to_json(const Block& b, const Group& g);
Block block_from_json(const nlohmann::json& j);
nlohmann::json element_to_json(const Element& e, int rank);
Element element_from_json(const nlohmann::json& j);
nlohmann::json subset_to_json(const Subset& s, int rank);
Subset subset_from_json(const nlohmann::json& j);

}  // namespace symdyn
