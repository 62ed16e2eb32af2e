#include "symdyn/block.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

Block::Block(int alphabet_, Subset domain_, std::vector<Symbol> symbols_)
    : alphabet(alphabet_), domain(std::move(domain_)), symbols(std::move(symbols_)) {
  require(domain.size() == symbols.size(), ErrorCode::kInvalidArgument,
          "block: domain and symbol counts differ");
}

std::optional<Symbol> Block::at(const Element& e) const {
  const auto r = domain.rank(e);
  if (r < 0) return std::nullopt;
  return symbols[static_cast<std::size_t>(r)];
}

Configuration::Configuration(int alphabet_, Window window_, Symbol fill)
    : alphabet(alphabet_), window(std::move(window_)), symbols(window.size(), fill) {}

Block Configuration::to_block() const {
  return Block(alphabet, window.region(), symbols);
}

Block Configuration::restrict(const Subset& domain) const {
  std::vector<Symbol> out;
  out.reserve(domain.size());
  for (const auto& e : domain) {
    require(window.contains(e), ErrorCode::kDomainEscape, "restrict: domain leaves the window");
    out.push_back(symbols[window.index(e)]);
  }
  return Block(alphabet, domain, std::move(out));
}

Configuration Configuration::from_block(const Block& b, const Window& w, Symbol fill) {
  Configuration c(b.alphabet, w, fill);
  for (std::size_t i = 0; i < b.domain.size(); ++i) {
    require(w.contains(b.domain[i]), ErrorCode::kDomainEscape, "from_block: block leaves the window");
    c.symbols[w.index(b.domain[i])] = b.symbols[i];
  }
  return c;
}

// ---------------------------------------------------------------------------

PatternScan::PatternScan(const Window& w, const Subset& f)
    : window_(&w), f_(f), positions_(contained_translates(w, f)), abelian_(w.group().abelian()) {
  if (abelian_) {
    for (const auto& x : f_) offsets_.push_back(w.linear_offset(x));
    base_.reserve(positions_.size());
    for (const auto& p : positions_) base_.push_back(w.index(p));
  }
}

std::size_t PatternScan::site(std::size_t i, std::size_t k) const {
  if (abelian_) return static_cast<std::size_t>(static_cast<std::int64_t>(base_[i]) + offsets_[k]);
  return window_->index(window_->group().multiply(f_[k], positions_[i]));
}

BlockKey PatternScan::key(const std::vector<Symbol>& symbols, std::size_t i) const {
  BlockKey k(f_.size(), '\0');
  for (std::size_t j = 0; j < f_.size(); ++j) k[j] = static_cast<char>(symbols[site(i, j)]);
  return k;
}

// ---------------------------------------------------------------------------

bool occurs_at(const Block& b, const Block& c, const Element& g, const Group& grp) {
  for (std::size_t i = 0; i < b.domain.size(); ++i) {
    const auto v = c.at(grp.multiply(b.domain[i], g));
    if (!v || *v != b.symbols[i]) return false;
  }
  return true;
}

bool occurs_at(const Block& b, const Configuration& c, const Element& g) {
  const Group& grp = c.window.group();
  for (std::size_t i = 0; i < b.domain.size(); ++i) {
    const auto v = c.at(grp.multiply(b.domain[i], g));
    if (!v || *v != b.symbols[i]) return false;
  }
  return true;
}

double frequency(const Block& bp, const Block& b, const Group& grp) {
  if (b.domain.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& h : b.domain) hits += occurs_at(bp, b, h, grp) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(b.domain.size());
}

double frequency(const Block& bp, const Configuration& b) {
  if (b.symbols.empty()) return 0.0;
  PatternScan scan(b.window, bp.domain);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < scan.count(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < bp.domain.size() && ok; ++k) ok = b.symbols[scan.site(i, k)] == bp.symbols[k];
    hits += ok ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(b.symbols.size());
}

std::size_t fitting_translates(const Subset& dp, const Subset& d, const Group& grp) {
  std::size_t n = 0;
  for (const auto& h : d) {
    bool ok = true;
    for (const auto& x : dp) {
      if (!d.contains(grp.multiply(x, h))) {
        ok = false;
        break;
      }
    }
    n += ok ? 1 : 0;
  }
  return n;
}

// ---------------------------------------------------------------------------

nlohmann::json element_to_json(const Element& e, int rank) {
  auto j = nlohmann::json::array();
  for (int i = 0; i < rank; ++i) j.push_back(e.c[i]);
  return j;
}

Element element_from_json(const nlohmann::json& j) {
  require(j.is_array() && !j.empty() && j.size() <= 3, ErrorCode::kParse, "element: expected 1..3 coordinates");
  Element e;
  for (std::size_t i = 0; i < j.size(); ++i) e.c[i] = j[i].get<std::int64_t>();
  return e;
}

nlohmann::json subset_to_json(const Subset& s, int rank) {
  auto j = nlohmann::json::array();
  for (const auto& e : s) j.push_back(element_to_json(e, rank));
  return j;
}

Subset subset_from_json(const nlohmann::json& j) {
  require(j.is_array(), ErrorCode::kParse, "subset: expected array");
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(element_from_json(x));
  return Subset(std::move(out));
}

nlohmann::json block_to_json(const Block& b, const Group& g) {
  nlohmann::json j;
  j["alphabet"] = b.alphabet;
  j["domain"] = subset_to_json(b.domain, g.rank());
  auto syms = nlohmann::json::array();
  for (auto s : b.symbols) syms.push_back(static_cast<int>(s));
  j["symbols"] = std::move(syms);
  return j;
}

Block block_from_json(const nlohmann::json& j) {
  try {
    // Domain order in the file need not be canonical; pair symbols first.
    const auto& dom = j.at("domain");
    const auto& sym = j.at("symbols");
    require(dom.size() == sym.size(), ErrorCode::kParse, "block: domain/symbol length mismatch");
    std::vector<std::pair<Element, Symbol>> pairs;
    for (std::size_t i = 0; i < dom.size(); ++i)
      pairs.emplace_back(element_from_json(dom[i]), static_cast<Symbol>(sym[i].get<int>()));
    std::sort(pairs.begin(), pairs.end());
    std::vector<Element> elems;
    std::vector<Symbol> symbols;
    for (const auto& [e, s] : pairs) {
      require(elems.empty() || elems.back() != e, ErrorCode::kParse, "block: duplicate domain element");
      elems.push_back(e);
      symbols.push_back(s);
    }
    return Block(j.at("alphabet").get<int>(), Subset(std::move(elems)), std::move(symbols));
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("block: ") + ex.what());
  }
}

}  // namespace symdyn
