#include "symdyn/source.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix r(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

void check_distribution(const std::vector<double>& p, const char* what) {
  require(!p.empty(), ErrorCode::kInvalidArgument, std::string(what) + ": empty distribution");
  double total = 0.0;
  for (double v : p) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::kInvalidArgument,
            std::string(what) + ": negative or non-finite probability");
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kInvalidArgument,
          std::string(what) + ": probabilities do not sum to 1");
}

}  // namespace

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

SourceSpec SourceSpec::bernoulli(std::vector<double> p) {
  SourceSpec s;
  s.kind = Kind::kBernoulli;
  s.probs = std::move(p);
  s.validate();
  return s;
}

SourceSpec SourceSpec::markov(std::vector<std::vector<double>> rows) {
  SourceSpec s;
  s.kind = Kind::kMarkov;
  s.transition = std::move(rows);
  s.validate();
  return s;
}

SourceSpec SourceSpec::constant(int symbol, int alphabet) {
  SourceSpec s;
  s.kind = Kind::kConstant;
  s.constant_symbol = symbol;
  s.constant_alphabet = alphabet;
  s.validate();
  return s;
}

int SourceSpec::alphabet() const {
  switch (kind) {
    case Kind::kConstant: return constant_alphabet;
    case Kind::kBernoulli: return static_cast<int>(probs.size());
    case Kind::kMarkov: return static_cast<int>(transition.size());
  }
  return 0;
}

void SourceSpec::validate() const {
  switch (kind) {
    case Kind::kConstant:
      require(constant_alphabet >= 1 && constant_alphabet <= 255 && constant_symbol >= 1 &&
                  constant_symbol <= constant_alphabet,
              ErrorCode::kInvalidArgument, "constant source: symbol outside alphabet");
      break;
    case Kind::kBernoulli:
      require(probs.size() <= 255, ErrorCode::kInvalidArgument, "bernoulli source: alphabet too large");
      check_distribution(probs, "bernoulli source");
      break;
    case Kind::kMarkov:
      require(!transition.empty() && transition.size() <= 255, ErrorCode::kInvalidArgument,
              "markov source: bad state count");
      for (const auto& row : transition) {
        require(row.size() == transition.size(), ErrorCode::kInvalidArgument,
                "markov source: transition matrix is not square");
        check_distribution(row, "markov source row");
      }
      break;
  }
}

std::vector<double> SourceSpec::marginal() const {
  switch (kind) {
    case Kind::kConstant: {
      std::vector<double> p(constant_alphabet, 0.0);
      p[constant_symbol - 1] = 1.0;
      return p;
    }
    case Kind::kBernoulli: return probs;
    case Kind::kMarkov: {
      // Power iteration from uniform; averaging successive iterates makes the
      // periodic case converge to the Cesaro limit as well.
      const std::size_t n = transition.size();
      std::vector<double> p(n, 1.0 / static_cast<double>(n)), avg(n, 0.0);
      const int iters = 20000;
      for (int it = 0; it < iters; ++it) {
        std::vector<double> q(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) q[j] += p[i] * transition[i][j];
        p = q;
        for (std::size_t j = 0; j < n; ++j) avg[j] += p[j];
      }
      for (auto& v : avg) v /= iters;
      return avg;
    }
  }
  return {};
}

double SourceSpec::entropy_rate() const {
  switch (kind) {
    case Kind::kConstant: return 0.0;
    case Kind::kBernoulli: return entropy_bits(probs);
    case Kind::kMarkov: {
      const auto pi = marginal();
      double h = 0.0;
      for (std::size_t i = 0; i < pi.size(); ++i) h += pi[i] * entropy_bits(transition[i]);
      return h;
    }
  }
  return 0.0;
}

Configuration SourceSpec::sample(const Window& w, Rng& rng) const {
  validate();
  Configuration c(alphabet(), w, 1);
  switch (kind) {
    case Kind::kConstant:
      std::fill(c.symbols.begin(), c.symbols.end(), static_cast<Symbol>(constant_symbol));
      break;
    case Kind::kBernoulli:
      for (auto& s : c.symbols) s = static_cast<Symbol>(rng.categorical(probs) + 1);
      break;
    case Kind::kMarkov: {
      const auto pi = marginal();
      const std::int64_t line = w.extents().back();
      for (std::size_t i = 0; i < c.symbols.size(); ++i) {
        const bool starts_line = static_cast<std::int64_t>(i) % line == 0;
        const int next = starts_line ? rng.categorical(pi) : rng.categorical(transition[c.symbols[i - 1] - 1]);
        c.symbols[i] = static_cast<Symbol>(next + 1);
      }
      break;
    }
  }
  return c;
}

nlohmann::json source_to_json(const SourceSpec& s) {
  nlohmann::json j;
  switch (s.kind) {
    case SourceSpec::Kind::kConstant:
      j["kind"] = "constant";
      j["symbol"] = s.constant_symbol;
      j["alphabet"] = s.constant_alphabet;
      break;
    case SourceSpec::Kind::kBernoulli:
      j["kind"] = "bernoulli";
      j["probs"] = s.probs;
      break;
    case SourceSpec::Kind::kMarkov:
      j["kind"] = "markov";
      j["transition"] = s.transition;
      break;
  }
  return j;
}

SourceSpec source_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "constant") return SourceSpec::constant(j.at("symbol").get<int>(), j.at("alphabet").get<int>());
    if (kind == "bernoulli") return SourceSpec::bernoulli(j.at("probs").get<std::vector<double>>());
    if (kind == "markov")
      return SourceSpec::markov(j.at("transition").get<std::vector<std::vector<double>>>());
    fail(ErrorCode::kParse, "source: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("source: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------

SourceLaw::SourceLaw(SourceSpec spec, Group group)
    : spec_(std::move(spec)), group_(group), marginal_(spec_.marginal()) {
  spec_.validate();
}

template <typename Visit>
void SourceLaw::for_each_factor(const Subset& domain, const BlockKey& key, Visit&& visit) const {
  require(domain.size() == key.size(), ErrorCode::kInvalidArgument, "probability: key length mismatch");
  const int s = alphabet();
  for (char ch : key) {
    const int v = static_cast<unsigned char>(ch);
    if (v < 1 || v > s) {
      visit(0.0);
      return;
    }
  }
  if (spec_.kind != SourceSpec::Kind::kMarkov) {
    for (char ch : key)
      if (!visit(marginal_[static_cast<unsigned char>(ch) - 1])) return;
    return;
  }
  // Split the domain into lines along the last coordinate. Canonical order
  // already lists each line contiguously and sorted.
  const int last = group_.rank() - 1;
  auto same_line = [last](const Element& a, const Element& b) {
    for (int i = 0; i < last; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  };
  std::map<std::int64_t, Matrix> powers;
  auto power = [&](std::int64_t gap) -> const Matrix& {
    auto it = powers.find(gap);
    if (it != powers.end()) return it->second;
    Matrix r = spec_.transition;
    for (std::int64_t g = 1; g < gap; ++g) r = mat_mul(r, spec_.transition);
    return powers.emplace(gap, std::move(r)).first->second;
  };
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const int v = static_cast<unsigned char>(key[i]) - 1;
    double f;
    if (i == 0 || !same_line(domain[i - 1], domain[i])) {
      f = marginal_[v];
    } else {
      const int u = static_cast<unsigned char>(key[i - 1]) - 1;
      f = power(domain[i].c[last] - domain[i - 1].c[last])[u][v];
    }
    if (!visit(f)) return;
  }
}

double SourceLaw::probability(const Subset& domain, const BlockKey& key) const {
  double p = 1.0;
  for_each_factor(domain, key, [&](double f) {
    p *= f;
    return p != 0.0;
  });
  return p;
}

double SourceLaw::log2_probability(const Subset& domain, const BlockKey& key) const {
  double lp = 0.0;
  for_each_factor(domain, key, [&](double f) {
    if (f <= 0.0) {
      lp = -std::numeric_limits<double>::infinity();
      return false;
    }
    lp += std::log2(f);
    return true;
  });
  return lp;
}

}  // namespace symdyn
