#include "pomsem/pomset.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include <nlohmann/json.hpp>

namespace pomsem {

namespace {

struct NodeInfo {
  std::string label;
  bool cube = true;
  // For cubes: (variable index, polarity). Otherwise the essential variables
  // with polarity 2 and `formula` kept for the truth table.
  std::vector<std::pair<std::size_t, int>> lits;
  Formula formula;
};

class Canonicalizer {
 public:
  explicit Canonicalizer(const Lpof& a) : a_(a), n_(a.size()) {
    info_.resize(n_);
    mentioned_by_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      NodeInfo& inf = info_[i];
      inf.label = a.label_idx(i).to_string();
      inf.formula = a.formula_idx(i);
      auto lits = implied_literals(inf.formula);
      inf.cube = equiv(inf.formula, cube(lits));
      if (inf.cube) {
        for (const auto& [v, pol] : lits) inf.lits.emplace_back(a.index(v), pol ? 1 : 0);
      } else {
        for (NodeId v : essential_vars(inf.formula)) inf.lits.emplace_back(a.index(v), 2);
      }
      for (const auto& [v, pol] : inf.lits) mentioned_by_[v].emplace_back(i, pol);
    }
  }

  CanonicalForm run() {
    std::vector<std::size_t> colour = initial_colouring();
    refine(colour);
    search(colour);

    std::map<NodeId, NodeId> relabel;
    for (std::size_t i = 0; i < n_; ++i) relabel.emplace(a_.id_at(i), best_perm_[i]);
    return {a_.rename(relabel), relabel, best_cert_};
  }

 private:
  using Key = std::vector<long>;

  static std::vector<std::size_t> rank(const std::vector<Key>& keys) {
    std::vector<Key> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::size_t> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
    }
    return out;
  }

  std::vector<std::size_t> initial_colouring() {
    std::vector<std::string> labels;
    for (const auto& inf : info_) labels.push_back(inf.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::vector<Key> keys(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      long label_rank = std::lower_bound(labels.begin(), labels.end(), info_[i].label) - labels.begin();
      keys[i] = {static_cast<long>(a_.level_idx(i)), label_rank, info_[i].cube ? 0L : 1L,
                 static_cast<long>(info_[i].lits.size()), static_cast<long>(a_.succ_idx(i).size()),
                 static_cast<long>(a_.pred_idx(i).size())};
    }
    return rank(keys);
  }

  void refine(std::vector<std::size_t>& colour) const {
    std::size_t classes = count(colour);
    while (true) {
      std::vector<Key> keys(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        Key& k = keys[i];
        k.push_back(static_cast<long>(colour[i]));
        auto append_sorted = [&](std::vector<long> part) {
          std::sort(part.begin(), part.end());
          k.push_back(-1);
          k.insert(k.end(), part.begin(), part.end());
        };
        std::vector<long> part;
        for (auto j : a_.succ_idx(i)) part.push_back(static_cast<long>(colour[j]));
        append_sorted(part);
        part.clear();
        for (auto j : a_.pred_idx(i)) part.push_back(static_cast<long>(colour[j]));
        append_sorted(part);
        part.clear();
        for (const auto& [v, pol] : info_[i].lits) part.push_back(static_cast<long>(colour[v] * 3 + pol));
        append_sorted(part);
        part.clear();
        for (const auto& [j, pol] : mentioned_by_[i]) part.push_back(static_cast<long>(colour[j] * 3 + pol));
        append_sorted(part);
      }
      colour = rank(keys);
      std::size_t now = count(colour);
      if (now == classes) return;
      classes = now;
    }
  }

  static std::size_t count(const std::vector<std::size_t>& colour) {
    std::size_t m = 0;
    for (auto c : colour) m = std::max(m, c + 1);
    return m;
  }

  void search(const std::vector<std::size_t>& colour) {
    if (count(colour) == n_) {
      consider_leaf(colour);
      return;
    }
    // First non-singleton cell.
    std::vector<std::size_t> size(n_, 0);
    for (auto c : colour) ++size[c];
    std::size_t cell = 0;
    while (size[cell] < 2) ++cell;
    for (std::size_t v = 0; v < n_; ++v) {
      if (colour[v] != cell) continue;
      std::vector<std::size_t> next = colour;
      for (std::size_t i = 0; i < n_; ++i) {
        if (colour[i] > cell || (colour[i] == cell && i != v)) next[i] = colour[i] + 1;
      }
      refine(next);
      search(next);
    }
  }

  std::string formula_cert(std::size_t i, const std::vector<std::size_t>& perm) const {
    const NodeInfo& inf = info_[i];
    std::vector<std::pair<std::size_t, int>> lits;
    for (const auto& [v, pol] : inf.lits) lits.emplace_back(perm[v], pol);
    std::sort(lits.begin(), lits.end());
    std::string out = inf.cube ? "c" : "t";
    for (const auto& [v, pol] : lits) {
      out += std::to_string(v);
      out += inf.cube ? (pol ? '+' : '-') : ',';
    }
    if (!inf.cube) {
      // Truth table over the essential variables in canonical order.
      out += ':';
      const std::size_t m = lits.size();
      std::vector<NodeId> by_canon(m);
      for (std::size_t k = 0; k < m; ++k) {
        for (const auto& [v, pol] : inf.lits) {
          if (perm[v] == lits[k].first) by_canon[k] = a_.id_at(v);
        }
      }
      for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
        Valuation val;
        for (NodeId v : inf.formula.free_vars()) val[v] = false;
        for (std::size_t k = 0; k < m; ++k) val[by_canon[k]] = (bits >> k) & 1U;
        out += inf.formula.eval(val) ? '1' : '0';
      }
    }
    return out;
  }

  void consider_leaf(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inv(n_);
    for (std::size_t i = 0; i < n_; ++i) inv[perm[i]] = i;
    std::string cert;
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i = inv[k];
      cert += info_[i].label;
      cert += '|';
      cert += formula_cert(i, perm);
      cert += '|';
      std::vector<std::size_t> succ;
      for (auto j : a_.succ_idx(i)) succ.push_back(perm[j]);
      std::sort(succ.begin(), succ.end());
      for (auto s : succ) cert += std::to_string(s) + ',';
      cert += ';';
    }
    if (best_perm_.empty() || cert < best_cert_) {
      best_cert_ = std::move(cert);
      best_perm_ = perm;
    }
  }

  const Lpof& a_;
  std::size_t n_;
  std::vector<NodeInfo> info_;
  std::vector<std::vector<std::pair<std::size_t, int>>> mentioned_by_;
  std::string best_cert_;
  std::vector<std::size_t> best_perm_;
};

}  // namespace

CanonicalForm canonical_form(const Lpof& a) {
  require_valid(a, "canonicalize");
  return Canonicalizer(a).run();
}

Lpof canonicalize(const Lpof& a) { return canonical_form(a).repr; }

std::optional<std::map<NodeId, NodeId>> isomorphic(const Lpof& a, const Lpof& b) {
  if (a.size() != b.size()) {
    require_valid(a, "isomorphic lhs");
    require_valid(b, "isomorphic rhs");
    return std::nullopt;
  }
  auto ca = canonical_form(a);
  auto cb = canonical_form(b);
  if (ca.certificate != cb.certificate) return std::nullopt;
  std::map<NodeId, NodeId> back;
  for (const auto& [orig, canon] : cb.relabel) back.emplace(canon, orig);
  std::map<NodeId, NodeId> f;
  for (const auto& [orig, canon] : ca.relabel) f.emplace(orig, back.at(canon));
  if (!equal_lpof(a.rename(f), b)) return std::nullopt;
  return f;
}

Pomset::Pomset(const Lpof& a) : repr_(a) {
  auto c = canonical_form(a);
  repr_ = std::move(c.repr);
  cert_ = std::move(c.certificate);
}

namespace {

class Embedder {
 public:
  Embedder(const Lpof& a, const Lpof& b) : a_(a), b_(b) {
    for (std::size_t i = 0; i < a.size(); ++i) order_.push_back(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) { return a.level_idx(x) < a.level_idx(y); });
    map_.assign(a.size(), kNone);
    used_.assign(b.size(), false);
  }

  bool run() { return step(0); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool compatible(std::size_t x, std::size_t y) const {
    if (used_[y] || a_.level_idx(x) != b_.level_idx(y)) return false;
    if (!label_leq(a_.label_idx(x), b_.label_idx(y))) return false;
    std::vector<std::size_t> mapped;
    for (auto p : a_.pred_idx(x)) mapped.push_back(map_[p]);
    std::sort(mapped.begin(), mapped.end());
    if (mapped != b_.pred_idx(y)) return false;
    std::map<NodeId, NodeId> ren;
    for (std::size_t p = a_.down(x).find_first(); p != Bitset::npos; p = a_.down(x).find_next(p)) {
      ren.emplace(a_.id_at(p), b_.id_at(map_[p]));
    }
    return equiv(a_.formula_idx(x).rename(ren), b_.formula_idx(y));
  }

  bool step(std::size_t k) {
    if (k == order_.size()) return finish();
    const std::size_t x = order_[k];
    for (std::size_t y = 0; y < b_.size(); ++y) {
      if (!compatible(x, y)) continue;
      map_[x] = y;
      used_[y] = true;
      if (step(k + 1)) return true;
      used_[y] = false;
      map_[x] = kNone;
    }
    return false;
  }

  bool finish() const {
    std::map<NodeId, NodeId> f;
    for (std::size_t i = 0; i < a_.size(); ++i) f.emplace(a_.id_at(i), b_.id_at(map_[i]));
    return le_lpof(a_.rename(f), b_);
  }

  const Lpof& a_;
  const Lpof& b_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> map_;
  std::vector<bool> used_;
};

}  // namespace

bool le_pom(const Pomset& a, const Pomset& b) {
  if (a.size() > b.size()) return false;
  return Embedder(a.repr(), b.repr()).run();
}

Pomset approximate(const Pomset& a, std::size_t n) { return Pomset(truncate(a.repr(), n)); }

std::string to_dot(const Pomset& p, const std::string& name) { return to_dot(p.repr(), name); }

nlohmann::json to_json(const Pomset& p) { return to_json(p.repr()); }

}  // namespace pomsem
