// Image analysis of transducer states: cone membership, preimage prefixes,
// clopen image decompositions, and partial invertibility.
#pragma once

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "machine.hpp"
#include "minimize.hpp"

namespace tx {

struct ConeAntichain {
  int n = 2;
  std::vector<Word> words;  // sorted, pairwise prefix-free
};

inline ConeAntichain make_antichain(int n, std::vector<Word> words) {
  std::sort(words.begin(), words.end());
  for (std::size_t i = 0; i + 1 < words.size(); ++i)
    require(!is_prefix(words[i], words[i + 1]), Errc::invalid_input,
            "cone words overlap: " + display_word(words[i]) + " and " + display_word(words[i + 1]));
  for (const Word& w : words)
    require(valid_word(n, w), Errc::invalid_input, "cone word letters out of range");
  return {n, std::move(words)};
}

// Merges every complete block of n siblings into its parent, repeatedly.
inline ConeAntichain canonical_antichain(const ConeAntichain& a) {
  std::set<Word> ws(a.words.begin(), a.words.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Word& w : std::vector<Word>(ws.begin(), ws.end())) {
      if (w.empty() || !ws.count(w)) continue;
      Word parent = w.substr(0, w.size() - 1);
      bool full = true;
      for (int x = 0; x < a.n && full; ++x) full = ws.count(parent + letter_char(x)) != 0;
      if (full) {
        for (int x = 0; x < a.n; ++x) ws.erase(parent + letter_char(x));
        ws.insert(parent);
        changed = true;
      }
    }
  }
  return {a.n, std::vector<Word>(ws.begin(), ws.end())};
}

namespace detail {
inline bool covers(const std::set<Word>& ws, int n, const Word& prefix) {
  if (ws.count(prefix)) return true;
  bool any = false;
  for (const Word& w : ws)
    if (is_prefix(prefix, w)) { any = true; break; }
  if (!any) return false;
  for (int x = 0; x < n; ++x)
    if (!covers(ws, n, prefix + letter_char(x))) return false;
  return true;
}
}  // namespace detail

// True when the cones exhaust the whole space.
inline bool is_maximal_antichain(const ConeAntichain& a) {
  std::set<Word> ws(a.words.begin(), a.words.end());
  return detail::covers(ws, a.n, Word());
}

// Minimal antichain covering everything outside a's cones.
inline ConeAntichain antichain_complement(const ConeAntichain& a) {
  std::vector<Word> out;
  std::vector<Word> stack{Word()};
  while (!stack.empty()) {
    Word p = stack.back();
    stack.pop_back();
    bool inside = false, meets = false;
    for (const Word& w : a.words) {
      if (is_prefix(w, p)) inside = true;
      if (is_prefix(p, w)) meets = true;
    }
    if (inside) continue;
    if (!meets) {
      out.push_back(p);
      continue;
    }
    for (int x = a.n - 1; x >= 0; --x) stack.push_back(p + letter_char(x));
  }
  std::sort(out.begin(), out.end());
  return {a.n, std::move(out)};
}

// Does the cone [u] intersect im(T_q)?  Exact: walks match configurations
// (unconsumed part of u, state); an output that runs past u settles it.
inline bool cone_meets_image(const Transducer& t, int q, const Word& u) {
  require_productive(t, "cone_meets_image");
  std::set<std::pair<std::size_t, int>> seen;
  std::queue<std::pair<std::size_t, int>> bfs;
  if (u.empty()) return true;
  bfs.push({0, q});
  seen.insert({0, q});
  while (!bfs.empty()) {
    auto [i, p] = bfs.front();
    bfs.pop();
    for (int x = 0; x < t.n; ++x) {
      const Word& o = t.out[p][x];
      std::size_t rest = u.size() - i;
      if (o.size() >= rest) {
        if (o.compare(0, rest, u, i, rest) == 0) return true;
      } else if (u.compare(i, o.size(), o) == 0) {
        auto cfg = std::make_pair(i + o.size(), t.next[p][x]);
        if (seen.insert(cfg).second) bfs.push(cfg);
      }
    }
  }
  return false;
}

namespace detail {

// A claim set: pending output words paired with states whose images, each
// shifted by its word, are asserted to jointly cover the whole space.
using Claim = std::pair<Word, int>;
using ClaimSet = std::vector<Claim>;

inline void normalize_claims(const Transducer& t, ClaimSet& s) {
  std::set<Claim> done;
  std::vector<Claim> todo(s.begin(), s.end());
  while (!todo.empty()) {
    Claim c = todo.back();
    todo.pop_back();
    if (done.count(c)) continue;
    if (!c.first.empty()) {
      done.insert(c);
      continue;
    }
    done.insert(c);  // keep the marker so empty claims are not re-expanded
    for (int x = 0; x < t.n; ++x) todo.push_back({t.out[c.second][x], t.next[c.second][x]});
  }
  s.clear();
  for (const Claim& c : done)
    if (!c.first.empty()) s.push_back(c);
}

// Decides whether every branch of the claim-set graph stays nonempty: builds
// the graph reachable from the start set, then propagates "uncovered" back
// from empty sets.  This is the greatest fixpoint of P(S) = AND_x P(S_x),
// which matches containment because validated machines emit along every cycle.
inline bool covered(const Transducer& t, ClaimSet start, const Budget& budget) {
  normalize_claims(t, start);
  std::map<ClaimSet, int> id_of;
  std::vector<std::vector<int>> children;
  std::vector<std::vector<int>> parents;
  std::vector<ClaimSet> sets;
  std::vector<int> worklist;

  auto intern = [&](ClaimSet s) {
    auto it = id_of.find(s);
    if (it != id_of.end()) return it->second;
    int id = static_cast<int>(sets.size());
    require(id < budget.max_configurations, Errc::budget_exceeded,
            "cone cover search exceeded the configuration budget");
    id_of.emplace(s, id);
    sets.push_back(std::move(s));
    children.emplace_back();
    parents.emplace_back();
    return id;
  };

  int root = intern(std::move(start));
  for (int i = 0; i < static_cast<int>(sets.size()); ++i) {
    ClaimSet cur = sets[i];  // interning below may reallocate the node pool
    if (cur.empty()) continue;
    for (int x = 0; x < t.n; ++x) {
      ClaimSet child;
      for (const Claim& c : cur)
        if (letter_of(c.first[0]) == x) child.push_back({c.first.substr(1), c.second});
      normalize_claims(t, child);
      int j = intern(std::move(child));
      children[i].push_back(j);
      parents[j].push_back(i);
    }
  }

  std::vector<char> uncovered(sets.size(), 0);
  for (int i = 0; i < static_cast<int>(sets.size()); ++i)
    if (sets[i].empty()) {
      uncovered[i] = 1;
      worklist.push_back(i);
    }
  while (!worklist.empty()) {
    int j = worklist.back();
    worklist.pop_back();
    for (int i : parents[j])
      if (!uncovered[i]) {
        uncovered[i] = 1;
        worklist.push_back(i);
      }
  }
  return !uncovered[root];
}

// All (overshoot word, state) pairs lying immediately past u on some run from q.
inline ClaimSet frontier_past(const Transducer& t, int q, const Word& u) {
  std::set<Claim> frontier;
  std::set<std::pair<std::size_t, int>> seen;
  std::vector<std::pair<std::size_t, int>> stack{{0, q}};
  seen.insert({0, q});
  while (!stack.empty()) {
    auto [i, p] = stack.back();
    stack.pop_back();
    if (i == u.size()) {
      frontier.insert({Word(), p});
      continue;
    }
    for (int x = 0; x < t.n; ++x) {
      const Word& o = t.out[p][x];
      std::size_t rest = u.size() - i;
      if (o.size() >= rest) {
        if (o.compare(0, rest, u, i, rest) == 0) frontier.insert({o.substr(rest), t.next[p][x]});
      } else if (u.compare(i, o.size(), o) == 0) {
        auto cfg = std::make_pair(i + o.size(), t.next[p][x]);
        if (seen.insert(cfg).second) stack.push_back(cfg);
      }
    }
  }
  return ClaimSet(frontier.begin(), frontier.end());
}

}  // namespace detail

// Is the whole cone [u] contained in im(T_q)?  Exact on machines without
// non-productive cycles: a greatest-fixpoint search over claim sets, where an
// empty claim set witnesses an uncovered point.
inline bool cone_in_image(const Transducer& t, int q, const Word& u, const Budget& b = {}) {
  require_productive(t, "cone_in_image");
  return detail::covered(t, detail::frontier_past(t, q, u), b);
}

// Longest common prefix of { w : (w)T_q starts with alpha }, the input every
// preimage of the cone [alpha] must begin with.
inline Word preimage_lcp(const Transducer& t, int q, const Word& alpha, const Budget& b = {}) {
  require_productive(t, "preimage_lcp");

  // can_extend[(i, p)]: some continuation from p matches the rest of alpha.
  std::map<std::pair<std::size_t, int>, bool> memo;
  auto can_extend = [&](std::size_t i, int p) {
    std::set<std::pair<std::size_t, int>> seen;
    std::vector<std::pair<std::size_t, int>> stack{{i, p}};
    seen.insert({i, p});
    while (!stack.empty()) {
      auto [j, r] = stack.back();
      stack.pop_back();
      auto it = memo.find({j, r});
      if (it != memo.end() && it->second) return true;
      for (int x = 0; x < t.n; ++x) {
        const Word& o = t.out[r][x];
        std::size_t rest = alpha.size() - j;
        if (o.size() >= rest) {
          if (o.compare(0, rest, alpha, j, rest) == 0) return true;
        } else if (alpha.compare(j, o.size(), o) == 0) {
          auto cfg = std::make_pair(j + o.size(), t.next[r][x]);
          if (seen.insert(cfg).second) stack.push_back(cfg);
        }
      }
    }
    return false;
  };

  Word gamma;
  std::size_t i = 0;  // letters of alpha already forced
  int p = q;
  long long steps = 0;
  for (;;) {
    require(++steps <= b.max_configurations, Errc::budget_exceeded,
            "preimage walk exceeded the configuration budget");
    int viable = -1;
    bool committed = false;
    int count = 0;
    for (int x = 0; x < t.n; ++x) {
      const Word& o = t.out[p][x];
      std::size_t rest = alpha.size() - i;
      if (o.size() >= rest) {
        if (o.compare(0, rest, alpha, i, rest) == 0) {
          ++count;
          viable = x;
          committed = true;
        }
      } else if (alpha.compare(i, o.size(), o) == 0 && can_extend(i + o.size(), t.next[p][x])) {
        ++count;
        viable = x;
        committed = false;
      }
      if (count > 1) return gamma;
    }
    if (count == 0) {
      require(i == 0 && gamma.empty(), Errc::internal_invariant, "viable walk hit a dead end");
      fail(Errc::empty_preimage, "no input maps into [" + display_word(alpha) + "]");
    }
    gamma += letter_char(viable);
    if (committed) return gamma;  // output has covered alpha; all continuations work
    memo[{i, p}] = true;
    i += t.out[p][viable].size();
    p = t.next[p][viable];
  }
}

// Minimal canonical clopen decomposition of im(T_q) into cones, found by
// refining candidate cones top-down until each is inside or outside the image.
inline ConeAntichain image_antichain(const Transducer& t, int q, const Budget& b = {}) {
  require_productive(t, "image_antichain");
  std::vector<Word> kept;
  std::vector<Word> stack{Word()};
  while (!stack.empty()) {
    Word u = stack.back();
    stack.pop_back();
    if (!cone_meets_image(t, q, u)) continue;
    if (cone_in_image(t, q, u, b)) {
      kept.push_back(u);
      continue;
    }
    require(static_cast<int>(u.size()) < b.max_depth, Errc::budget_exceeded,
            "image decomposition of state " + t.names[q] + " did not settle by depth " +
                std::to_string(b.max_depth));
    for (int x = t.n - 1; x >= 0; --x) stack.push_back(u + letter_char(x));
  }
  std::sort(kept.begin(), kept.end());
  return canonical_antichain({t.n, std::move(kept)});
}

// Exact injectivity of T_q on machines without non-productive cycles: a pair
// of distinct inputs with one output a prefix of the other can only persist
// through a cycle of lag configurations, and any such cycle forces two inputs
// with the same infinite output.
inline bool state_injective(const Transducer& t, int q, const Budget& b = {}) {
  require_productive(t, "state_injective");

  struct Lag {
    int ahead, behind;
    Word rest;  // output the behind side still owes
    bool operator<(const Lag& o) const {
      return std::tie(ahead, behind, rest) < std::tie(o.ahead, o.behind, o.rest);
    }
  };

  std::vector<Lag> starts;
  auto reach = reachable_set(t, q);
  for (int p = 0; p < t.size(); ++p) {
    if (!reach[p]) continue;
    for (int x = 0; x < t.n; ++x)
      for (int y = x + 1; y < t.n; ++y) {
        const Word &ox = t.out[p][x], &oy = t.out[p][y];
        if (is_prefix(ox, oy))
          starts.push_back({t.next[p][y], t.next[p][x], drop_prefix(ox, oy)});
        else if (is_prefix(oy, ox))
          starts.push_back({t.next[p][x], t.next[p][y], drop_prefix(oy, ox)});
      }
  }

  std::map<Lag, int> color;  // 1 = on stack, 2 = done
  long long used = 0;
  // Iterative DFS looking for any cycle among lag configurations.
  struct Frame {
    Lag lag;
    int next_letter;
  };
  for (const Lag& s : starts) {
    if (color.count(s)) continue;
    std::vector<Frame> stack{{s, 0}};
    color[s] = 1;
    require(++used <= b.max_configurations, Errc::budget_exceeded,
            "injectivity scan exceeded the configuration budget");
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next_letter == t.n) {
        color[f.lag] = 2;
        stack.pop_back();
        continue;
      }
      int x = f.next_letter++;
      const Word& o = t.out[f.lag.behind][x];
      Lag child;
      if (is_prefix(o, f.lag.rest)) {
        child = {f.lag.ahead, t.next[f.lag.behind][x], drop_prefix(o, f.lag.rest)};
      } else if (is_prefix(f.lag.rest, o)) {
        child = {t.next[f.lag.behind][x], f.lag.ahead, drop_prefix(f.lag.rest, o)};
      } else {
        continue;
      }
      auto it = color.find(child);
      if (it != color.end()) {
        if (it->second == 1) return false;
        continue;
      }
      color[child] = 1;
      require(++used <= b.max_configurations, Errc::budget_exceeded,
              "injectivity scan exceeded the configuration budget");
      stack.push_back({child, 0});
    }
  }
  return true;
}

enum class Tri { yes, no, budget_exceeded };

struct StateInvertibility {
  int state = 0;
  Tri injective = Tri::yes;
  Tri clopen = Tri::yes;
  ConeAntichain image;  // meaningful when clopen == yes
};

struct InvertibilityReport {
  std::vector<StateInvertibility> states;
  bool all_pass = true;
};

// A machine is partially invertible when every state is injective with clopen image.
inline InvertibilityReport is_partially_invertible(const Transducer& t, const Budget& b = {}) {
  InvertibilityReport r;
  for (int q = 0; q < t.size(); ++q) {
    StateInvertibility s;
    s.state = q;
    try {
      s.injective = state_injective(t, q, b) ? Tri::yes : Tri::no;
    } catch (const Error& e) {
      if (e.code() != Errc::budget_exceeded) throw;
      s.injective = Tri::budget_exceeded;
    }
    try {
      s.image = image_antichain(t, q, b);
      s.clopen = Tri::yes;
    } catch (const Error& e) {
      if (e.code() != Errc::budget_exceeded) throw;
      s.clopen = Tri::budget_exceeded;
    }
    if (s.injective != Tri::yes || s.clopen != Tri::yes) r.all_pass = false;
    r.states.push_back(std::move(s));
  }
  return r;
}

}  // namespace tx
