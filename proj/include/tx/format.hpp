// Line-oriented text format for machines, automata, prefix maps, and
// completions, plus DOT rendering.
#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "groups.hpp"
#include "machine.hpp"
#include "prefix_map.hpp"

namespace tx {

struct Document {
  std::map<std::string, InitialTransducer> machines;
  std::map<std::string, Automaton> automata;
  std::map<std::string, PrefixExchangeMap> maps;
  std::map<std::string, CompletionMap> completions;
  std::vector<std::string> order;  // block names in file order
};

namespace detail {

struct Cursor {
  std::istringstream in;
  int line = 0;
  std::string current;

  explicit Cursor(const std::string& text) : in(text) {}

  // Next significant line, split into tokens; comments run from '#'.
  std::optional<std::vector<std::string>> next() {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::istringstream ls(raw);
      std::vector<std::string> tokens;
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (!tokens.empty()) {
        current = raw;
        return tokens;
      }
    }
    return std::nullopt;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
  }
};

inline int expect_int(Cursor& c, const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    c.error(std::string("expected ") + what + ", got '" + tok + "'");
  }
}

}  // namespace detail

// Grammar, one directive per line, '#' starts a comment:
//   alphabet N
//   transducer NAME / state A B ... / initial A / trans FROM LETTER TO OUT / end
//   automaton  NAME / state A B ... / initial A / trans FROM LETTER TO / end
//   vmap NAME / pair ALPHA BETA ... / end
//   comp NAME over MACHINE / leaf ETA RHO STATE ... / end
// OUT, ALPHA, BETA, ETA, RHO are digit words; "-" or the epsilon glyph mean
// the empty word.
inline Document parse_document(const std::string& text) {
  detail::Cursor c(text);
  Document doc;
  int n = 0;

  auto tokens = c.next();
  auto claim_name = [&](const std::string& name) {
    bool taken = doc.machines.count(name) || doc.automata.count(name) ||
                 doc.maps.count(name) || doc.completions.count(name);
    if (taken) c.error("name '" + name + "' already defined");
    doc.order.push_back(name);
  };

  while (tokens) {
    const auto& t = *tokens;
    if (t[0] == "alphabet") {
      if (t.size() != 2) c.error("alphabet takes one number");
      n = detail::expect_int(c, t[1], "an alphabet size");
      if (n < 2 || n > max_alphabet) c.error("alphabet size out of range");
      tokens = c.next();
    } else if (t[0] == "transducer" || t[0] == "automaton") {
      if (n == 0) c.error("alphabet must come first");
      if (t.size() != 2) c.error(t[0] + " takes a name");
      bool is_machine = t[0] == "transducer";
      std::string name = t[1];
      claim_name(name);
      Transducer m(n);
      std::string initial;
      std::map<std::string, std::map<int, std::pair<std::string, Word>>> arrows;
      while ((tokens = c.next())) {
        const auto& u = *tokens;
        if (u[0] == "end") break;
        if (u[0] == "state") {
          if (u.size() < 2) c.error("state needs at least one name");
          for (std::size_t i = 1; i < u.size(); ++i) {
            if (m.state_named(u[i]) >= 0) c.error("duplicate state '" + u[i] + "'");
            m.add_state(u[i]);
          }
        } else if (u[0] == "initial") {
          if (u.size() != 2) c.error("initial takes one state");
          initial = u[1];
        } else if (u[0] == "trans") {
          std::size_t want = is_machine ? 5 : 4;
          if (u.size() != want) c.error("trans takes from, letter, to" +
                                        std::string(is_machine ? ", output" : ""));
          int x = detail::expect_int(c, u[2], "a letter");
          if (x < 0 || x >= n) c.error("letter out of range");
          Word out;
          if (is_machine) {
            try {
              out = parse_word(n, u[4]);
            } catch (const Error&) {
              c.error("bad output word '" + u[4] + "'");
            }
          }
          if (arrows[u[1]].count(x)) c.error("duplicate transition from '" + u[1] + "'");
          arrows[u[1]][x] = {u[3], out};
        } else {
          c.error("unexpected directive '" + u[0] + "'");
        }
      }
      if (!tokens) c.error("unterminated block '" + name + "'");
      if (initial.empty()) c.error("block '" + name + "' has no initial state");
      int q0 = m.state_named(initial);
      if (q0 < 0) c.error("unknown initial state '" + initial + "'");
      for (int q = 0; q < m.size(); ++q)
        for (int x = 0; x < n; ++x) {
          auto row = arrows.find(m.names[q]);
          if (row == arrows.end() || !row->second.count(x))
            c.error("state '" + m.names[q] + "' is missing letter " + std::to_string(x));
          auto [to, out] = row->second[x];
          int target = m.state_named(to);
          if (target < 0) c.error("unknown state '" + to + "'");
          m.set_arrow(q, x, target, out);
        }
      for (const auto& [from, row] : arrows)
        if (m.state_named(from) < 0) c.error("transition from unknown state '" + from + "'");
      if (is_machine) {
        doc.machines.emplace(name, InitialTransducer{std::move(m), q0});
      } else {
        doc.automata.emplace(name, forget_outputs(m, q0));
      }
      tokens = c.next();
    } else if (t[0] == "vmap") {
      if (n == 0) c.error("alphabet must come first");
      if (t.size() != 2) c.error("vmap takes a name");
      std::string name = t[1];
      claim_name(name);
      std::vector<std::pair<Word, Word>> pairs;
      while ((tokens = c.next())) {
        const auto& u = *tokens;
        if (u[0] == "end") break;
        if (u[0] != "pair" || u.size() != 3) c.error("expected: pair ALPHA BETA");
        try {
          pairs.push_back({parse_word(n, u[1]), parse_word(n, u[2])});
        } catch (const Error&) {
          c.error("bad word in pair");
        }
      }
      if (!tokens) c.error("unterminated block '" + name + "'");
      try {
        doc.maps.emplace(name, make_prefix_map(n, std::move(pairs)));
      } catch (const Error& e) {
        c.error(std::string("invalid map: ") + e.what());
      }
      tokens = c.next();
    } else if (t[0] == "comp") {
      if (n == 0) c.error("alphabet must come first");
      if (t.size() != 4 || t[2] != "over") c.error("expected: comp NAME over MACHINE");
      std::string name = t[1];
      std::string host_name = t[3];
      auto host = doc.machines.find(host_name);
      if (host == doc.machines.end()) c.error("unknown machine '" + host_name + "'");
      claim_name(name);
      std::vector<CompletionLeaf> leaves;
      while ((tokens = c.next())) {
        const auto& u = *tokens;
        if (u[0] == "end") break;
        if (u[0] != "leaf" || u.size() != 4) c.error("expected: leaf ETA RHO STATE");
        int state = host->second.m.state_named(u[3]);
        if (state < 0) c.error("unknown state '" + u[3] + "'");
        try {
          leaves.push_back({parse_word(n, u[1]), parse_word(n, u[2]), state});
        } catch (const Error&) {
          c.error("bad word in leaf");
        }
      }
      if (!tokens) c.error("unterminated block '" + name + "'");
      try {
        doc.completions.emplace(name,
                                make_completion(n, host_name, host->second.m, std::move(leaves)));
      } catch (const Error& e) {
        c.error(std::string("invalid completion: ") + e.what());
      }
      tokens = c.next();
    } else {
      c.error("unexpected directive '" + t[0] + "'");
    }
  }
  return doc;
}

inline std::string serialize(const std::string& name, const InitialTransducer& t,
                             bool with_alphabet = true) {
  std::ostringstream out;
  if (with_alphabet) out << "alphabet " << t.m.n << "\n";
  out << "transducer " << name << "\n";
  out << "state";
  for (const auto& s : t.m.names) out << " " << s;
  out << "\n";
  out << "initial " << t.m.names[t.q0] << "\n";
  for (int q = 0; q < t.m.size(); ++q)
    for (int x = 0; x < t.m.n; ++x)
      out << "trans " << t.m.names[q] << " " << x << " " << t.m.names[t.m.next[q][x]] << " "
          << display_word(t.m.out[q][x]) << "\n";
  out << "end\n";
  return out.str();
}

inline std::string serialize(const std::string& name, const Automaton& a,
                             bool with_alphabet = true) {
  std::ostringstream out;
  if (with_alphabet) out << "alphabet " << a.n << "\n";
  out << "automaton " << name << "\n";
  out << "state";
  for (const auto& s : a.names) out << " " << s;
  out << "\n";
  out << "initial " << a.names[a.q0] << "\n";
  for (int q = 0; q < a.size(); ++q)
    for (int x = 0; x < a.n; ++x)
      out << "trans " << a.names[q] << " " << x << " " << a.names[a.next[q][x]] << "\n";
  out << "end\n";
  return out.str();
}

inline std::string serialize(const std::string& name, const PrefixExchangeMap& v,
                             bool with_alphabet = true) {
  std::ostringstream out;
  if (with_alphabet) out << "alphabet " << v.n << "\n";
  out << "vmap " << name << "\n";
  for (const auto& [d, r] : v.table)
    out << "pair " << display_word(d) << " " << display_word(r) << "\n";
  out << "end\n";
  return out.str();
}

inline std::string serialize(const std::string& name, const CompletionMap& h,
                             bool with_alphabet = true) {
  std::ostringstream out;
  if (with_alphabet) out << "alphabet " << h.n << "\n";
  out << serialize(h.machine_name, InitialTransducer{h.machine, 0}, false);
  out << "comp " << name << " over " << h.machine_name << "\n";
  for (const CompletionLeaf& l : h.leaves)
    out << "leaf " << display_word(l.eta) << " " << display_word(l.rho) << " "
        << h.machine.names[l.state] << "\n";
  out << "end\n";
  return out.str();
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}
}  // namespace detail

inline std::string emit_dot(const std::string& name, const InitialTransducer& t) {
  std::ostringstream out;
  out << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  out << "  rankdir=LR;\n  node [shape=circle];\n";
  out << "  __start [shape=point];\n";
  out << "  __start -> q" << t.q0 << ";\n";
  for (int q = 0; q < t.m.size(); ++q)
    out << "  q" << q << " [label=\"" << detail::dot_escape(t.m.names[q]) << "\"];\n";
  for (int q = 0; q < t.m.size(); ++q)
    for (int x = 0; x < t.m.n; ++x)
      out << "  q" << q << " -> q" << t.m.next[q][x] << " [label=\"" << x << "|"
          << detail::dot_escape(display_word(t.m.out[q][x])) << "\"];\n";
  out << "}\n";
  return out.str();
}

inline std::string emit_dot(const std::string& name, const Automaton& a) {
  std::ostringstream out;
  out << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  out << "  rankdir=LR;\n  node [shape=circle];\n";
  out << "  __start [shape=point];\n";
  out << "  __start -> q" << a.q0 << ";\n";
  for (int q = 0; q < a.size(); ++q)
    out << "  q" << q << " [label=\"" << detail::dot_escape(a.names[q]) << "\"];\n";
  for (int q = 0; q < a.size(); ++q)
    for (int x = 0; x < a.n; ++x)
      out << "  q" << q << " -> q" << a.next[q][x] << " [label=\"" << x << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace tx
