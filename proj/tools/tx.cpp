// Command line workbench for the transducer algebra library.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tx/tx.hpp"

namespace {

int exit_code_for(tx::Errc c) {
  switch (c) {
    case tx::Errc::parse_error:
    case tx::Errc::invalid_input:
      return 2;
    case tx::Errc::budget_exceeded:
    case tx::Errc::order_budget_exceeded:
      return 3;
    default:
      return 1;
  }
}

tx::Budget budget_from_env() {
  tx::Budget b;
  const char* raw = std::getenv("TX_BUDGET");
  if (!raw) return b;
  long long configs = 0, depth = 0;
  if (std::sscanf(raw, "%lld,%lld", &configs, &depth) != 2 || configs < 1 || depth < 1)
    tx::fail(tx::Errc::invalid_input, "TX_BUDGET wants '<configurations>,<depth>'");
  b.max_configurations = configs;
  b.max_depth = static_cast<int>(depth);
  return b;
}

struct Session {
  tx::Document doc;
  tx::Budget budget;

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) tx::fail(tx::Errc::parse_error, "cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    doc = tx::parse_document(text.str());
  }

  int alphabet() const {
    if (!doc.machines.empty()) return doc.machines.begin()->second.m.n;
    if (!doc.automata.empty()) return doc.automata.begin()->second.n;
    if (!doc.maps.empty()) return doc.maps.begin()->second.n;
    return 2;
  }

  tx::InitialTransducer machine(const std::string& name) const {
    auto it = doc.machines.find(name);
    if (it != doc.machines.end()) return it->second;
    if (auto b = tx::builtin_machine(name)) return *b;
    tx::fail(tx::Errc::invalid_input, "unknown machine '" + name + "'");
  }

  tx::Automaton automaton(const std::string& name) const {
    auto it = doc.automata.find(name);
    if (it != doc.automata.end()) return it->second;
    tx::InitialTransducer t = machine(name);
    return tx::forget_outputs(t.m, t.q0);
  }

  // A map is either a named vmap block or an inline table like "0>1,1>0".
  tx::PrefixExchangeMap vmap(const std::string& spec) const {
    auto it = doc.maps.find(spec);
    if (it != doc.maps.end()) return it->second;
    if (spec.find('>') == std::string::npos)
      tx::fail(tx::Errc::invalid_input, "unknown map '" + spec + "'");
    int n = alphabet();
    std::vector<std::pair<tx::Word, tx::Word>> pairs;
    std::string normalized = spec;
    std::replace(normalized.begin(), normalized.end(), ';', ',');
    std::istringstream ss(normalized);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto at = item.find('>');
      if (at == std::string::npos)
        tx::fail(tx::Errc::invalid_input, "map entries look like ALPHA>BETA");
      pairs.push_back({tx::parse_word(n, item.substr(0, at)),
                       tx::parse_word(n, item.substr(at + 1))});
    }
    return tx::make_prefix_map(n, std::move(pairs));
  }

  const tx::CompletionMap& completion(const std::string& name) const {
    auto it = doc.completions.find(name);
    if (it == doc.completions.end())
      tx::fail(tx::Errc::invalid_input, "unknown completion '" + name + "'");
    return it->second;
  }
};

std::string show_states(const tx::Transducer& m, const std::vector<int>& qs) {
  if (qs.empty()) return "none";
  std::string out;
  for (int q : qs) out += (out.empty() ? "" : " ") + m.names[q];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transducer algebra workbench: products, inverses, synchronization,\n"
               "prefix exchange maps, conjugation, and completion maps on Cantor space"};
  app.require_subcommand(1);
  std::string file;
  app.add_option("-f,--file", file, "definitions file with transducer/automaton/vmap/comp blocks");

  std::string m1, m2, map_spec, comp_name, ep, ep_state;
  std::vector<std::string> words;
  int kmax = 16;
  long long max_order = 1 << 20;
  int len = 3, depth = 4;
  bool inverse = false;

  auto* c_validate = app.add_subcommand("validate", "reachability and degeneracy report");
  c_validate->add_option("machine", m1)->required();

  auto* c_minimize = app.add_subcommand("minimize", "canonical minimal machine and preamble");
  c_minimize->add_option("machine", m1)->required();

  auto* c_invert = app.add_subcommand("invert", "inverse machine of a homeomorphism");
  c_invert->add_option("machine", m1)->required();

  auto* c_product = app.add_subcommand("product", "compose two machines, first then second");
  c_product->add_option("first", m1)->required();
  c_product->add_option("second", m2)->required();

  auto* c_level = app.add_subcommand("sync-level", "least level at which states synchronize");
  c_level->add_option("machine", m1)->required();
  c_level->add_option("--max", kmax, "give up past this level");

  auto* c_classify = app.add_subcommand("classify", "bi / one_way / not_synchronizing");
  c_classify->add_option("machine", m1)->required();
  c_classify->add_option("--max", kmax, "give up past this level");

  auto* c_core = app.add_subcommand("core", "states reachable after every long word");
  c_core->add_option("machine", m1)->required();
  c_core->add_option("--max", kmax, "give up past this level");

  auto* c_collapse = app.add_subcommand("collapse", "merge states with equal successor rows");
  c_collapse->add_option("machine", m1)->required();

  auto* c_relation = app.add_subcommand("relation", "class of a word under the collapsed relation");
  c_relation->add_option("machine", m1)->required();
  c_relation->add_option("word", words, "one class per word, in order")->required();

  auto* c_member = app.add_subcommand("member", "does a prefix map preserve the relation");
  c_member->add_option("machine", m1)->required();
  c_member->add_option("map", map_spec)->required();

  auto* c_conj = app.add_subcommand("conj", "conjugate a prefix map by a machine");
  c_conj->add_option("machine", m1)->required();
  c_conj->add_option("map", map_spec)->required();
  c_conj->add_flag("--inverse", inverse, "conjugate by the inverse machine instead");

  auto* c_group = app.add_subcommand("group-ts", "block group of the machine times its inverse");
  c_group->add_option("machine", m1)->required();
  c_group->add_option("--max-order", max_order, "give up past this order");

  auto* c_viable = app.add_subcommand("viable", "validity and effectiveness of a completion");
  c_viable->add_option("completion", comp_name)->required();

  auto* c_pinv = app.add_subcommand("partial-inverse", "invert every state on its image");
  c_pinv->add_option("machine", m1)->required();

  auto* c_contract = app.add_subcommand("contracting", "do state products settle into the machine");
  c_contract->add_option("machine", m1)->required();
  c_contract->add_option("--len", len, "longest product of machine and inverse factors");
  c_contract->add_option("--depth", depth, "read depth allowed before settling");

  auto* c_eval = app.add_subcommand("eval", "apply a machine to an eventually periodic word");
  c_eval->add_option("machine", m1)->required();
  c_eval->add_option("state_or_word", ep_state,
                     "state to start from (defaults to the initial state) or, when the"
                     " last argument is omitted, the word itself")
      ->required();
  c_eval->add_option("word", ep, "eventually periodic word, written PREFIX(PERIOD)");

  auto* c_dot = app.add_subcommand("dot", "graphviz drawing of a machine or automaton");
  c_dot->add_option("machine", m1)->required();

  auto* c_check = app.add_subcommand("paper-check", "run the built-in reference check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Session s;
    s.budget = budget_from_env();
    if (!file.empty()) s.load(file);

    if (*c_validate) {
      tx::InitialTransducer t = s.machine(m1);
      tx::ValidationReport r = tx::validate(t);
      std::cout << "states " << t.m.size() << "\n";
      std::cout << "unreachable " << show_states(t.m, r.unreachable) << "\n";
      std::cout << "degenerate " << show_states(t.m, r.degenerate) << "\n";
      std::cout << "synchronous " << (t.m.is_synchronous() ? "yes" : "no") << "\n";
      return r.degenerate.empty() ? 0 : 1;
    }
    if (*c_minimize) {
      tx::Minimized r = tx::minimize(s.machine(m1));
      std::cout << "# preamble " << tx::display_word(r.preamble) << "\n";
      std::cout << tx::serialize(m1, r.machine);
      return 0;
    }
    if (*c_invert) {
      std::cout << tx::serialize(m1 + "_inv", tx::invert(s.machine(m1), s.budget));
      return 0;
    }
    if (*c_product) {
      std::cout << tx::serialize(m1 + "." + m2, tx::product(s.machine(m1), s.machine(m2)));
      return 0;
    }
    if (*c_level) {
      auto level = tx::synchronizing_level(s.machine(m1).m, kmax);
      if (!level) {
        std::cout << "not synchronizing within level " << kmax << "\n";
        return 1;
      }
      std::cout << "level " << *level << "\n";
      return 0;
    }
    if (*c_classify) {
      tx::Synchronicity verdict = tx::classify_synchronicity(s.machine(m1), kmax, s.budget);
      std::cout << tx::to_string(verdict) << "\n";
      return verdict == tx::Synchronicity::not_synchronizing ? 1 : 0;
    }
    if (*c_core) {
      tx::Transducer c = tx::core(s.machine(m1).m, kmax);
      std::cout << "# no distinguished initial state; serialized from its first state\n";
      std::cout << tx::serialize(m1 + "_core", tx::InitialTransducer{c, 0});
      return 0;
    }
    if (*c_collapse) {
      tx::CollapsedAutomaton c = tx::collapse(s.automaton(m1));
      int classes = 0;
      for (int cls : c.class_of) classes = std::max(classes, cls + 1);
      std::cout << "rounds " << c.steps << "\n"
                << "classes " << classes << "\n";
      for (int cls = 0; cls < classes; ++cls) {
        std::cout << "class " << cls << ":";
        for (std::size_t q = 0; q < c.class_of.size(); ++q)
          if (c.class_of[q] == cls) std::cout << " " << c.original.names[q];
        std::cout << "\n";
      }
      return 0;
    }
    if (*c_relation) {
      tx::Automaton a = s.automaton(m1);
      tx::CollapsedAutomaton c = tx::collapse(a);
      for (const std::string& w : words)
        std::cout << "class " << tx::relation_classify(c, tx::parse_word(a.n, w)) << "\n";
      return 0;
    }
    if (*c_member) {
      tx::CollapsedAutomaton c = tx::collapse(s.automaton(m1));
      tx::MembershipVerdict v = tx::preserves_relation(s.vmap(map_spec), c);
      std::cout << "member " << (v.member ? "yes" : "no") << "\n";
      for (const tx::MembershipWitness& w : v.witnesses)
        std::cout << "  " << tx::display_word(w.domain) << " -> " << tx::display_word(w.range)
                  << " lands in class " << w.domain_class << " vs " << w.range_class << "\n";
      return v.member ? 0 : 1;
    }
    if (*c_conj) {
      tx::InitialTransducer t = s.machine(m1);
      tx::PrefixExchangeMap v = s.vmap(map_spec);
      if (inverse) {
        std::cout << tx::serialize("conj", tx::conjugate_overgroup(v, t, m1, kmax, s.budget));
      } else {
        std::cout << tx::serialize("conj", tx::conjugate_subgroup(v, t, kmax, s.budget),
                                   /*with_alphabet=*/true);
      }
      return 0;
    }
    if (*c_group) {
      tx::BlockPermutationGroup g = tx::automaton_group_ts(s.machine(m1), max_order, s.budget);
      std::cout << "block length " << g.block_length << "\n"
                << "order " << g.order << "\n"
                << "generators " << g.generators.size() << "\n";
      for (const auto& perm : g.generators) {
        std::cout << " ";
        for (int img : perm) std::cout << " " << img;
        std::cout << "\n";
      }
      return 0;
    }
    if (*c_viable) {
      const tx::CompletionMap& h = s.completion(comp_name);
      std::vector<std::pair<tx::Word, int>> pairs;
      for (const tx::CompletionLeaf& l : h.leaves) pairs.push_back({l.rho, l.state});
      tx::ViableVerdict v = tx::validate_viable(h.machine, pairs, s.budget);
      std::cout << "valid " << (v.valid ? "yes" : "no") << "\n"
                << "effective " << (v.effective ? "yes" : "no") << "\n";
      return v.valid && v.effective ? 0 : 1;
    }
    if (*c_pinv) {
      tx::InverseMachine pi = tx::partial_inverse(s.machine(m1).m, s.budget);
      std::cout << "# states invert the matching machine state on its image;\n";
      std::cout << "# serialized from its first state\n";
      std::cout << tx::serialize(m1 + "_pinv", tx::InitialTransducer{pi.m, 0});
      return 0;
    }
    if (*c_contract) {
      tx::ContractingReport r = tx::contracting_check(s.machine(m1).m, len, depth, s.budget);
      switch (r.verdict) {
        case tx::ContractingReport::Verdict::contracting_to_depth:
          std::cout << "contracting to depth " << r.depth << "\n";
          return 0;
        case tx::ContractingReport::Verdict::counterexample:
          std::cout << "counterexample: product " << r.counter_product << " state "
                    << r.counter_state << "\n";
          return 1;
        case tx::ContractingReport::Verdict::inconclusive:
          std::cout << "inconclusive within budget\n";
          return 3;
      }
    }
    if (*c_eval) {
      tx::InitialTransducer t = s.machine(m1);
      int from = t.q0;
      if (ep.empty()) {
        ep = ep_state;
      } else {
        from = t.m.state_named(ep_state);
        if (from < 0) tx::fail(tx::Errc::invalid_input, "unknown state '" + ep_state + "'");
      }
      tx::EpWord x = tx::parse_ep(t.m.n, ep);
      std::cout << tx::to_string(tx::evaluate_ep(t.m, from, x)) << "\n";
      return 0;
    }
    if (*c_dot) {
      if (s.doc.automata.count(m1))
        std::cout << tx::emit_dot(m1, s.doc.automata.at(m1));
      else
        std::cout << tx::emit_dot(m1, s.machine(m1));
      return 0;
    }
    if (*c_check) {
      std::vector<tx::CheckResult> results = tx::run_reference_checks();
      int failed = 0;
      for (const tx::CheckResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.pass) std::cout << "  [" << r.detail << "]";
        std::cout << "\n";
        failed += !r.pass;
      }
      if (failed)
        std::cout << failed << " of " << results.size() << " checks failed\n";
      else
        std::cout << "all " << results.size() << " checks passed\n";
      return failed ? 1 : 0;
    }
  } catch (const tx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
