#include "ltsep/automata.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace ltsep {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

Nfa::Nfa(std::size_t num_states, std::vector<std::string> alphabet)
    : num_states_(num_states), alphabet_(std::move(alphabet)) {
  std::set<std::string> seen;
  for (const auto& s : alphabet_) {
    if (s.empty()) throw std::invalid_argument("empty alphabet symbol");
    if (!seen.insert(s).second)
      throw std::invalid_argument("duplicate alphabet symbol '" + s + "'");
  }
  succ_.assign(num_states_, std::vector<std::vector<State>>(alphabet_.size()));
}

const std::string& Nfa::symbol_name(Symbol s) const {
  check_symbol(s);
  return alphabet_[s];
}

std::optional<Symbol> Nfa::find_symbol(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == name) return static_cast<Symbol>(i);
  return std::nullopt;
}

State Nfa::add_state() {
  succ_.emplace_back(alphabet_.size());
  return static_cast<State>(num_states_++);
}

void Nfa::add_transition(State from, Symbol symbol, State to) {
  check_state(from);
  check_state(to);
  check_symbol(symbol);
  auto& v = succ_[from][symbol];
  auto it = std::lower_bound(v.begin(), v.end(), to);
  if (it != v.end() && *it == to) return;
  v.insert(it, to);
  ++num_transitions_;
}

bool Nfa::has_transition(State from, Symbol symbol, State to) const {
  const auto& v = successors(from, symbol);
  return std::binary_search(v.begin(), v.end(), to);
}

const std::vector<State>& Nfa::successors(State from, Symbol symbol) const {
  check_state(from);
  check_symbol(symbol);
  return succ_[from][symbol];
}

std::vector<Transition> Nfa::transitions() const {
  std::vector<Transition> out;
  out.reserve(num_transitions_);
  for (State p = 0; p < num_states_; ++p)
    for (Symbol a = 0; a < alphabet_.size(); ++a)
      for (State q : succ_[p][a]) out.push_back({p, a, q});
  return out;
}

StateSet Nfa::step(const StateSet& from, Symbol symbol) const {
  check_symbol(symbol);
  StateSet out;
  for (State p : from) {
    check_state(p);
    out.insert(succ_[p][symbol].begin(), succ_[p][symbol].end());
  }
  return out;
}

bool Nfa::is_deterministic() const {
  for (State p = 0; p < num_states_; ++p)
    for (Symbol a = 0; a < alphabet_.size(); ++a)
      if (succ_[p][a].size() > 1) return false;
  return true;
}

void Nfa::check_state(State q) const {
  if (q >= num_states_)
    throw std::out_of_range("state " + std::to_string(q) + " out of range");
}

void Nfa::check_symbol(Symbol s) const {
  if (s >= alphabet_.size())
    throw std::out_of_range("symbol index " + std::to_string(s) +
                            " out of range");
}

void LangSpec::validate() const {
  for (const StateSet* s : {&i1, &f1, &i2, &f2})
    for (State q : *s)
      if (q >= nfa.num_states())
        throw std::invalid_argument("state set mentions unknown state " +
                                    std::to_string(q));
}

namespace {

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

State parse_state_id(const std::string& tok, std::size_t line) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) {
        return c >= '0' && c <= '9';
      }))
    throw ParseError(line, "invalid state id '" + tok + "'");
  if (tok.size() > 9) throw ParseError(line, "state id too large '" + tok + "'");
  return static_cast<State>(std::stoul(tok));
}

}  // namespace

LangSpec parse_spec(std::string_view text) {
  struct PendingTrans {
    std::string from, symbol, to;
    std::size_t line;
  };
  std::optional<std::vector<std::string>> alphabet;
  std::optional<std::size_t> num_states;
  std::vector<PendingTrans> trans;
  std::map<std::string, std::pair<std::vector<std::string>, std::size_t>> sets;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    std::size_t first = raw.find_first_not_of(" \t");
    if (first == std::string_view::npos || raw[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    std::size_t colon = raw.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line_no, "expected 'key: value'");
    std::string key(raw.substr(first, colon - first));
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
      key.pop_back();
    auto fields = split_ws(raw.substr(colon + 1));

    if (key == "alphabet") {
      if (alphabet) throw ParseError(line_no, "duplicate alphabet section");
      std::set<std::string> seen;
      for (const auto& s : fields)
        if (!seen.insert(s).second)
          throw ParseError(line_no, "duplicate symbol '" + s + "'");
      alphabet = fields;
    } else if (key == "states") {
      if (num_states) throw ParseError(line_no, "duplicate states section");
      if (fields.size() != 1) throw ParseError(line_no, "expected one count");
      num_states = parse_state_id(fields[0], line_no);
    } else if (key == "trans") {
      if (fields.size() != 3)
        throw ParseError(line_no, "expected 'trans: p symbol q'");
      trans.push_back({fields[0], fields[1], fields[2], line_no});
    } else if (key == "I1" || key == "F1" || key == "I2" || key == "F2") {
      if (sets.count(key)) throw ParseError(line_no, "duplicate " + key);
      sets[key] = {fields, line_no};
    } else {
      throw ParseError(line_no, "unknown section '" + key + "'");
    }
    if (end == text.size()) break;
  }

  std::size_t eof_line = line_no + 1;
  if (!alphabet) throw ParseError(eof_line, "missing alphabet section");
  if (!num_states) throw ParseError(eof_line, "missing states section");
  for (const char* k : {"I1", "F1", "I2", "F2"})
    if (!sets.count(k))
      throw ParseError(eof_line, std::string("missing ") + k + " section");

  LangSpec spec;
  spec.nfa = Nfa(*num_states, *alphabet);
  auto state_ref = [&](const std::string& tok, std::size_t line) {
    State q = parse_state_id(tok, line);
    if (q >= *num_states)
      throw ParseError(line, "undeclared state " + std::to_string(q));
    return q;
  };
  for (const auto& t : trans) {
    State p = state_ref(t.from, t.line);
    State q = state_ref(t.to, t.line);
    auto sym = spec.nfa.find_symbol(t.symbol);
    if (!sym) throw ParseError(t.line, "unknown symbol '" + t.symbol + "'");
    spec.nfa.add_transition(p, *sym, q);
  }
  auto fill = [&](const char* key, StateSet& out) {
    const auto& [fields, line] = sets[key];
    for (const auto& tok : fields) out.insert(state_ref(tok, line));
  };
  fill("I1", spec.i1);
  fill("F1", spec.f1);
  fill("I2", spec.i2);
  fill("F2", spec.f2);
  return spec;
}

LangSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string serialize_spec(const LangSpec& spec) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& s : spec.nfa.alphabet()) out << ' ' << s;
  out << "\nstates: " << spec.nfa.num_states() << '\n';
  for (const auto& t : spec.nfa.transitions())
    out << "trans: " << t.from << ' ' << spec.nfa.symbol_name(t.symbol) << ' '
        << t.to << '\n';
  auto set_line = [&](const char* key, const StateSet& s) {
    out << key << ':';
    for (State q : s) out << ' ' << q;
    out << '\n';
  };
  set_line("I1", spec.i1);
  set_line("F1", spec.f1);
  set_line("I2", spec.i2);
  set_line("F2", spec.f2);
  return out.str();
}

namespace {

bool single_char_alphabet(const Nfa& nfa) {
  return std::all_of(nfa.alphabet().begin(), nfa.alphabet().end(),
                     [](const std::string& s) { return s.size() == 1; });
}

}  // namespace

Word parse_word(const Nfa& nfa, std::string_view text) {
  auto tokens = split_ws(text);
  if (tokens.size() == 1 && tokens[0] == "ε" && !nfa.find_symbol(tokens[0])) return {};
  if (tokens.size() == 1 && single_char_alphabet(nfa) && tokens[0].size() > 1) {
    std::string joined = tokens[0];
    tokens.clear();
    for (char c : joined) tokens.emplace_back(1, c);
  }
  Word w;
  for (const auto& tok : tokens) {
    auto s = nfa.find_symbol(tok);
    if (!s) throw std::invalid_argument("unknown symbol '" + tok + "'");
    w.push_back(*s);
  }
  return w;
}

std::string format_word(const Nfa& nfa, const Word& word) {
  std::string out;
  bool compact = single_char_alphabet(nfa);
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i && !compact) out += ' ';
    out += nfa.symbol_name(word[i]);
  }
  return out;
}

std::vector<std::string> word_symbols(const Nfa& nfa, const Word& word) {
  std::vector<std::string> out;
  out.reserve(word.size());
  for (Symbol s : word) out.push_back(nfa.symbol_name(s));
  return out;
}

bool accepts(const Nfa& nfa, const StateSet& initial, const StateSet& final,
             const Word& word) {
  StateSet cur = initial;
  for (Symbol s : word) {
    cur = nfa.step(cur, s);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(),
                     [&](State q) { return final.count(q) > 0; });
}

StateSet Product::pairs(const StateSet& left, const StateSet& right) const {
  StateSet out;
  for (State p : left)
    for (State q : right) out.insert(index(p, q));
  return out;
}

Product product(const Nfa& a, const Nfa& b) {
  if (a.alphabet() != b.alphabet())
    throw std::invalid_argument("product: alphabet mismatch");
  Product prod;
  prod.right_states = b.num_states();
  prod.nfa = Nfa(a.num_states() * b.num_states(), a.alphabet());
  for (State p = 0; p < a.num_states(); ++p)
    for (Symbol s = 0; s < a.alphabet_size(); ++s)
      for (State p2 : a.successors(p, s))
        for (State q = 0; q < b.num_states(); ++q)
          for (State q2 : b.successors(q, s))
            prod.nfa.add_transition(prod.index(p, q), s, prod.index(p2, q2));
  return prod;
}

StateSet reachable(const Nfa& nfa, const StateSet& from) {
  std::vector<char> seen(nfa.num_states(), 0);
  std::deque<State> queue;
  for (State q : from) {
    if (q >= nfa.num_states()) throw std::out_of_range("state out of range");
    if (!seen[q]) seen[q] = 1, queue.push_back(q);
  }
  while (!queue.empty()) {
    State p = queue.front();
    queue.pop_front();
    for (Symbol s = 0; s < nfa.alphabet_size(); ++s)
      for (State q : nfa.successors(p, s))
        if (!seen[q]) seen[q] = 1, queue.push_back(q);
  }
  StateSet out;
  for (State q = 0; q < nfa.num_states(); ++q)
    if (seen[q]) out.insert(q);
  return out;
}

StateSet coreachable(const Nfa& nfa, const StateSet& to) {
  std::vector<std::vector<State>> pred(nfa.num_states());
  for (const auto& t : nfa.transitions()) pred[t.to].push_back(t.from);
  std::vector<char> seen(nfa.num_states(), 0);
  std::deque<State> queue;
  for (State q : to) {
    if (q >= nfa.num_states()) throw std::out_of_range("state out of range");
    if (!seen[q]) seen[q] = 1, queue.push_back(q);
  }
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (State p : pred[q])
      if (!seen[p]) seen[p] = 1, queue.push_back(p);
  }
  StateSet out;
  for (State q = 0; q < nfa.num_states(); ++q)
    if (seen[q]) out.insert(q);
  return out;
}

bool is_empty(const Nfa& nfa, const StateSet& initial, const StateSet& final) {
  StateSet r = reachable(nfa, initial);
  return std::none_of(final.begin(), final.end(),
                      [&](State q) { return r.count(q) > 0; });
}

std::optional<Word> shortest_word(const Nfa& nfa, const StateSet& initial,
                                  const StateSet& final) {
  // BFS with symbols explored in index order yields the shortlex-least word
  // because states are enqueued at their first (shortlex-least) discovery.
  std::vector<State> parent(nfa.num_states(), 0);
  std::vector<Symbol> via(nfa.num_states(), 0);
  std::vector<char> seen(nfa.num_states(), 0);
  std::deque<State> queue;
  for (State q : initial) {
    if (q >= nfa.num_states()) throw std::out_of_range("state out of range");
    seen[q] = 1;
    queue.push_back(q);
  }
  for (State q : initial)
    if (final.count(q)) return Word{};
  while (!queue.empty()) {
    State p = queue.front();
    queue.pop_front();
    for (Symbol s = 0; s < nfa.alphabet_size(); ++s)
      for (State q : nfa.successors(p, s)) {
        if (seen[q]) continue;
        seen[q] = 1;
        parent[q] = p;
        via[q] = s;
        if (final.count(q)) {
          Word w;
          for (State x = q; !initial.count(x); x = parent[x])
            w.push_back(via[x]);
          std::reverse(w.begin(), w.end());
          return w;
        }
        queue.push_back(q);
      }
  }
  return std::nullopt;
}

std::optional<Word> shortest_common_word(const LangSpec& spec) {
  Product prod = product(spec.nfa, spec.nfa);
  return shortest_word(prod.nfa, prod.pairs(spec.i1, spec.i2),
                       prod.pairs(spec.f1, spec.f2));
}

Nfa trim(const Nfa& nfa,
         const std::vector<std::pair<StateSet, StateSet>>& languages,
         std::vector<std::optional<State>>* old_to_new) {
  std::vector<char> useful(nfa.num_states(), 0);
  for (const auto& [i, f] : languages) {
    StateSet fw = reachable(nfa, i);
    StateSet bw = coreachable(nfa, f);
    for (State q : fw)
      if (bw.count(q)) useful[q] = 1;
  }
  std::vector<std::optional<State>> map(nfa.num_states());
  State next = 0;
  for (State q = 0; q < nfa.num_states(); ++q)
    if (useful[q]) map[q] = next++;
  Nfa out(next, nfa.alphabet());
  for (const auto& t : nfa.transitions())
    if (map[t.from] && map[t.to]) out.add_transition(*map[t.from], t.symbol, *map[t.to]);
  if (old_to_new) *old_to_new = std::move(map);
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string dot_export(const Nfa& nfa, const std::vector<DotMark>& initial_marks,
                       const std::vector<DotMark>& final_marks) {
  std::ostringstream out;
  out << "digraph nfa {\n  rankdir=LR;\n";
  for (State q = 0; q < nfa.num_states(); ++q) {
    std::string ins, fins;
    for (const auto& m : initial_marks)
      if (m.states.count(q)) ins += (ins.empty() ? "" : ",") + m.label;
    for (const auto& m : final_marks)
      if (m.states.count(q)) fins += (fins.empty() ? "" : ",") + m.label;
    out << "  q" << q << " [label=\"" << q;
    if (!ins.empty()) out << "\\nin:" << dot_escape(ins);
    if (!fins.empty()) out << "\\nout:" << dot_escape(fins);
    out << "\"" << (fins.empty() ? "" : ", shape=doublecircle") << "];\n";
  }
  std::map<std::pair<State, State>, std::vector<std::string>> edges;
  for (const auto& t : nfa.transitions())
    edges[{t.from, t.to}].push_back(nfa.symbol_name(t.symbol));
  for (const auto& [pq, labels] : edges) {
    std::string label;
    for (const auto& l : labels) label += (label.empty() ? "" : ",") + l;
    out << "  q" << pq.first << " -> q" << pq.second << " [label=\""
        << dot_escape(label) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string dot_export(const LangSpec& spec) {
  return dot_export(spec.nfa, {{"I1", spec.i1}, {"I2", spec.i2}},
                    {{"F1", spec.f1}, {"F2", spec.f2}});
}

}  // namespace ltsep
