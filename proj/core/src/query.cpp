#include "ucq/query.hpp"
#include <functional>

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "ucq/morphism.hpp"

namespace ucq {

int popcount(VarSet s) { return std::popcount(s); }

std::vector<VarId> set_to_vars(VarSet s) {
  std::vector<VarId> out;
  for (VarId v = 0; s >> v; ++v)
    if (contains(s, v)) out.push_back(v);
  return out;
}

VarSet Atom::var_set() const {
  VarSet s = 0;
  for (VarId v : args) s |= var_bit(v);
  return s;
}

VarSet CQ::free_set() const {
  VarSet s = 0;
  for (VarId v : head) s |= var_bit(v);
  return s;
}

VarSet CQ::all_vars() const {
  VarSet s = 0;
  for (const Atom& a : body) s |= a.var_set();
  return s;
}

bool CQ::self_join_free() const {
  std::vector<RelId> seen;
  for (const Atom& a : body) {
    if (std::find(seen.begin(), seen.end(), a.rel) != seen.end()) return false;
    seen.push_back(a.rel);
  }
  return true;
}

RelId UCQ::rel_id(const std::string& name) const {
  for (size_t i = 0; i < rel_names.size(); ++i)
    if (rel_names[i] == name) return static_cast<RelId>(i);
  return -1;
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg),
      line(line),
      column(column) {}

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        advance();
      } else if (text[pos] == '%') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line, col);
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool try_consume(char c) {
    if (eof() || peek() != c) return false;
    advance();
    return true;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !ident_char(text[pos])) fail("expected identifier");
    std::string out;
    while (pos < text.size() && ident_char(text[pos])) {
      out.push_back(text[pos]);
      advance();
    }
    return out;
  }
};

}  // namespace

UCQ parse_ucq(const std::string& text) {
  UCQ q;
  Lexer lx(text);

  while (!lx.eof()) {
    CQ cq;
    std::vector<std::pair<int, int>> head_pos;  // line/col per head var
    cq.name = lx.ident();
    lx.expect('(');

    auto var_of = [&](const std::string& name) -> VarId {
      for (size_t i = 0; i < cq.var_names.size(); ++i)
        if (cq.var_names[i] == name) return static_cast<VarId>(i);
      if (cq.var_count() >= kMaxVarsPerCq)
        lx.fail("too many variables in one rule");
      cq.var_names.push_back(name);
      return cq.var_count() - 1;
    };

    if (!lx.try_consume(')')) {
      do {
        head_pos.emplace_back(lx.line, lx.col);
        cq.head.push_back(var_of(lx.ident()));
      } while (lx.try_consume(','));
      lx.expect(')');
    }
    lx.expect('<');
    lx.expect('-');

    do {
      Atom a;
      int rline = lx.line, rcol = lx.col;
      std::string rname = lx.ident();
      lx.expect('(');
      if (!lx.try_consume(')')) {
        do {
          a.args.push_back(var_of(lx.ident()));
        } while (lx.try_consume(','));
        lx.expect(')');
      }
      RelId rid = q.rel_id(rname);
      if (rid < 0) {
        q.rel_names.push_back(rname);
        q.rel_arity.push_back(static_cast<int>(a.args.size()));
        rid = static_cast<RelId>(q.rel_names.size() - 1);
      } else if (q.rel_arity[rid] != static_cast<int>(a.args.size())) {
        throw ParseError("relation " + rname + " used with arity " +
                             std::to_string(a.args.size()) + " but declared " +
                             std::to_string(q.rel_arity[rid]),
                         rline, rcol);
      }
      a.rel = rid;
      cq.body.push_back(std::move(a));
    } while (lx.try_consume(','));
    lx.expect('.');

    VarSet body_vars = cq.all_vars();
    for (size_t i = 0; i < cq.head.size(); ++i) {
      if (!contains(body_vars, cq.head[i]))
        throw ParseError("head variable " + cq.var_names[cq.head[i]] +
                             " does not occur in the body",
                         head_pos[i].first, head_pos[i].second);
    }
    if (q.disjuncts.empty()) {
      q.head_arity = static_cast<int>(cq.head.size());
    } else if (static_cast<int>(cq.head.size()) != q.head_arity) {
      throw ParseError("head arity " + std::to_string(cq.head.size()) +
                           " differs from earlier rules (" +
                           std::to_string(q.head_arity) + ")",
                       lx.line, lx.col);
    }
    q.disjuncts.push_back(std::move(cq));
  }
  if (q.disjuncts.empty()) throw ParseError("no rules found", lx.line, lx.col);
  return q;
}

std::string print_atom(const UCQ& q, const CQ& cq, const Atom& a) {
  std::string out = q.rel_names[a.rel] + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += cq.var_names[a.args[i]];
  }
  return out + ")";
}

std::string print_cq(const UCQ& q, const CQ& cq) {
  std::string out = cq.name + "(";
  for (size_t i = 0; i < cq.head.size(); ++i) {
    if (i) out += ",";
    out += cq.var_names[cq.head[i]];
  }
  out += ") <- ";
  for (size_t i = 0; i < cq.body.size(); ++i) {
    if (i) out += ", ";
    out += print_atom(q, cq, cq.body[i]);
  }
  return out + ".";
}

std::string print_ucq(const UCQ& q) {
  std::string out;
  for (const CQ& cq : q.disjuncts) {
    out += print_cq(q, cq);
    out += "\n";
  }
  return out;
}

UCQ remove_redundant(const UCQ& q) {
  const size_t n = q.disjuncts.size();
  std::vector<std::vector<bool>> cont(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) cont[i][j] = cq_contains(q, i, j);  // disjunct i ⊆ disjunct j

  std::vector<bool> drop(n, false);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j || drop[j]) continue;
      // i is redundant against j unless they are equivalent and i is earlier.
      if (cont[i][j] && (!cont[j][i] || j < i)) {
        drop[i] = true;
        break;
      }
    }
  }
  UCQ out = q;
  out.disjuncts.clear();
  for (size_t i = 0; i < n; ++i)
    if (!drop[i]) out.disjuncts.push_back(q.disjuncts[i]);
  return out;
}

VarSet MultiHeadCQ::head_set(int i) const {
  VarSet s = 0;
  for (VarId v : heads[i]) s |= var_bit(v);
  return s;
}

std::optional<MultiHeadCQ> normalize_body_isomorphic(const UCQ& q) {
  const size_t n = q.disjuncts.size();
  MultiHeadCQ out;
  out.body_owner = q.disjuncts.back();
  for (size_t i = 0; i < n; ++i) out.names.push_back(q.disjuncts[i].name);

  std::vector<VarId> ident(q.disjuncts.back().var_count());
  for (size_t v = 0; v < ident.size(); ++v) ident[v] = static_cast<VarId>(v);

  if (n == 1) {
    out.heads.push_back(q.disjuncts[0].head);
    out.to_base.push_back(ident);
    return out;
  }
  for (const CQ& d : q.disjuncts)
    if (!d.self_join_free()) return std::nullopt;

  const size_t base = n - 1;
  for (size_t i = 0; i < n; ++i) {
    if (i == base) {
      out.heads.push_back(q.disjuncts[base].head);
      out.to_base.push_back(ident);
      continue;
    }
    // A body-homomorphism from disjunct i into the base body, with one in the
    // opposite direction, is a bijection; it rewrites i's head in base scope.
    auto iso = is_body_isomorphic(q, base, i);
    if (!iso) return std::nullopt;
    std::vector<VarId> head;
    for (VarId v : q.disjuncts[i].head) head.push_back(iso->map[v]);
    out.heads.push_back(std::move(head));
    out.to_base.push_back(iso->map);
  }
  return out;
}

}  // namespace ucq
