#include "elkbc/normalizer.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace elkbc {

ConceptExpr ConceptExpr::conj(ConceptExpr a, ConceptExpr b) {
  ConceptExpr e{Kind::kAnd, {}, {}};
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

ConceptExpr ConceptExpr::some(std::string role, ConceptExpr filler) {
  ConceptExpr e{Kind::kSome, std::move(role), {}};
  e.args.push_back(std::move(filler));
  return e;
}

std::string nominal_concept_name(std::string_view individual) {
  return "{" + std::string(individual) + "}";
}

// ---------------------------------------------------------------------------
// .elpp parsing

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  InputAxiom axiom() {
    const auto head = word("axiom keyword");
    InputAxiom ax;
    expect('(');
    if (head == "sub" || head == "equiv") {
      ax.kind = head == "sub" ? InputAxiom::Kind::kSub : InputAxiom::Kind::kEquiv;
      ax.lhs = concept_expr();
      expect(',');
      ax.rhs = concept_expr();
    } else if (head == "instance") {
      ax.kind = InputAxiom::Kind::kInstance;
      ax.lhs = concept_expr();
      expect(',');
      ax.individuals.push_back(word("individual"));
    } else if (head == "role") {
      ax.kind = InputAxiom::Kind::kRoleAssertion;
      ax.roles.push_back(word("role"));
      expect(',');
      ax.individuals.push_back(word("individual"));
      expect(',');
      ax.individuals.push_back(word("individual"));
    } else if (head == "rsub") {
      ax.kind = InputAxiom::Kind::kRoleChainSub;
      ax.roles.push_back(word("role"));
      while (true) {
        skip_ws();
        if (peek() == ',') break;
        const auto sep = word("'o' or ','");
        if (sep != "o") fail("expected 'o' between chained roles, got '" + sep + "'");
        ax.roles.push_back(word("role"));
      }
      expect(',');
      ax.roles.push_back(word("role"));
    } else {
      fail("unknown axiom keyword '" + head + "'");
    }
    expect(')');
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return ax;
  }

 private:
  ConceptExpr concept_expr() {
    const auto w = word("concept");
    if (w == "bot") return ConceptExpr::bot();
    if (w == "top") return ConceptExpr::top();
    if (w == "and") {
      expect('(');
      ConceptExpr acc = concept_expr();
      std::size_t n = 1;
      while (true) {
        skip_ws();
        if (peek() == ')') break;
        expect(',');
        acc = ConceptExpr::conj(std::move(acc), concept_expr());
        ++n;
      }
      if (n < 2) fail("and(...) needs at least two operands");
      expect(')');
      return acc;
    }
    if (w == "some") {
      expect('(');
      auto role = word("role");
      expect(',');
      auto filler = concept_expr();
      expect(')');
      return ConceptExpr::some(std::move(role), std::move(filler));
    }
    if (w == "one") {
      expect('(');
      auto ind = word("individual");
      expect(')');
      return ConceptExpr::nominal(std::move(ind));
    }
    return ConceptExpr::atom(w);
  }

  static bool is_name_char(char c) {
    return c != '(' && c != ')' && c != ',' && !std::isspace(static_cast<unsigned char>(c));
  }

  std::string word(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_no_, pos_ + 1, msg); }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<InputAxiom> parse_input(std::string_view text) {
  std::vector<InputAxiom> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    out.push_back(LineParser(line, line_no).axiom());
  }
  return out;
}

std::vector<InputAxiom> load_input_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_input(ss.str());
}

std::string to_elpp(const ConceptExpr& c) {
  switch (c.kind) {
    case ConceptExpr::Kind::kBot: return "bot";
    case ConceptExpr::Kind::kTop: return "top";
    case ConceptExpr::Kind::kName: return c.name;
    case ConceptExpr::Kind::kNominal: return "one(" + c.name + ")";
    case ConceptExpr::Kind::kAnd: return "and(" + to_elpp(c.args[0]) + ", " + to_elpp(c.args[1]) + ")";
    case ConceptExpr::Kind::kSome: return "some(" + c.name + ", " + to_elpp(c.args[0]) + ")";
  }
  return {};
}

std::string to_elpp(const InputAxiom& ax) {
  switch (ax.kind) {
    case InputAxiom::Kind::kSub: return "sub(" + to_elpp(ax.lhs) + ", " + to_elpp(ax.rhs) + ")";
    case InputAxiom::Kind::kEquiv: return "equiv(" + to_elpp(ax.lhs) + ", " + to_elpp(ax.rhs) + ")";
    case InputAxiom::Kind::kInstance:
      return "instance(" + to_elpp(ax.lhs) + ", " + ax.individuals.at(0) + ")";
    case InputAxiom::Kind::kRoleAssertion:
      return "role(" + ax.roles.at(0) + ", " + ax.individuals.at(0) + ", " + ax.individuals.at(1) + ")";
    case InputAxiom::Kind::kRoleChainSub: {
      std::string out = "rsub(";
      for (std::size_t i = 0; i + 1 < ax.roles.size(); ++i) {
        if (i) out += " o ";
        out += ax.roles[i];
      }
      return out + ", " + ax.roles.back() + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

class Normalizer {
 public:
  void add(const InputAxiom& ax) {
    switch (ax.kind) {
      case InputAxiom::Kind::kSub:
        sub(ax.lhs, ax.rhs);
        break;
      case InputAxiom::Kind::kEquiv:
        sub(ax.lhs, ax.rhs);
        sub(ax.rhs, ax.lhs);
        break;
      case InputAxiom::Kind::kInstance:
        sub(ConceptExpr::nominal(ax.individuals.at(0)), ax.lhs);
        break;
      case InputAxiom::Kind::kRoleAssertion: {
        const auto a = atom_id(ConceptExpr::nominal(ax.individuals.at(0)));
        const auto b = atom_id(ConceptExpr::nominal(ax.individuals.at(1)));
        emit(NormalizedAxiom::gci2(a, role(ax.roles.at(0)), b));
        break;
      }
      case InputAxiom::Kind::kRoleChainSub: {
        if (ax.roles.size() < 2) throw std::invalid_argument("role chain inclusion needs a chain");
        std::vector<std::string> chain(ax.roles.begin(), ax.roles.end() - 1);
        chain_sub(chain, ax.roles.back());
        break;
      }
    }
  }

  NormalizationResult finish() { return {std::move(theory_), std::move(ledger_)}; }

 private:
  void emit(const NormalizedAxiom& ax) { theory_.add(ax); }

  RoleId role(const std::string& name) { return theory_.role_id(name); }

  ConceptId atom_id(const ConceptExpr& c) {
    switch (c.kind) {
      case ConceptExpr::Kind::kTop: return kTop;
      case ConceptExpr::Kind::kBot: return kBottom;
      case ConceptExpr::Kind::kName: return theory_.concept_id(c.name);
      case ConceptExpr::Kind::kNominal:
        theory_.signature().individuals.intern(c.name);
        return theory_.concept_id(nominal_concept_name(c.name));
      default:
        throw std::logic_error("atom_id on a complex concept");
    }
  }

  ConceptId fresh_concept(const ConceptExpr& definition) {
    std::string name = "_N" + std::to_string(++concept_counter_);
    ledger_.push_back({name, false, to_elpp(definition)});
    return theory_.concept_id(name);
  }

  RoleId fresh_role(const std::vector<std::string>& chain) {
    std::string name = "_u" + std::to_string(++role_counter_);
    std::string def;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i) def += " o ";
      def += chain[i];
    }
    ledger_.push_back({name, true, def});
    return theory_.role_id(name);
  }

  // Name for a concept used on the left of ⊑: C ⊑ A with A fresh.
  ConceptId lhs_name(const ConceptExpr& c) {
    if (c.is_atomic()) return atom_id(c);
    if (c.kind == ConceptExpr::Kind::kAnd) {
      const auto a1 = lhs_name(c.args[0]);
      const auto a2 = lhs_name(c.args[1]);
      const auto fresh = fresh_concept(c);
      emit(NormalizedAxiom::gci1(a1, a2, fresh));
      return fresh;
    }
    const auto a = lhs_name(c.args[0]);
    const auto r = role(c.name);
    const auto fresh = fresh_concept(c);
    emit(NormalizedAxiom::gci3(r, a, fresh));
    return fresh;
  }

  // Name for a concept used on the right of ⊑: A ⊑ D with A fresh.
  ConceptId rhs_name(const ConceptExpr& d) {
    if (d.is_atomic()) return atom_id(d);
    const auto fresh = fresh_concept(d);
    sub_atomic_lhs(fresh, d);
    return fresh;
  }

  void sub(const ConceptExpr& c, const ConceptExpr& d) {
    if (c.kind == ConceptExpr::Kind::kBot) return;
    if (c.is_atomic()) {
      sub_atomic_lhs(atom_id(c), d);
      return;
    }
    if (!d.is_atomic()) {
      // Ĉ ⊑ D̂  ~>  Ĉ ⊑ A, A ⊑ D̂
      sub_atomic_lhs(lhs_name(c), d);
      return;
    }
    const auto target = atom_id(d);
    if (c.kind == ConceptExpr::Kind::kAnd) {
      const auto a1 = lhs_name(c.args[0]);
      const auto a2 = lhs_name(c.args[1]);
      emit(NormalizedAxiom::gci1(a1, a2, target));
    } else {
      const auto a = lhs_name(c.args[0]);
      emit(NormalizedAxiom::gci3(role(c.name), a, target));
    }
  }

  void sub_atomic_lhs(ConceptId a, const ConceptExpr& d) {
    if (a == kBottom) return;
    switch (d.kind) {
      case ConceptExpr::Kind::kAnd:
        sub_atomic_lhs(a, d.args[0]);
        sub_atomic_lhs(a, d.args[1]);
        return;
      case ConceptExpr::Kind::kSome: {
        const auto r = role(d.name);
        const auto b = rhs_name(d.args[0]);
        emit(NormalizedAxiom::gci2(a, r, b));
        return;
      }
      default:
        emit(NormalizedAxiom::gci0(a, atom_id(d)));
    }
  }

  // r1 ∘ ... ∘ rk ⊑ s
  void chain_sub(const std::vector<std::string>& chain, const std::string& super_role) {
    if (chain.size() == 1) {
      const RoleId r = role(chain[0]);
      emit(NormalizedAxiom::ri0(r, role(super_role)));
      return;
    }
    const RoleId prefix = chain_name({chain.begin(), chain.end() - 1});
    const RoleId last = role(chain.back());
    emit(NormalizedAxiom::ri1(prefix, last, role(super_role)));
  }

  RoleId chain_name(const std::vector<std::string>& chain) {
    if (chain.size() == 1) return role(chain[0]);
    const RoleId head = chain_name({chain.begin(), chain.end() - 1});
    const RoleId last = role(chain.back());
    const RoleId u = fresh_role(chain);
    emit(NormalizedAxiom::ri1(head, last, u));
    return u;
  }

  Theory theory_;
  std::vector<FreshName> ledger_;
  std::size_t concept_counter_ = 0;
  std::size_t role_counter_ = 0;
};

}  // namespace

NormalizationResult normalize(const std::vector<InputAxiom>& axioms) {
  Normalizer n;
  for (const auto& ax : axioms) n.add(ax);
  return n.finish();
}

std::string format_ledger(const std::vector<FreshName>& ledger) {
  std::string out;
  for (const auto& f : ledger) {
    out += f.name;
    out += '\t';
    out += f.is_role ? "role" : "concept";
    out += '\t';
    out += f.definition;
    out += '\n';
  }
  return out;
}

std::vector<InputAxiom> to_input_axioms(const Theory& t) {
  const Signature& sig = t.signature();
  auto concept_expr = [&sig](ConceptId c) {
    if (c == kTop) return ConceptExpr::top();
    if (c == kBottom) return ConceptExpr::bot();
    const std::string& n = sig.concepts.name(c);
    if (n.size() > 2 && n.front() == '{' && n.back() == '}') return ConceptExpr::nominal(n.substr(1, n.size() - 2));
    return ConceptExpr::atom(n);
  };
  auto role = [&sig](RoleId r) { return sig.roles.name(r); };
  auto sub = [](ConceptExpr l, ConceptExpr r) {
    InputAxiom ax;
    ax.lhs = std::move(l);
    ax.rhs = std::move(r);
    return ax;
  };

  std::vector<InputAxiom> out;
  for (const auto& ax : t.axioms()) {
    const auto& s = ax.slots;
    switch (ax.variant) {
      case Variant::kGci0: out.push_back(sub(concept_expr(s[0]), concept_expr(s[1]))); break;
      case Variant::kGci1:
        out.push_back(sub(ConceptExpr::conj(concept_expr(s[0]), concept_expr(s[1])), concept_expr(s[2])));
        break;
      case Variant::kGci2: out.push_back(sub(concept_expr(s[0]), ConceptExpr::some(role(s[1]), concept_expr(s[2])))); break;
      case Variant::kGci3: out.push_back(sub(ConceptExpr::some(role(s[0]), concept_expr(s[1])), concept_expr(s[2]))); break;
      case Variant::kGci0Bot: out.push_back(sub(concept_expr(s[0]), ConceptExpr::bot())); break;
      case Variant::kGci1Bot:
        out.push_back(sub(ConceptExpr::conj(concept_expr(s[0]), concept_expr(s[1])), ConceptExpr::bot()));
        break;
      case Variant::kGci3Bot: out.push_back(sub(ConceptExpr::some(role(s[0]), concept_expr(s[1])), ConceptExpr::bot())); break;
      case Variant::kRi0:
      case Variant::kRi1: {
        InputAxiom ri;
        ri.kind = InputAxiom::Kind::kRoleChainSub;
        ri.roles = {role(s[0]), role(s[1])};
        if (ax.variant == Variant::kRi1) ri.roles.push_back(role(s[2]));
        out.push_back(std::move(ri));
        break;
      }
    }
  }
  return out;
}

}  // namespace elkbc
