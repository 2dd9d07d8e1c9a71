#include "elkbc/theory.hpp"

#include <fstream>
#include <sstream>

namespace elkbc {

namespace {

constexpr std::string_view kHeader = "# elkbc normalized theory";
constexpr std::string_view kConceptDecl = "#@concept";
constexpr std::string_view kRoleDecl = "#@role";
constexpr std::string_view kIndividualDecl = "#@individual";

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class Resolve>
NormalizedAxiom parse_tokens(const std::vector<Token>& toks, std::size_t line_no, Resolve&& resolve) {
  auto variant = parse_variant_tag(toks[0].text);
  if (!variant) {
    throw ParseError(line_no, toks[0].column,
                     "unknown variant tag '" + std::string(toks[0].text) + "'");
  }
  const std::size_t arity = variant_arity(*variant);
  if (toks.size() - 1 != arity) {
    throw ParseError(line_no, toks.back().column,
                     "arity mismatch: " + std::string(toks[0].text) + " takes " +
                         std::to_string(arity) + " names, got " + std::to_string(toks.size() - 1));
  }
  NormalizedAxiom ax;
  ax.variant = *variant;
  for (std::size_t s = 0; s < arity; ++s) {
    ax.slots[s] = resolve(slot_kind(*variant, s), toks[s + 1], line_no);
  }
  return canonical(ax);
}

// Returns true if the line was a signature declaration and consumed.
bool apply_declaration(std::string_view line, Signature& sig) {
  auto toks = tokenize(line);
  if (toks.size() != 2) return false;
  if (toks[0].text == kConceptDecl) {
    sig.concepts.intern(toks[1].text);
  } else if (toks[0].text == kRoleDecl) {
    sig.roles.intern(toks[1].text);
  } else if (toks[0].text == kIndividualDecl) {
    sig.individuals.intern(toks[1].text);
  } else {
    return false;
  }
  return true;
}

template <class OnAxiom>
void for_each_line(std::string_view text, Signature& sig, OnAxiom&& on_axiom) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = strip(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      apply_declaration(line, sig);
    } else {
      on_axiom(parse_axiom_line(line, sig, line_no));
    }
    if (end == text.size()) break;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::uint32_t Interner::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Interner::name(std::uint32_t id) const {
  if (id >= names_.size()) throw std::out_of_range("unknown id " + std::to_string(id));
  return names_[id];
}

Signature::Signature() {
  concepts.intern(kTopName);
  concepts.intern(kBottomName);
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

bool Theory::add(const NormalizedAxiom& raw) {
  const NormalizedAxiom ax = canonical(raw);
  const std::size_t arity = variant_arity(ax.variant);
  for (std::size_t s = 0; s < arity; ++s) {
    const std::size_t bound = slot_kind(ax.variant, s) == SlotKind::kRole
                                  ? signature_.roles.size()
                                  : signature_.concepts.size();
    if (ax.slots[s] >= bound) {
      throw std::out_of_range("axiom references id " + std::to_string(ax.slots[s]) +
                              " outside the signature");
    }
  }
  if (!present_.insert(ax).second) return false;
  axioms_.push_back(ax);
  return true;
}

bool Theory::contains(const NormalizedAxiom& ax) const { return present_.count(canonical(ax)) > 0; }

std::vector<NormalizedAxiom> Theory::of_variant(Variant v) const {
  std::vector<NormalizedAxiom> out;
  for (const auto& ax : axioms_) {
    if (ax.variant == v) out.push_back(ax);
  }
  return out;
}

NormalizedAxiom parse_axiom_line(std::string_view line, Signature& sig, std::size_t line_no) {
  auto toks = tokenize(line);
  if (toks.empty()) throw ParseError(line_no, 1, "empty axiom line");
  return parse_tokens(toks, line_no, [&](SlotKind kind, const Token& tok, std::size_t) {
    return kind == SlotKind::kRole ? sig.roles.intern(tok.text) : sig.concepts.intern(tok.text);
  });
}

NormalizedAxiom parse_axiom_line_known(std::string_view line, const Signature& sig,
                                       std::size_t line_no) {
  auto toks = tokenize(line);
  if (toks.empty()) throw ParseError(line_no, 1, "empty axiom line");
  return parse_tokens(toks, line_no, [&](SlotKind kind, const Token& tok, std::size_t ln) {
    auto id = kind == SlotKind::kRole ? sig.roles.find(tok.text) : sig.concepts.find(tok.text);
    if (!id) {
      throw ParseError(ln, tok.column, "unknown " + std::string(kind == SlotKind::kRole ? "role" : "concept") +
                                           " '" + std::string(tok.text) + "'");
    }
    return *id;
  });
}

Theory parse_normalized(std::string_view text) {
  Theory t;
  // Axioms are collected first so that declarations anywhere in the header
  // keep their declared id order.
  std::vector<NormalizedAxiom> axioms;
  for_each_line(text, t.signature(), [&](const NormalizedAxiom& ax) { axioms.push_back(ax); });
  for (const auto& ax : axioms) t.add(ax);
  return t;
}

Theory parse_normalized(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_normalized(ss.str());
}

Theory load_normalized_file(const std::string& path) { return parse_normalized(read_file(path)); }

std::vector<NormalizedAxiom> parse_axioms_into(std::string_view text, Signature& sig) {
  std::vector<NormalizedAxiom> out;
  std::unordered_set<NormalizedAxiom> seen;
  for_each_line(text, sig, [&](const NormalizedAxiom& ax) {
    if (seen.insert(ax).second) out.push_back(ax);
  });
  return out;
}

std::vector<NormalizedAxiom> load_axioms_into(const std::string& path, Signature& sig) {
  return parse_axioms_into(read_file(path), sig);
}

std::string format_axiom(const NormalizedAxiom& ax, const Signature& sig) {
  std::string out(variant_tag(ax.variant));
  const std::size_t arity = variant_arity(ax.variant);
  for (std::size_t s = 0; s < arity; ++s) {
    out += ' ';
    out += slot_kind(ax.variant, s) == SlotKind::kRole ? sig.roles.name(ax.slots[s])
                                                       : sig.concepts.name(ax.slots[s]);
  }
  return out;
}

std::string serialize_theory(const Theory& t) {
  const auto& sig = t.signature();
  std::string out(kHeader);
  out += '\n';
  // ⊤ and ⊥ are implicit.
  for (std::size_t i = 2; i < sig.concepts.size(); ++i) {
    out += kConceptDecl;
    out += ' ';
    out += sig.concepts.name(static_cast<std::uint32_t>(i));
    out += '\n';
  }
  for (const auto& r : sig.roles.names()) {
    out += kRoleDecl;
    out += ' ';
    out += r;
    out += '\n';
  }
  for (const auto& ind : sig.individuals.names()) {
    out += kIndividualDecl;
    out += ' ';
    out += ind;
    out += '\n';
  }
  for (const auto& ax : t.axioms()) {
    out += format_axiom(ax, sig);
    out += '\n';
  }
  return out;
}

void save_normalized_file(const Theory& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serialize_theory(t);
}

SignatureStats signature_stats(const Theory& t) {
  SignatureStats s;
  for (const auto& ax : t.axioms()) ++s.per_variant[variant_index(ax.variant)];
  s.concepts = t.signature().concepts.size();
  s.roles = t.signature().roles.size();
  s.individuals = t.signature().individuals.size();
  return s;
}

}  // namespace elkbc
