#include "novikit/pcgroup.hpp"

#include "intmat.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "text.hpp"

namespace novikit {

std::int64_t to_int64(const Integer& x, const char* what) {
  if (!mpz_fits_slong_p(x.get_mpz_t())) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " does not fit in 64 bits: " + x.get_str());
  }
  return static_cast<std::int64_t>(mpz_get_si(x.get_mpz_t()));
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SYNTAX_ERROR";
    case ErrorCode::UndeclaredGenerator: return "UNDECLARED_GENERATOR";
    case ErrorCode::MalformedRelation: return "MALFORMED_RELATION";
    case ErrorCode::InconsistentPresentation: return "INCONSISTENT_PRESENTATION";
    case ErrorCode::CollectionBudget: return "COLLECTION_BUDGET_EXCEEDED";
    case ErrorCode::CharacterInconsistent: return "CHARACTER_INCONSISTENT";
    case ErrorCode::ZeroCharacter: return "ZERO_CHARACTER";
    case ErrorCode::MismatchedPresentation: return "MISMATCHED_PRESENTATION";
    case ErrorCode::MismatchedCharacter: return "MISMATCHED_CHARACTER";
    case ErrorCode::ZeroElement: return "ZERO_ELEMENT";
    case ErrorCode::PrecisionTooLow: return "PRECISION_TOO_LOW";
    case ErrorCode::ZeroBelowPrecision: return "ZERO_BELOW_PRECISION";
    case ErrorCode::NotAUnit: return "NOT_A_UNIT";
    case ErrorCode::NotUPositive: return "NOT_U_POSITIVE";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::DSquaredNonzero: return "D_SQUARED_NONZERO";
    case ErrorCode::RelatorNotTrivial: return "RELATOR_NOT_TRIVIAL";
    case ErrorCode::NotUnimodular: return "NOT_UNIMODULAR";
    case ErrorCode::NotAManifold: return "NOT_A_MANIFOLD";
    case ErrorCode::RepresentationInconsistent: return "REPRESENTATION_INCONSISTENT";
    case ErrorCode::PreconditionFailed: return "PRECONDITION_FAILED";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

std::string_view to_string(TorsionStatus s) {
  return s == TorsionStatus::TorsionFree ? "TORSION_FREE" : "UNKNOWN";
}

// ---------------------------------------------------------------------------
// NormalForm

bool NormalForm::is_identity() const {
  return std::all_of(exponents.begin(), exponents.end(), [](const Integer& e) { return e == 0; });
}

std::size_t NormalForm::leading_position() const {
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] != 0) return i;
  }
  return exponents.size();
}

bool operator==(const NormalForm& a, const NormalForm& b) {
  if (a.exponents.size() != b.exponents.size()) return false;
  for (std::size_t i = 0; i < a.exponents.size(); ++i) {
    if (a.exponents[i] != b.exponents[i]) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const NormalForm& a, const NormalForm& b) {
  const std::size_t n = std::min(a.exponents.size(), b.exponents.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(a.exponents[i], b.exponents[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.exponents.size() <=> b.exponents.size();
}

Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->generator, -it->exponent});
  return out;
}

bool ConsistencyReport::consistent() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConsistencyCheck& c) { return c.passed; });
}

const ConsistencyCheck* ConsistencyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Word parsing over a name table

namespace {

using NameLookup = std::map<std::string, std::size_t, std::less<>>;

struct RawLetter {
  std::size_t index;
  Integer exponent;
};
using RawWord = std::vector<RawLetter>;

RawWord invert_raw(const RawWord& w) {
  RawWord out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->index, -it->exponent});
  return out;
}

RawWord power_raw(const RawWord& w, const Integer& n) {
  RawWord base = n < 0 ? invert_raw(w) : w;
  Integer count = abs(n);
  RawWord out;
  if (base.size() == 1) {
    return RawWord{{base[0].index, base[0].exponent * count}};
  }
  if (count > 10000) fail(ErrorCode::InvalidArgument, "word power too large");
  for (Integer i = 0; i < count; ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

bool starts_factor(const text::Token& t) {
  return t.kind == text::TokenKind::Ident || t.kind == text::TokenKind::LParen ||
         (t.kind == text::TokenKind::Integer && t.text == "1");
}

RawWord parse_raw_word(text::Lexer& lex, const NameLookup& names) {
  RawWord out;
  while (true) {
    lex.accept(text::TokenKind::Star);
    const text::Token& t = lex.peek();
    if (!starts_factor(t)) break;
    RawWord factor;
    if (t.kind == text::TokenKind::Ident) {
      auto it = names.find(t.text);
      if (it == names.end()) {
        fail(ErrorCode::UndeclaredGenerator, "line " + std::to_string(t.at.line) + ", column " +
                                                 std::to_string(t.at.column) +
                                                 ": undeclared generator '" + t.text + "'");
      }
      factor.push_back({it->second, 1});
      lex.next();
    } else if (t.kind == text::TokenKind::LParen) {
      lex.next();
      factor = parse_raw_word(lex, names);
      lex.expect(text::TokenKind::RParen, "')'");
    } else {
      lex.next();  // literal 1
    }
    if (lex.accept(text::TokenKind::Caret)) {
      Integer e = text::parse_signed_integer(lex);
      factor = power_raw(factor, e);
    }
    out.insert(out.end(), factor.begin(), factor.end());
  }
  return out;
}

RawWord parse_raw_word_text(std::string_view s, const NameLookup& names, text::Position origin) {
  text::Lexer lex(s, origin);
  RawWord w = parse_raw_word(lex, names);
  if (!lex.at_end()) {
    text::syntax_error(lex.peek().at, "unexpected '" + lex.peek().text + "' in word");
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Builder

PcPresentation::Builder& PcPresentation::Builder::generator(std::string name,
                                                            std::int64_t relative_order) {
  gens_.push_back({std::move(name), relative_order});
  return *this;
}

PcPresentation::Builder& PcPresentation::Builder::order(std::string_view name,
                                                        std::int64_t relative_order) {
  for (auto& g : gens_) {
    if (g.name == name) {
      g.relative_order = relative_order;
      return *this;
    }
  }
  fail(ErrorCode::UndeclaredGenerator, "undeclared generator '" + std::string(name) + "' in order");
}

PcPresentation::Builder& PcPresentation::Builder::relation(std::string lhs, std::string rhs, int line) {
  rels_.push_back({std::move(lhs), std::move(rhs), line});
  return *this;
}

std::shared_ptr<const PcPresentation> PcPresentation::Builder::build() const {
  const std::size_t k = gens_.size();
  NameLookup names;
  for (std::size_t i = 0; i < k; ++i) {
    if (gens_[i].relative_order < 0 || gens_[i].relative_order == 1) {
      fail(ErrorCode::InvalidArgument,
           "relative order of '" + gens_[i].name + "' must be >= 2 or infinite");
    }
    if (!names.emplace(gens_[i].name, i).second) {
      fail(ErrorCode::Syntax, "generator '" + gens_[i].name + "' declared twice");
    }
  }

  enum class Slot { Forward, Inverse, Power, None };
  struct Classified {
    RawWord lhs, rhs;
    Slot slot = Slot::None;
    std::size_t x = 0, y = 0;
    int line;
    std::string text;
  };
  std::vector<Classified> rels;
  std::vector<std::vector<bool>> edge(k, std::vector<bool>(k, false));
  auto reaches = [&](std::size_t from, std::size_t to) {
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      if (seen[v]) continue;
      seen[v] = true;
      for (std::size_t w = 0; w < k; ++w)
        if (edge[v][w]) stack.push_back(w);
    }
    return false;
  };

  std::map<std::pair<std::size_t, std::size_t>, bool> forward_taken, inverse_taken;
  std::vector<bool> power_taken(k, false);

  for (const auto& pending : rels_) {
    Classified c;
    c.line = pending.line;
    c.text = pending.lhs + " = " + pending.rhs;
    text::Position origin{pending.line > 0 ? pending.line : 1, 1};
    c.lhs = parse_raw_word_text(pending.lhs, names, origin);
    c.rhs = parse_raw_word_text(pending.rhs, names, origin);
    const auto& l = c.lhs;
    std::vector<std::size_t> targets;
    if (l.size() == 3 && l[0].index == l[2].index && l[0].index != l[1].index && l[1].exponent == 1 &&
        ((l[0].exponent == 1 && l[2].exponent == -1) || (l[0].exponent == -1 && l[2].exponent == 1))) {
      c.x = l[0].index;
      c.y = l[1].index;
      c.slot = l[0].exponent == 1 ? Slot::Forward : Slot::Inverse;
      auto& taken = c.slot == Slot::Forward ? forward_taken : inverse_taken;
      if (taken.count({c.x, c.y})) c.slot = Slot::None;
      targets.push_back(c.y);
    } else if (l.size() == 1 && l[0].exponent > 0 && gens_[l[0].index].relative_order != 0 &&
               l[0].exponent == gens_[l[0].index].relative_order && !power_taken[l[0].index]) {
      c.x = l[0].index;
      c.slot = Slot::Power;
    }
    if (c.slot != Slot::None) {
      for (const auto& letter : c.rhs) targets.push_back(letter.index);
      bool ok = true;
      for (std::size_t t : targets) {
        if (t == c.x || reaches(t, c.x)) ok = false;
      }
      if (ok) {
        for (std::size_t t : targets) edge[c.x][t] = true;
        if (c.slot == Slot::Forward) forward_taken[{c.x, c.y}] = true;
        if (c.slot == Slot::Inverse) inverse_taken[{c.x, c.y}] = true;
        if (c.slot == Slot::Power) power_taken[c.x] = true;
      } else {
        c.slot = Slot::None;
      }
    }
    rels.push_back(std::move(c));
  }

  // Kahn's algorithm, lowest declaration index first.
  std::vector<std::size_t> indeg(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (edge[a][b]) ++indeg[b];
  std::vector<std::size_t> order;
  std::vector<bool> placed(k, false);
  while (order.size() < k) {
    std::size_t pick = k;
    for (std::size_t v = 0; v < k; ++v) {
      if (!placed[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick == k) fail(ErrorCode::MalformedRelation, "relations do not define a polycyclic series");
    placed[pick] = true;
    order.push_back(pick);
    for (std::size_t b = 0; b < k; ++b)
      if (edge[pick][b]) --indeg[b];
  }

  auto p = std::shared_ptr<PcPresentation>(new PcPresentation());
  p->default_character_ = character_;
  p->decl_to_pc_.assign(k, 0);
  for (std::size_t pos = 0; pos < k; ++pos) {
    p->gens_.push_back(gens_[order[pos]]);
    p->decl_to_pc_[order[pos]] = pos;
  }
  auto to_word = [&](const RawWord& raw) {
    Word w;
    for (const auto& l : raw) w.push_back({p->decl_to_pc_[l.index], l.exponent});
    return w;
  };

  std::vector<std::vector<std::optional<Word>>> fwd_rule(k, std::vector<std::optional<Word>>(k));
  std::vector<std::vector<std::optional<Word>>> inv_rule(k, std::vector<std::optional<Word>>(k));
  std::vector<std::optional<Word>> pow_rule(k);
  for (const auto& c : rels) {
    Relation r;
    r.lhs = to_word(c.lhs);
    r.rhs = to_word(c.rhs);
    r.line = c.line;
    r.text = c.text;
    const std::size_t x = p->decl_to_pc_[c.x];
    const std::size_t y = p->decl_to_pc_[c.y];
    switch (c.slot) {
      case Slot::Forward:
        r.kind = RelationKind::Conjugation;
        fwd_rule[x][y] = r.rhs;
        break;
      case Slot::Inverse:
        r.kind = RelationKind::InverseConjugation;
        inv_rule[x][y] = r.rhs;
        break;
      case Slot::Power:
        r.kind = RelationKind::Power;
        pow_rule[x] = r.rhs;
        break;
      case Slot::None:
        r.kind = RelationKind::Extra;
        break;
    }
    p->relations_.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!fwd_rule[i][j] && !inv_rule[i][j]) {
        Relation r;
        r.kind = RelationKind::Implicit;
        r.lhs = {{i, 1}, {j, 1}, {i, -1}};
        r.rhs = {{j, 1}};
        r.text = p->format(r.lhs) + " = " + p->format(r.rhs);
        p->relations_.push_back(std::move(r));
      }
    }
    if (p->gens_[i].finite() && !pow_rule[i]) {
      Relation r;
      r.kind = RelationKind::Implicit;
      r.lhs = {{i, p->gens_[i].relative_order}};
      r.text = p->format(r.lhs) + " = 1";
      p->relations_.push_back(std::move(r));
    }
  }

  // Bottom-up construction of the rewriting data.
  p->forward_.assign(k, {});
  p->inverse_.assign(k, {});
  p->power_.assign(k, p->identity());
  p->central_in_tail_.assign(k, true);
  p->free_abelian_from_.assign(k + 1, true);
  p->forward_matrix_.assign(k, {});
  p->inverse_matrix_.assign(k, {});
  for (std::size_t step = 0; step < k; ++step) {
    const std::size_t i = k - 1 - step;
    Budget budget;
    auto collect_tail = [&](const Word& w, const char* what) {
      for (const auto& l : w) {
        if (l.generator <= i) {
          fail(ErrorCode::MalformedRelation, std::string(what) + " for '" + p->gens_[i].name +
                                                 "' must be a word in later generators");
        }
      }
      return p->collect_word(w, budget);
    };
    if (pow_rule[i]) p->power_[i] = collect_tail(*pow_rule[i], "power relation");

    Images fwd(k), inv(k);
    bool fwd_complete = true, inv_complete = true;
    std::vector<bool> fwd_known(k, false), inv_known(k, false);
    for (std::size_t j = i + 1; j < k; ++j) {
      if (fwd_rule[i][j]) {
        fwd[j] = collect_tail(*fwd_rule[i][j], "conjugation relation");
        fwd_known[j] = true;
      } else if (!inv_rule[i][j]) {
        fwd[j] = p->generator_power(j);
        fwd_known[j] = true;
      }
      if (inv_rule[i][j]) {
        inv[j] = collect_tail(*inv_rule[i][j], "conjugation relation");
        inv_known[j] = true;
      } else if (!fwd_rule[i][j]) {
        inv[j] = p->generator_power(j);
        inv_known[j] = true;
      }
      fwd_complete = fwd_complete && fwd_known[j];
      inv_complete = inv_complete && inv_known[j];
    }

    // Fills the unknown images of `target` as the inverse automorphism of `source`.
    auto derive = [&](const Images& source, Images& target, std::vector<bool>& known) {
      const std::size_t n = k - i - 1;
      if (p->gens_[i].finite()) {
        // conjugation by g^-1 equals w^-1 (conj by g)^{r-1} w, and symmetrically
        const Integer r = p->gens_[i].relative_order;
        Images powered = p->power_images(source, i, r - 1, budget);
        const bool target_is_inverse = (&target == &inv);
        const NormalForm w = p->power_[i];
        const NormalForm w_inv = p->inv(w, budget);
        for (std::size_t j = i + 1; j < k; ++j) {
          if (known[j]) continue;
          NormalForm img = powered[j];
          img = target_is_inverse ? p->mul(p->mul(w_inv, img, budget), w, budget)
                                  : p->mul(p->mul(w, img, budget), w_inv, budget);
          target[j] = img;
          known[j] = true;
        }
        return;
      }
      if (!p->free_abelian_from_[i + 1]) {
        fail(ErrorCode::MalformedRelation,
             "conjugation by '" + p->gens_[i].name +
                 "' must be given in both directions when later generators do not commute");
      }
      std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) m[r][j] = source[i + 1 + j].exponents[i + 1 + r];
      auto minv = detail::unimodular_inverse(m);
      if (!minv) {
        fail(ErrorCode::InconsistentPresentation,
             "conjugation by '" + p->gens_[i].name + "' is not an automorphism of the later generators");
      }
      for (std::size_t j = i + 1; j < k; ++j) {
        if (known[j]) continue;
        NormalForm img = p->identity();
        for (std::size_t r = 0; r < n; ++r) img.exponents[i + 1 + r] = (*minv)[r][j - i - 1];
        target[j] = img;
        known[j] = true;
      }
    };
    if (!fwd_complete && !inv_complete) {
      fail(ErrorCode::MalformedRelation,
           "incomplete conjugation relations for '" + p->gens_[i].name + "'");
    }
    if (!inv_complete) derive(fwd, inv, inv_known);
    if (!fwd_complete) derive(inv, fwd, fwd_known);
    p->forward_[i] = std::move(fwd);
    p->inverse_[i] = std::move(inv);
    p->finish_level(i);
  }
  return p;
}

void PcPresentation::finish_level(std::size_t i) {
  const std::size_t k = gens_.size();
  bool central = true;
  for (std::size_t j = i + 1; j < k; ++j) {
    const NormalForm gj = generator_power(j);
    if (!(forward_[i][j] == gj) || !(inverse_[i][j] == gj)) central = false;
  }
  central_in_tail_[i] = central;
  free_abelian_from_[i] = !gens_[i].finite() && central && free_abelian_from_[i + 1];
  if (free_abelian_from_[i + 1]) {
    const std::size_t n = k - i - 1;
    auto to_matrix = [&](const Images& imgs) {
      std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) m[r][j] = imgs[i + 1 + j].exponents[i + 1 + r];
      return m;
    };
    forward_matrix_[i] = to_matrix(forward_[i]);
    inverse_matrix_[i] = to_matrix(inverse_[i]);
  }
}

// ---------------------------------------------------------------------------
// Parsing

std::shared_ptr<const PcPresentation> PcPresentation::parse(std::string_view source) {
  Builder b;
  bool have_gens = false;
  for (const auto& st : text::split_statements(source)) {
    if (st.key == "gens") {
      if (have_gens) text::syntax_error(st.at, "duplicate gens line");
      have_gens = true;
      std::string body = st.body;
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream in(body);
      std::string name;
      while (in >> name) b.generator(name);
    } else if (st.key == "order") {
      std::string body = st.body;
      std::replace(body.begin(), body.end(), ':', ' ');
      std::istringstream in(body);
      std::string name, value;
      if (!(in >> name >> value)) text::syntax_error(st.body_at, "expected 'order <gen>: <n|inf>'");
      std::int64_t ord = 0;
      if (value == "inf" || value == "infinite" || value == "\xE2\x88\x9E" || value == "oo") {
        ord = 0;
      } else {
        try {
          std::size_t used = 0;
          ord = std::stoll(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          text::syntax_error(st.body_at, "relative order must be a positive integer or 'inf'");
        }
      }
      try {
        b.order(name, ord);
      } catch (const Error& e) {
        fail(e.code(), "line " + std::to_string(st.at.line) + ": " + e.what());
      }
    } else if (st.key == "rel") {
      auto eq = st.body.find('=');
      if (eq == std::string::npos) {
        b.relation(st.body, "1", st.at.line);
      } else {
        if (st.body.find('=', eq + 1) != std::string::npos) {
          text::syntax_error(st.body_at, "relation has more than one '='");
        }
        std::string lhs = text::trim(std::string_view(st.body).substr(0, eq));
        std::string rhs = text::trim(std::string_view(st.body).substr(eq + 1));
        if (lhs.empty()) text::syntax_error(st.body_at, "relation has an empty left-hand side");
        if (rhs.empty()) rhs = "1";
        b.relation(lhs, rhs, st.at.line);
      }
    } else if (st.key == "char") {
      b.character(st.body);
    } else {
      text::syntax_error(st.at, "unknown presentation statement '" + st.key + "'");
    }
  }
  if (!have_gens) fail(ErrorCode::Syntax, "presentation has no gens line");
  auto pres = b.build();
  if (pres->default_character()) Character::parse(pres, *pres->default_character());
  return pres;
}

Word PcPresentation::parse_word(std::string_view s, int line, int column) const {
  NameLookup names;
  for (std::size_t i = 0; i < gens_.size(); ++i) names.emplace(gens_[i].name, i);
  RawWord raw = parse_raw_word_text(s, names, {line, column});
  Word w;
  for (auto& l : raw) w.push_back({l.index, l.exponent});
  return w;
}

std::optional<std::size_t> PcPresentation::position_of(std::string_view name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Collection

void PcPresentation::Budget::step() {
  if (++used > kCollectionBudget) {
    fail(ErrorCode::CollectionBudget, "collection exceeded its rewrite-step budget");
  }
}

NormalForm PcPresentation::identity() const {
  NormalForm x;
  x.exponents.assign(gens_.size(), 0);
  return x;
}

NormalForm PcPresentation::generator_power(std::size_t pos, const Integer& e) const {
  Budget b;
  return mul_gen(identity(), pos, e, b);
}

NormalForm PcPresentation::mul_gen(NormalForm x, std::size_t i, Integer e, Budget& b) const {
  b.step();
  if (e == 0) return x;
  const Generator& g = gens_[i];
  if (g.finite()) {
    Integer q, rem;
    floor_divmod(e, Integer(g.relative_order), q, rem);
    if (q != 0) x = mul(std::move(x), pow(power_[i], q, b), b);
    e = rem;
    if (e == 0) return x;
  }
  const std::size_t k = gens_.size();
  NormalForm tail = identity();
  bool trivial = true;
  for (std::size_t p = i + 1; p < k; ++p) {
    tail.exponents[p] = x.exponents[p];
    if (tail.exponents[p] != 0) trivial = false;
  }
  if (!trivial) tail = conj_power(i, e, std::move(tail), b);
  Integer xi = x.exponents[i] + e;
  if (g.finite() && xi >= g.relative_order) {
    xi -= g.relative_order;
    tail = mul(power_[i], tail, b);
  }
  x.exponents[i] = xi;
  for (std::size_t p = i + 1; p < k; ++p) x.exponents[p] = tail.exponents[p];
  return x;
}

NormalForm PcPresentation::mul(NormalForm x, const NormalForm& y, Budget& b) const {
  const std::size_t ly = y.leading_position();
  if (ly == y.size()) return x;
  if (free_abelian_from_[std::min(x.leading_position(), ly)]) {
    b.step();
    for (std::size_t p = ly; p < y.size(); ++p) x.exponents[p] += y.exponents[p];
    return x;
  }
  for (std::size_t p = ly; p < y.size(); ++p) {
    if (y.exponents[p] != 0) x = mul_gen(std::move(x), p, y.exponents[p], b);
  }
  return x;
}

NormalForm PcPresentation::inv(const NormalForm& x, Budget& b) const {
  const std::size_t lx = x.leading_position();
  if (free_abelian_from_[lx]) {
    NormalForm r = x;
    for (auto& e : r.exponents) e = -e;
    return r;
  }
  NormalForm r = identity();
  for (std::size_t step = 0; step < x.size(); ++step) {
    const std::size_t p = x.size() - 1 - step;
    if (x.exponents[p] != 0) r = mul_gen(std::move(r), p, -x.exponents[p], b);
  }
  return r;
}

NormalForm PcPresentation::pow(const NormalForm& x, Integer n, Budget& b) const {
  if (n == 0 || x.is_identity()) return identity();
  NormalForm base = n < 0 ? inv(x, b) : x;
  n = abs(n);
  if (free_abelian_from_[base.leading_position()]) {
    for (auto& e : base.exponents) e *= n;
    return base;
  }
  NormalForm result = identity();
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) result = mul(std::move(result), base, b);
    n >>= 1;
    if (n > 0) base = mul(base, base, b);
  }
  return result;
}

NormalForm PcPresentation::apply(const Images& images, std::size_t level, const NormalForm& h,
                                 Budget& b) const {
  NormalForm r = identity();
  for (std::size_t p = level + 1; p < h.size(); ++p) {
    if (h.exponents[p] != 0) r = mul(std::move(r), pow(images[p], h.exponents[p], b), b);
  }
  return r;
}

PcPresentation::Images PcPresentation::compose(const Images& outer, const Images& inner,
                                               std::size_t level, Budget& b) const {
  Images out(gens_.size());
  for (std::size_t p = level + 1; p < gens_.size(); ++p) out[p] = apply(outer, level, inner[p], b);
  return out;
}

PcPresentation::Images PcPresentation::power_images(const Images& images, std::size_t level,
                                                    Integer n, Budget& b) const {
  Images result(gens_.size());
  for (std::size_t p = level + 1; p < gens_.size(); ++p) result[p] = generator_power(p);
  Images base = images;
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) result = compose(base, result, level, b);
    n >>= 1;
    if (n > 0) base = compose(base, base, level, b);
  }
  return result;
}

NormalForm PcPresentation::conj_power(std::size_t i, const Integer& e, NormalForm tail, Budget& b) const {
  if (central_in_tail_[i] || tail.is_identity()) return tail;
  const std::size_t k = gens_.size();
  if (gens_[i].finite()) {
    // e lies in [1, r)
    for (Integer c = 0; c < e; ++c) tail = apply(inverse_[i], i, tail, b);
    return tail;
  }
  Integer n = abs(e);
  if (free_abelian_from_[i + 1]) {
    const auto& m0 = e > 0 ? inverse_matrix_[i] : forward_matrix_[i];
    const std::size_t dim = k - i - 1;
    std::vector<Integer> v(dim);
    for (std::size_t r = 0; r < dim; ++r) v[r] = tail.exponents[i + 1 + r];
    auto m = m0;
    while (n > 0) {
      b.step();
      if (mpz_odd_p(n.get_mpz_t())) {
        std::vector<Integer> w(dim, 0);
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t c = 0; c < dim; ++c) w[r] += m[r][c] * v[c];
        v = std::move(w);
      }
      n >>= 1;
      if (n > 0) m = detail::mat_mul(m, m);
    }
    for (std::size_t r = 0; r < dim; ++r) tail.exponents[i + 1 + r] = v[r];
    return tail;
  }
  const Images& images = e > 0 ? inverse_[i] : forward_[i];
  if (n <= 3) {
    for (Integer c = 0; c < n; ++c) tail = apply(images, i, tail, b);
    return tail;
  }
  return apply(power_images(images, i, n, b), i, tail, b);
}

NormalForm PcPresentation::collect_word(const Word& w, Budget& b) const {
  NormalForm x = identity();
  for (const auto& l : w) {
    if (l.generator >= gens_.size()) fail(ErrorCode::InvalidArgument, "letter outside presentation");
    x = mul_gen(std::move(x), l.generator, l.exponent, b);
  }
  return x;
}

void PcPresentation::validate_normal_form(const NormalForm& x) const {
  if (x.size() != gens_.size()) fail(ErrorCode::MismatchedPresentation, "normal form has wrong length");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i].finite() && (x.exponents[i] < 0 || x.exponents[i] >= gens_[i].relative_order)) {
      fail(ErrorCode::InvalidArgument, "exponent of '" + gens_[i].name + "' out of range");
    }
  }
}

NormalForm PcPresentation::collect(const Word& w) const {
  Budget b;
  return collect_word(w, b);
}

NormalForm PcPresentation::multiply(const NormalForm& x, const NormalForm& y) const {
  validate_normal_form(x);
  validate_normal_form(y);
  Budget b;
  return mul(x, y, b);
}

NormalForm PcPresentation::invert(const NormalForm& x) const {
  validate_normal_form(x);
  Budget b;
  return inv(x, b);
}

NormalForm PcPresentation::power(const NormalForm& x, const Integer& n) const {
  validate_normal_form(x);
  Budget b;
  return pow(x, n, b);
}

// ---------------------------------------------------------------------------
// Consistency

ConsistencyReport PcPresentation::check_consistency() const {
  ConsistencyReport report;
  const std::size_t k = gens_.size();
  auto g = [&](std::size_t p, const Integer& e = 1) { return generator_power(p, e); };
  auto record = [&](std::string identity, auto lhs_fn, auto rhs_fn) {
    ConsistencyCheck c;
    c.identity = std::move(identity);
    try {
      Budget b;
      c.lhs = lhs_fn(b);
      c.rhs = rhs_fn(b);
      c.passed = c.lhs == c.rhs;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CollectionBudget) throw;
      c.identity += " [collection budget exceeded]";
      c.passed = false;
    }
    report.checks.push_back(std::move(c));
  };
  const auto& nm = [&](std::size_t p) { return gens_[p].name; };

  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t bb = a + 1; bb < k; ++bb)
      for (std::size_t c = bb + 1; c < k; ++c) {
        record("(" + nm(c) + " " + nm(bb) + ") " + nm(a) + " = " + nm(c) + " (" + nm(bb) + " " + nm(a) + ")",
               [&](Budget& b) { return mul(mul(g(c), g(bb), b), g(a), b); },
               [&](Budget& b) { return mul(g(c), mul(g(bb), g(a), b), b); });
      }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t bb = a + 1; bb < k; ++bb) {
      if (gens_[bb].finite()) {
        const std::int64_t r = gens_[bb].relative_order;
        record("(" + nm(bb) + "^" + std::to_string(r) + ") " + nm(a) + " = " + nm(bb) + "^" +
                   std::to_string(r - 1) + " (" + nm(bb) + " " + nm(a) + ")",
               [&](Budget& b) { return mul(power_[bb], g(a), b); },
               [&](Budget& b) { return mul(g(bb, r - 1), mul(g(bb), g(a), b), b); });
      }
      if (gens_[a].finite()) {
        const std::int64_t r = gens_[a].relative_order;
        record("(" + nm(bb) + " " + nm(a) + "^" + std::to_string(r - 1) + ") " + nm(a) + " = " + nm(bb) +
                   " (" + nm(a) + "^" + std::to_string(r) + ")",
               [&](Budget& b) { return mul(mul(g(bb), g(a, r - 1), b), g(a), b); },
               [&](Budget& b) { return mul(g(bb), power_[a], b); });
      } else {
        record("(" + nm(bb) + " " + nm(a) + "^-1) " + nm(a) + " = " + nm(bb),
               [&](Budget& b) { return mul(mul(g(bb), g(a, -1), b), g(a), b); },
               [&](Budget&) { return g(bb); });
        record("(" + nm(bb) + " " + nm(a) + ") " + nm(a) + "^-1 = " + nm(bb),
               [&](Budget& b) { return mul(mul(g(bb), g(a), b), g(a, -1), b); },
               [&](Budget&) { return g(bb); });
      }
    }
    if (gens_[a].finite()) {
      record(nm(a) + "^" + std::to_string(gens_[a].relative_order) + " " + nm(a) + " = " + nm(a) + " " +
                 nm(a) + "^" + std::to_string(gens_[a].relative_order),
             [&](Budget& b) { return mul(power_[a], g(a), b); },
             [&](Budget& b) { return mul(g(a), power_[a], b); });
    }
  }
  for (const auto& rel : relations_) {
    if (rel.kind == RelationKind::Implicit) continue;
    record(rel.text, [&](Budget& b) { return collect_word(rel.lhs, b); },
           [&](Budget& b) { return collect_word(rel.rhs, b); });
  }
  return report;
}

std::size_t PcPresentation::hirsch_number() const {
  return static_cast<std::size_t>(
      std::count_if(gens_.begin(), gens_.end(), [](const Generator& g) { return !g.finite(); }));
}

bool PcPresentation::is_poly_z() const { return hirsch_number() == gens_.size(); }

TorsionStatus PcPresentation::torsion_status() const {
  return is_poly_z() ? TorsionStatus::TorsionFree : TorsionStatus::Unknown;
}

// ---------------------------------------------------------------------------
// Formatting

std::string PcPresentation::format(const NormalForm& x) const {
  std::string out;
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (x.exponents[p] == 0) continue;
    if (!out.empty()) out += ' ';
    out += gens_[p].name;
    if (x.exponents[p] != 1) out += "^" + x.exponents[p].get_str();
  }
  return out.empty() ? "1" : out;
}

std::string PcPresentation::format(const Word& w) const {
  std::string out;
  for (const auto& l : w) {
    if (l.exponent == 0) continue;
    if (!out.empty()) out += ' ';
    out += gens_[l.generator].name;
    if (l.exponent != 1) out += "^" + l.exponent.get_str();
  }
  return out.empty() ? "1" : out;
}

std::string PcPresentation::serialize() const {
  std::ostringstream out;
  out << "gens:";
  for (std::size_t d : decl_to_pc_) out << ' ' << gens_[d].name;
  out << '\n';
  for (std::size_t d : decl_to_pc_) {
    if (gens_[d].finite()) out << "order " << gens_[d].name << ": " << gens_[d].relative_order << '\n';
  }
  for (const auto& r : relations_) {
    if (r.kind == RelationKind::Implicit) continue;
    out << "rel: " << format(r.lhs) << " = " << format(r.rhs) << '\n';
  }
  if (default_character_) out << "char: " << *default_character_ << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Character

Character Character::check(PresentationPtr pres, const std::vector<std::int64_t>& declared) {
  if (declared.size() != pres->size()) {
    fail(ErrorCode::InvalidArgument, "character needs one value per generator (" +
                                         std::to_string(pres->size()) + "), got " +
                                         std::to_string(declared.size()));
  }
  Character u;
  u.pres_ = pres;
  u.values_.assign(pres->size(), 0);
  for (std::size_t d = 0; d < declared.size(); ++d) u.values_[pres->declaration_order()[d]] = declared[d];
  for (const auto& rel : pres->relations()) {
    Integer l = u.evaluate(rel.lhs);
    Integer r = u.evaluate(rel.rhs);
    if (l != r) {
      fail(ErrorCode::CharacterInconsistent, "character " + u.format() + " violates relation " +
                                                 rel.text + " (" + l.get_str() + " != " + r.get_str() + ")");
    }
  }
  return u;
}

Character Character::parse(PresentationPtr pres, std::string_view spec) {
  std::vector<std::int64_t> declared(pres->size(), 0);
  std::string body(spec);
  std::replace(body.begin(), body.end(), ',', ' ');
  std::istringstream in(body);
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::Syntax, "character entries look like name=value, got '" + item + "'");
    }
    std::string name = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (value.empty() && in >> value) {
    }
    auto pos = pres->position_of(name);
    if (!pos) fail(ErrorCode::UndeclaredGenerator, "undeclared generator '" + name + "' in character");
    std::size_t d = std::find(pres->declaration_order().begin(), pres->declaration_order().end(), *pos) -
                    pres->declaration_order().begin();
    try {
      std::size_t used = 0;
      declared[d] = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      fail(ErrorCode::Syntax, "character value for '" + name + "' is not an integer");
    }
  }
  return check(std::move(pres), declared);
}

std::vector<std::int64_t> Character::declared_values() const {
  std::vector<std::int64_t> out;
  for (std::size_t p : pres_->declaration_order()) out.push_back(values_[p]);
  return out;
}

bool Character::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](std::int64_t v) { return v == 0; });
}

Character Character::negated() const {
  Character u = *this;
  for (auto& v : u.values_) v = -v;
  return u;
}

Integer Character::evaluate(const NormalForm& x) const {
  Integer s = 0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (values_[p] != 0 && x.exponents[p] != 0) s += x.exponents[p] * from_int64(values_[p]);
  }
  return s;
}

std::int64_t Character::height(const NormalForm& x) const { return to_int64(evaluate(x), "height"); }

Integer Character::evaluate(const Word& w) const {
  Integer s = 0;
  for (const auto& l : w) s += l.exponent * from_int64(values_[l.generator]);
  return s;
}

std::string Character::format() const {
  std::string out;
  for (std::size_t p : pres_->declaration_order()) {
    if (!out.empty()) out += ", ";
    out += pres_->name(p) + "=" + std::to_string(values_[p]);
  }
  return out;
}

}  // namespace novikit
