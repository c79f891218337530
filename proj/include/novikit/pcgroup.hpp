#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novikit/error.hpp"
#include "novikit/integer.hpp"

namespace novikit {

/// Exponent vector g_1^{e_1} ... g_k^{e_k} in pc order. Positions with finite
/// relative order r hold 0 <= e < r.
struct NormalForm {
  std::vector<Integer> exponents;

  std::size_t size() const { return exponents.size(); }
  bool is_identity() const;
  // Index of the first nonzero exponent, or size() for the identity.
  std::size_t leading_position() const;
};

bool operator==(const NormalForm& a, const NormalForm& b);
std::strong_ordering operator<=>(const NormalForm& a, const NormalForm& b);

/// One syllable g^e of a word; `generator` is a pc position.
struct Letter {
  std::size_t generator;
  Integer exponent;
};
using Word = std::vector<Letter>;

Word inverse_word(const Word& w);

enum class RelationKind { Conjugation, InverseConjugation, Power, Extra, Implicit };

struct Relation {
  RelationKind kind;
  Word lhs;
  Word rhs;
  std::string text;  // source text, or a rendering for implicit relations
  int line = 0;
};

struct ConsistencyCheck {
  std::string identity;
  NormalForm lhs;
  NormalForm rhs;
  bool passed = false;
};

struct ConsistencyReport {
  std::vector<ConsistencyCheck> checks;

  bool consistent() const;
  const ConsistencyCheck* first_failure() const;
};

enum class TorsionStatus { TorsionFree, Unknown };

std::string_view to_string(TorsionStatus s);

/// Rewrite-step allowance for one collection call.
inline constexpr std::uint64_t kCollectionBudget = 1'000'000;

/// A polycyclic presentation with collection-based multiplication.
///
/// Generators are stored in pc order: g_1 is the top of the series and
/// G_i = <g_{k-i+1}, ..., g_k>. The pc order is derived from the relations
/// (a generator conjugating another, or appearing on a right-hand side of its
/// rules, comes later) with ties broken by declaration order.
class PcPresentation {
 public:
  struct Generator {
    std::string name;
    std::int64_t relative_order = 0;  // 0 means infinite
    bool finite() const { return relative_order != 0; }
  };

  class Builder {
   public:
    Builder& generator(std::string name, std::int64_t relative_order = 0);
    Builder& order(std::string_view name, std::int64_t relative_order);
    Builder& relation(std::string lhs, std::string rhs, int line = 0);
    Builder& character(std::string spec) {
      character_ = std::move(spec);
      return *this;
    }
    std::shared_ptr<const PcPresentation> build() const;

   private:
    friend class PcPresentation;
    struct PendingRelation {
      std::string lhs;
      std::string rhs;
      int line;
    };
    std::vector<Generator> gens_;
    std::vector<PendingRelation> rels_;
    std::optional<std::string> character_;
  };

  /// Parses the line-oriented presentation format (gens/order/rel/char).
  static std::shared_ptr<const PcPresentation> parse(std::string_view text);

  std::size_t size() const { return gens_.size(); }
  const Generator& generator(std::size_t pc_position) const { return gens_[pc_position]; }
  const std::string& name(std::size_t pc_position) const { return gens_[pc_position].name; }
  std::optional<std::size_t> position_of(std::string_view name) const;
  /// Pc positions listed in declaration order.
  const std::vector<std::size_t>& declaration_order() const { return decl_to_pc_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::optional<std::string>& default_character() const { return default_character_; }

  NormalForm identity() const;
  NormalForm generator_power(std::size_t pc_position, const Integer& e = 1) const;

  Word parse_word(std::string_view text, int line = 1, int column = 1) const;
  NormalForm collect(const Word& w) const;
  NormalForm collect(std::string_view word_text) const { return collect(parse_word(word_text)); }
  NormalForm multiply(const NormalForm& x, const NormalForm& y) const;
  NormalForm invert(const NormalForm& x) const;
  NormalForm power(const NormalForm& x, const Integer& n) const;

  ConsistencyReport check_consistency() const;

  std::size_t hirsch_number() const;
  bool is_poly_z() const;
  TorsionStatus torsion_status() const;

  std::string format(const NormalForm& x) const;
  std::string format(const Word& w) const;
  /// Serializes back into the presentation file format.
  std::string serialize() const;

 private:
  PcPresentation() = default;

  struct Budget {
    std::uint64_t used = 0;
    void step();
  };
  using Images = std::vector<NormalForm>;  // indexed by pc position; only positions > level are used

  NormalForm mul_gen(NormalForm x, std::size_t i, Integer e, Budget& b) const;
  NormalForm mul(NormalForm x, const NormalForm& y, Budget& b) const;
  NormalForm pow(const NormalForm& x, Integer n, Budget& b) const;
  NormalForm inv(const NormalForm& x, Budget& b) const;
  NormalForm conj_power(std::size_t i, const Integer& e, NormalForm tail, Budget& b) const;
  NormalForm apply(const Images& images, std::size_t level, const NormalForm& h, Budget& b) const;
  Images compose(const Images& outer, const Images& inner, std::size_t level, Budget& b) const;
  Images power_images(const Images& images, std::size_t level, Integer n, Budget& b) const;
  NormalForm collect_word(const Word& w, Budget& b) const;
  void finish_level(std::size_t i);
  void validate_normal_form(const NormalForm& x) const;

  std::vector<Generator> gens_;
  std::vector<std::size_t> decl_to_pc_;
  std::vector<Relation> relations_;
  // forward_[i][j]: g_i g_j g_i^-1; inverse_[i][j]: g_i^-1 g_j g_i (j > i)
  std::vector<Images> forward_;
  std::vector<Images> inverse_;
  std::vector<NormalForm> power_;  // g_i^{r_i} for finite generators
  std::vector<bool> central_in_tail_;
  std::vector<bool> free_abelian_from_;  // size k+1
  // Integer matrices of the conjugation action when the tail is free abelian.
  std::vector<std::vector<std::vector<Integer>>> forward_matrix_;
  std::vector<std::vector<std::vector<Integer>>> inverse_matrix_;
  std::optional<std::string> default_character_;
};

using PresentationPtr = std::shared_ptr<const PcPresentation>;

/// Integer-valued homomorphism on a pc group, stored per pc position.
class Character {
 public:
  Character() = default;

  /// Validates values given in declaration order against every defining
  /// relation. Throws CharacterInconsistent naming the violated relation.
  static Character check(PresentationPtr pres, const std::vector<std::int64_t>& declared_values);
  /// Parses "a=0, b=1"; unnamed generators default to 0.
  static Character parse(PresentationPtr pres, std::string_view spec);

  const PresentationPtr& presentation() const { return pres_; }
  const std::vector<std::int64_t>& values() const { return values_; }  // pc order
  std::vector<std::int64_t> declared_values() const;
  bool is_zero() const;
  Character negated() const;

  Integer evaluate(const NormalForm& x) const;
  std::int64_t height(const NormalForm& x) const;  // evaluate(), narrowed
  Integer evaluate(const Word& w) const;

  std::string format() const;

  friend bool operator==(const Character& a, const Character& b) {
    return a.pres_ == b.pres_ && a.values_ == b.values_;
  }

 private:
  PresentationPtr pres_;
  std::vector<std::int64_t> values_;
};

}  // namespace novikit
