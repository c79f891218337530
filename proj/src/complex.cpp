#include "novikit/complex.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "intmat.hpp"
#include "koszul.hpp"
#include "ringparse.hpp"
#include "text.hpp"

namespace novikit {

FreeComplex::FreeComplex(PresentationPtr pres, std::vector<std::size_t> ranks, Coefficients c)
    : pres_(std::move(pres)), coeffs_(c), ranks_(std::move(ranks)) {
  d_.resize(ranks_.size());
  labels_.resize(ranks_.size());
  for (std::size_t k = 1; k < ranks_.size(); ++k) d_[k] = RingMatrix(pres_, ranks_[k - 1], ranks_[k], coeffs_);
  for (std::size_t k = 0; k < ranks_.size(); ++k) {
    for (std::size_t i = 0; i < ranks_[k]; ++i) labels_[k].push_back("e" + std::to_string(k) + "_" + std::to_string(i));
  }
}

const RingMatrix& FreeComplex::boundary(std::size_t k) const {
  if (k == 0 || k >= d_.size()) fail(ErrorCode::InvalidArgument, "no boundary map in degree " + std::to_string(k));
  return d_[k];
}

void FreeComplex::set_boundary(std::size_t k, RingMatrix d) {
  if (k == 0 || k >= d_.size()) fail(ErrorCode::InvalidArgument, "no boundary map in degree " + std::to_string(k));
  if (d.rows() != ranks_[k - 1] || d.cols() != ranks_[k]) {
    fail(ErrorCode::ShapeMismatch, "d " + std::to_string(k) + " must be " + std::to_string(ranks_[k - 1]) + "x" +
                                       std::to_string(ranks_[k]) + ", got " + std::to_string(d.rows()) + "x" +
                                       std::to_string(d.cols()));
  }
  d_[k] = std::move(d);
}

void FreeComplex::set_labels(std::size_t k, std::vector<std::string> labels) {
  if (labels.size() != ranks_.at(k)) {
    fail(ErrorCode::ShapeMismatch, "degree " + std::to_string(k) + " needs " + std::to_string(ranks_[k]) + " labels");
  }
  labels_[k] = std::move(labels);
}

DSquaredReport FreeComplex::check_d_squared() const {
  DSquaredReport r;
  for (std::size_t k = 1; k + 1 < ranks_.size(); ++k) {
    RingMatrix dd = RingMatrix::compose(d_[k], d_[k + 1]);
    for (std::size_t i = 0; i < dd.rows(); ++i)
      for (std::size_t j = 0; j < dd.cols(); ++j) {
        if (!dd.at(i, j).is_zero()) {
          r.ok = false;
          r.degree = k;
          r.row = i;
          r.col = j;
          r.value = dd.at(i, j).format();
          return r;
        }
      }
  }
  return r;
}

void FreeComplex::require_d_squared() const {
  auto r = check_d_squared();
  if (!r.ok) {
    fail(ErrorCode::DSquaredNonzero, "d" + std::to_string(r.degree) + " o d" + std::to_string(r.degree + 1) +
                                         " is nonzero at entry (" + std::to_string(r.row) + ", " +
                                         std::to_string(r.col) + "): " + r.value + " (boundary of " +
                                         labels_[r.degree + 1][r.col] + ")");
  }
}

std::int64_t FreeComplex::euler_characteristic() const {
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < ranks_.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(ranks_[k]);
  return chi;
}

FreeComplex FreeComplex::with_coefficients(Coefficients target) const {
  FreeComplex c = *this;
  c.coeffs_ = target;
  for (std::size_t k = 1; k < d_.size(); ++k) c.d_[k] = d_[k].with_coefficients(target);
  return c;
}

std::string FreeComplex::serialize() const {
  std::ostringstream out;
  out << pres_->serialize();
  for (std::size_t k = 0; k < ranks_.size(); ++k) out << "degree " << k << " rank " << ranks_[k] << '\n';
  for (std::size_t k = 0; k < ranks_.size(); ++k) {
    if (ranks_[k] == 0) continue;
    out << "label " << k << ":";
    for (const auto& l : labels_[k]) out << ' ' << l;
    out << '\n';
  }
  for (std::size_t k = 1; k < ranks_.size(); ++k) {
    if (d_[k].is_zero()) continue;
    out << "d " << k << ": " << d_[k].format() << '\n';
  }
  if (manifold_dim_) out << "manifold-dim " << *manifold_dim_ << '\n';
  if (aug_) {
    out << "aug: [";
    for (std::size_t i = 0; i < aug_->size(); ++i) out << (i ? ", " : "") << (*aug_)[i].get_str();
    out << "]\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t leading_index(const text::Statement& st, std::string_view& rest) {
  std::string_view body = st.body;
  std::size_t i = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
  if (i == 0) text::syntax_error(st.body_at, "expected a degree after '" + st.key + "'");
  std::size_t k = std::stoul(std::string(body.substr(0, i)));
  while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
  if (i < body.size() && body[i] == ':') ++i;
  rest = body.substr(i);
  return k;
}

}  // namespace

FreeComplex FreeComplex::parse(std::string_view source, const std::string& base_dir) {
  std::string pres_text;
  std::optional<std::string> pres_path;
  std::vector<text::Statement> relators, koszul, degrees, ds, labels, augs;
  std::optional<int> manifold;
  for (auto& st : text::split_statements(source)) {
    if (st.key == "gens" || st.key == "order" || st.key == "rel" || st.key == "char") {
      pres_text += st.key + ": " + st.body + "\n";
    } else if (st.key == "pres") {
      pres_path = st.body;
    } else if (st.key == "relators") {
      relators.push_back(st);
    } else if (st.key == "koszul") {
      koszul.push_back(st);
    } else if (st.key == "degree") {
      degrees.push_back(st);
    } else if (st.key == "d") {
      ds.push_back(st);
    } else if (st.key == "label") {
      labels.push_back(st);
    } else if (st.key == "aug") {
      augs.push_back(st);
    } else if (st.key == "manifold-dim") {
      try {
        manifold = std::stoi(st.body);
      } catch (const std::exception&) {
        text::syntax_error(st.body_at, "manifold-dim needs an integer");
      }
    } else {
      text::syntax_error(st.at, "unknown complex statement '" + st.key + "'");
    }
  }
  if (pres_path) {
    if (!pres_text.empty()) fail(ErrorCode::Syntax, "give either 'pres:' or an inline presentation, not both");
    std::filesystem::path p(*pres_path);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    pres_text = read_file(p.string());
  }
  if (pres_text.empty()) fail(ErrorCode::Syntax, "complex file has no presentation");
  PresentationPtr pres = PcPresentation::parse(pres_text);

  FreeComplex c;
  if (!relators.empty() || !koszul.empty()) {
    if (!degrees.empty() || !ds.empty()) {
      fail(ErrorCode::Syntax, "builder statements cannot be mixed with explicit degree/d lines");
    }
    if (!relators.empty() && !koszul.empty()) fail(ErrorCode::Syntax, "choose one of 'relators' and 'koszul'");
    if (!relators.empty()) {
      std::vector<Word> words;
      for (const auto& st : relators) {
        if (text::trim(st.body).empty()) continue;
        for (const auto& piece : text::split_top_level(st.body, ',')) {
          words.push_back(pres->parse_word(text::trim(piece), st.body_at.line, st.body_at.column));
        }
      }
      c = presentation_complex(pres, words);
    } else {
      std::vector<std::size_t> positions;
      std::istringstream in(koszul.front().body);
      std::string name;
      while (in >> name) {
        auto pos = pres->position_of(name);
        if (!pos) fail(ErrorCode::UndeclaredGenerator, "undeclared generator '" + name + "' in koszul");
        positions.push_back(*pos);
      }
      c = positions.empty() ? koszul_complex(pres) : koszul_complex(pres, positions);
    }
  } else {
    std::vector<std::size_t> ranks;
    std::vector<bool> seen;
    for (const auto& st : degrees) {
      std::istringstream in(st.body);
      std::size_t k = 0, r = 0;
      std::string word;
      if (!(in >> k >> word >> r) || word != "rank") text::syntax_error(st.body_at, "expected 'degree <k> rank <r>'");
      if (ranks.size() <= k) {
        ranks.resize(k + 1, 0);
        seen.resize(k + 1, false);
      }
      if (seen[k]) text::syntax_error(st.at, "degree " + std::to_string(k) + " given twice");
      seen[k] = true;
      ranks[k] = r;
    }
    if (ranks.empty()) fail(ErrorCode::Syntax, "complex file has no 'degree' lines");
    c = FreeComplex(pres, ranks);
    for (const auto& st : ds) {
      std::string_view rest;
      std::size_t k = leading_index(st, rest);
      if (k == 0 || k >= ranks.size()) text::syntax_error(st.at, "d " + std::to_string(k) + " has no target degree");
      text::Lexer lex(rest, st.body_at);
      auto rows = detail::parse_ring_rows(lex, pres, Coefficients::integers());
      if (!lex.at_end()) text::syntax_error(lex.peek().at, "unexpected '" + lex.peek().text + "' after matrix");
      RingMatrix m(pres, ranks[k - 1], ranks[k]);
      const bool empty_ok = rows.empty() && (ranks[k - 1] == 0 || ranks[k] == 0);
      if (!empty_ok) {
        if (rows.size() != ranks[k - 1]) {
          fail(ErrorCode::ShapeMismatch, "line " + std::to_string(st.at.line) + ": d " + std::to_string(k) + " needs " +
                                             std::to_string(ranks[k - 1]) + " rows (rank of degree " +
                                             std::to_string(k - 1) + "), got " + std::to_string(rows.size()));
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != ranks[k]) {
            fail(ErrorCode::ShapeMismatch, "line " + std::to_string(st.at.line) + ": row " + std::to_string(i) +
                                               " of d " + std::to_string(k) + " needs " + std::to_string(ranks[k]) +
                                               " entries, got " + std::to_string(rows[i].size()));
          }
          for (std::size_t j = 0; j < ranks[k]; ++j) m.at(i, j) = std::move(rows[i][j]);
        }
      }
      c.set_boundary(k, std::move(m));
    }
  }
  for (const auto& st : labels) {
    std::string_view rest;
    std::size_t k = leading_index(st, rest);
    if (k >= c.num_degrees()) text::syntax_error(st.at, "label for a missing degree");
    std::istringstream in{std::string(rest)};
    std::vector<std::string> names;
    std::string n;
    while (in >> n) names.push_back(n);
    try {
      c.set_labels(k, names);
    } catch (const Error& e) {
      fail(e.code(), "line " + std::to_string(st.at.line) + ": " + e.what());
    }
  }
  for (const auto& st : augs) {
    text::Lexer lex(st.body, st.body_at);
    auto row = detail::parse_ring_row(lex, pres, Coefficients::integers());
    if (row.size() != c.rank(0)) {
      fail(ErrorCode::ShapeMismatch, "line " + std::to_string(st.at.line) + ": aug needs " +
                                         std::to_string(c.rank(0)) + " entries");
    }
    std::vector<Integer> values;
    for (const auto& e : row) {
      if (e.size() > 1 || (e.size() == 1 && !e.terms().begin()->first.is_identity())) {
        text::syntax_error(st.body_at, "augmentation entries must be integers");
      }
      values.push_back(e.augmentation());
    }
    c.set_augmentation(values);
  }
  c.set_manifold_dim(manifold);
  c.require_d_squared();
  return c;
}

// ---------------------------------------------------------------------------
// Builders

RingElement fox_derivative(const PresentationPtr& pres, const Word& r, std::size_t generator) {
  RingElement out(pres);
  NormalForm prefix = pres->identity();
  for (const auto& letter : r) {
    if (letter.generator == generator && letter.exponent != 0) {
      const NormalForm x = pres->generator_power(generator);
      const NormalForm x_inv = pres->generator_power(generator, -1);
      if (letter.exponent > 0) {
        NormalForm p = prefix;
        for (Integer l = 0; l < letter.exponent; ++l) {
          out.add_term(p, 1);
          p = pres->multiply(p, x);
        }
      } else {
        NormalForm p = prefix;
        for (Integer l = 0; l < -letter.exponent; ++l) {
          p = pres->multiply(p, x_inv);
          out.add_term(p, -1);
        }
      }
    }
    prefix = pres->multiply(prefix, pres->generator_power(letter.generator, letter.exponent));
  }
  return out;
}

FreeComplex presentation_complex(const PresentationPtr& pres, const std::vector<Word>& relators) {
  const std::size_t g = pres->size();
  for (const auto& r : relators) {
    if (!pres->collect(r).is_identity()) {
      fail(ErrorCode::RelatorNotTrivial, "relator " + pres->format(r) + " collects to " +
                                             pres->format(pres->collect(r)) + ", not the identity");
    }
  }
  std::vector<std::size_t> ranks{1, g};
  if (!relators.empty()) ranks.push_back(relators.size());
  FreeComplex c(pres, ranks);
  const auto& decl = pres->declaration_order();
  RingMatrix d1(pres, 1, g);
  std::vector<std::string> gen_labels;
  for (std::size_t j = 0; j < g; ++j) {
    d1.at(0, j) = RingElement::monomial(pres, pres->generator_power(decl[j])) - RingElement::one(pres);
    gen_labels.push_back(pres->name(decl[j]));
  }
  c.set_boundary(1, d1);
  c.set_labels(0, {"*"});
  c.set_labels(1, gen_labels);
  if (!relators.empty()) {
    RingMatrix d2(pres, g, relators.size());
    std::vector<std::string> rel_labels;
    for (std::size_t r = 0; r < relators.size(); ++r) {
      for (std::size_t j = 0; j < g; ++j) d2.at(j, r) = fox_derivative(pres, relators[r], decl[j]);
      rel_labels.push_back("r" + std::to_string(r + 1));
    }
    c.set_boundary(2, d2);
    c.set_labels(2, rel_labels);
  }
  c.require_d_squared();
  return c;
}

namespace {

RingMatrix koszul_boundary(const PresentationPtr& pres, const std::vector<std::size_t>& positions,
                           const detail::KoszulBasis& basis, std::size_t d) {
  const auto& src = basis.subsets(d);
  const auto& dst = basis.subsets(d - 1);
  RingMatrix m(pres, dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    const auto& s = src[j];
    for (std::size_t p = 0; p < s.size(); ++p) {
      std::vector<std::size_t> face = s;
      face.erase(face.begin() + static_cast<long>(p));
      RingElement x = RingElement::monomial(pres, pres->generator_power(positions[s[p]])) - RingElement::one(pres);
      m.at(basis.index_of(face), j) = p % 2 == 0 ? x : -x;
    }
  }
  return m;
}

void check_commuting(const PresentationPtr& pres, const std::vector<std::size_t>& positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (pres->generator(positions[i]).finite()) {
      fail(ErrorCode::InvalidArgument, "Koszul generator '" + pres->name(positions[i]) + "' has finite order");
    }
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      auto x = pres->generator_power(positions[i]);
      auto y = pres->generator_power(positions[j]);
      if (!(pres->multiply(x, y) == pres->multiply(y, x))) {
        fail(ErrorCode::InvalidArgument,
             "Koszul generators '" + pres->name(positions[i]) + "' and '" + pres->name(positions[j]) + "' do not commute");
      }
    }
  }
}

}  // namespace

FreeComplex koszul_complex(const PresentationPtr& pres, const std::vector<std::size_t>& positions) {
  check_commuting(pres, positions);
  const std::size_t k = positions.size();
  detail::KoszulBasis basis(k);
  std::vector<std::size_t> ranks;
  for (std::size_t d = 0; d <= k; ++d) ranks.push_back(basis.subsets(d).size());
  FreeComplex c(pres, ranks);
  std::vector<std::string> names;
  for (std::size_t p : positions) names.push_back(pres->name(p));
  for (std::size_t d = 0; d <= k; ++d) {
    std::vector<std::string> labels;
    for (const auto& s : basis.subsets(d)) labels.push_back(basis.label(s, names));
    c.set_labels(d, labels);
    if (d > 0) c.set_boundary(d, koszul_boundary(pres, positions, basis, d));
  }
  if (k == pres->size()) c.set_manifold_dim(static_cast<int>(k));
  c.require_d_squared();
  return c;
}

FreeComplex koszul_complex(const PresentationPtr& pres) { return koszul_complex(pres, pres->declaration_order()); }

FreeComplex product_with_sphere(const FreeComplex& c, int p) {
  if (p < 2) fail(ErrorCode::InvalidArgument, "sphere dimension must be at least 2");
  const std::size_t n = c.top_degree();
  const std::size_t sp = static_cast<std::size_t>(p);
  std::vector<std::size_t> ranks(n + sp + 1, 0);
  for (std::size_t k = 0; k < ranks.size(); ++k) ranks[k] = c.rank(k) + (k >= sp ? c.rank(k - sp) : 0);
  FreeComplex out(c.presentation(), ranks, c.coefficients());
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    std::vector<std::string> labels;
    if (k < c.num_degrees())
      for (const auto& l : c.labels(k)) labels.push_back(l);
    if (k >= sp && k - sp < c.num_degrees())
      for (const auto& l : c.labels(k - sp)) labels.push_back(l + "xS");
    out.set_labels(k, labels);
  }
  for (std::size_t k = 1; k < ranks.size(); ++k) {
    RingMatrix m(c.presentation(), ranks[k - 1], ranks[k], c.coefficients());
    const std::size_t low_rows = c.rank(k - 1), low_cols = c.rank(k);
    if (k <= n) {
      const RingMatrix& d = c.boundary(k);
      for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) m.at(i, j) = d.at(i, j);
    }
    if (k > sp && k - sp <= n) {
      // the sphere cell is a cycle, so d(e x S) = (de) x S with no sign change
      const RingMatrix& d = c.boundary(k - sp);
      for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) m.at(low_rows + i, low_cols + j) = d.at(i, j);
    }
    out.set_boundary(k, m);
  }
  if (c.manifold_dim()) out.set_manifold_dim(*c.manifold_dim() + p);
  out.require_d_squared();
  return out;
}

namespace {

std::vector<std::string> fiber_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(k <= 4 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i + 1));
  return names;
}

}  // namespace

FreeComplex mapping_torus(const std::vector<std::vector<Integer>>& phi) {
  const std::size_t k = phi.size();
  if (k == 0) fail(ErrorCode::InvalidArgument, "monodromy matrix is empty");
  if (!detail::unimodular_inverse(phi)) fail(ErrorCode::NotUnimodular, "monodromy matrix is not invertible over the integers");
  const auto names = fiber_names(k);
  PcPresentation::Builder b;
  for (const auto& n : names) b.generator(n);
  b.generator("t");
  for (std::size_t j = 0; j < k; ++j) {
    std::string rhs;
    for (std::size_t i = 0; i < k; ++i) {
      if (phi[i][j] == 0) continue;
      if (!rhs.empty()) rhs += " ";
      rhs += names[i];
      if (phi[i][j] != 1) rhs += "^" + phi[i][j].get_str();
    }
    b.relation("t " + names[j] + " t^-1", rhs.empty() ? "1" : rhs);
  }
  std::string char_spec = "t=1";
  b.character(char_spec);
  PresentationPtr pres = b.build();
  if (!pres->check_consistency().consistent()) {
    fail(ErrorCode::InconsistentPresentation, "mapping torus presentation failed its consistency check");
  }
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < k; ++i) positions.push_back(pres->declaration_order()[i]);
  const std::size_t tpos = pres->declaration_order()[k];
  const NormalForm t = pres->generator_power(tpos);
  const NormalForm t_inv = pres->generator_power(tpos, -1);

  detail::KoszulBasis basis(k);
  std::vector<RingMatrix> kd(k + 1);
  for (std::size_t d = 1; d <= k; ++d) kd[d] = koszul_boundary(pres, positions, basis, d);

  // alpha(g) = t^-1 g t; chi is the alpha-semilinear lift with chi_0 = id
  auto alpha = [&](const RingElement& x) {
    RingElement out(pres);
    for (const auto& [g, c] : x.terms()) out.add_term(pres->multiply(pres->multiply(t_inv, g), t), c);
    return out;
  };
  std::vector<std::vector<detail::Chain>> chi(k + 1);  // chi[d][s] = chain in degree d
  chi[0].push_back(detail::Chain{RingElement::one(pres)});
  for (std::size_t d = 1; d <= k; ++d) {
    for (std::size_t s = 0; s < basis.subsets(d).size(); ++s) {
      // chi_{d-1}(d e_s) = sum_i alpha(D[i][s]) chi_{d-1}(e_i)
      detail::Chain image(basis.subsets(d - 1).size(), RingElement::zero(pres));
      for (std::size_t i = 0; i < kd[d].rows(); ++i) {
        const RingElement& coeff = kd[d].at(i, s);
        if (coeff.is_zero()) continue;
        RingElement a = alpha(coeff);
        for (std::size_t l = 0; l < image.size(); ++l) {
          if (!chi[d - 1][i][l].is_zero()) image[l] += a * chi[d - 1][i][l];
        }
      }
      chi[d].push_back(detail::koszul_contract(pres, positions, basis, d - 1, image));
    }
  }

  std::vector<std::size_t> ranks(k + 2, 0);
  for (std::size_t d = 0; d <= k + 1; ++d) {
    ranks[d] = (d <= k ? basis.subsets(d).size() : 0) + (d >= 1 ? basis.subsets(d - 1).size() : 0);
  }
  FreeComplex c(pres, ranks);
  for (std::size_t d = 0; d <= k + 1; ++d) {
    std::vector<std::string> labels;
    if (d <= k)
      for (const auto& s : basis.subsets(d)) labels.push_back(basis.label(s, names));
    if (d >= 1)
      for (const auto& s : basis.subsets(d - 1)) labels.push_back(s.empty() ? "t" : basis.label(s, names) + ".t");
    c.set_labels(d, labels);
  }
  const RingElement tt = RingElement::monomial(pres, t);
  for (std::size_t d = 1; d <= k + 1; ++d) {
    RingMatrix m(pres, ranks[d - 1], ranks[d]);
    const std::size_t top_rows = d - 1 <= k ? basis.subsets(d - 1).size() : 0;
    const std::size_t top_cols = d <= k ? basis.subsets(d).size() : 0;
    if (d <= k) {
      for (std::size_t i = 0; i < kd[d].rows(); ++i)
        for (std::size_t j = 0; j < kd[d].cols(); ++j) m.at(i, j) = kd[d].at(i, j);
    }
    // d(e x I) = (-1)^{|e|} (t chi(e) - e) + (de) x I
    const std::size_t e_deg = d - 1;
    const Integer sign = e_deg % 2 == 0 ? 1 : -1;
    for (std::size_t s = 0; s < basis.subsets(e_deg).size(); ++s) {
      const std::size_t col = top_cols + s;
      for (std::size_t l = 0; l < chi[e_deg][s].size(); ++l) {
        RingElement entry = tt * chi[e_deg][s][l];
        if (l == s) entry -= RingElement::one(pres);
        m.at(l, col) = entry.scaled(sign);
      }
      if (e_deg >= 1) {
        for (std::size_t i = 0; i < kd[e_deg].rows(); ++i) m.at(top_rows + i, col) = kd[e_deg].at(i, s);
      }
    }
    c.set_boundary(d, m);
  }
  c.set_manifold_dim(static_cast<int>(k + 1));
  c.require_d_squared();
  return c;
}

// ---------------------------------------------------------------------------
// Novikov base change

std::int64_t NovikovComplex::precision() const {
  std::int64_t p = kExactPrecision;
  for (std::size_t k = 1; k < d.size(); ++k) p = std::min(p, d[k].precision());
  return p;
}

bool NovikovComplex::d_squared_vanishes() const {
  for (std::size_t k = 1; k + 1 < d.size(); ++k) {
    if (!NovikovMatrix::compose(d[k], d[k + 1]).is_zero()) return false;
  }
  return true;
}

std::int64_t NovikovComplex::euler_characteristic() const {
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < ranks.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(ranks[k]);
  return chi;
}

NovikovComplex base_change_novikov(const FreeComplex& c, const Character& u, std::int64_t precision) {
  if (u.presentation() != c.presentation()) {
    fail(ErrorCode::MismatchedCharacter, "character belongs to a different presentation than the complex");
  }
  if (u.is_zero()) fail(ErrorCode::ZeroCharacter, "the Novikov completion needs a nonzero character");
  NovikovComplex nc;
  nc.u = u;
  nc.ranks = c.ranks();
  nc.d.resize(c.num_degrees());
  for (std::size_t k = 0; k < c.num_degrees(); ++k) nc.labels.push_back(c.labels(k));
  for (std::size_t k = 1; k < c.num_degrees(); ++k) nc.d[k] = NovikovMatrix::embed(c.boundary(k), u, precision);
  return nc;
}

// ---------------------------------------------------------------------------
// Fingerprint: ranks over F_p(t)

namespace {

using Poly = std::vector<std::uint64_t>;  // coefficients of 1, t, t^2, ...

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint64_t>((r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p);
    }
  }
  trim(r);
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0;
    std::uint64_t y = i < b.size() ? b[i] : 0;
    r[i] = (x + p - y) % p;
  }
  trim(r);
  return r;
}

// Fraction-free elimination; the rank over the fraction field.
std::size_t poly_rank(std::vector<std::vector<Poly>> m, std::uint64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].empty()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].empty()) continue;
      const Poly a = m[r][c], b = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = poly_sub(poly_mul(a, m[i][j], p), poly_mul(b, m[r][j], p), p);
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<std::size_t> fingerprint(const FreeComplex& c, const Character& u, std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (u.presentation() != c.presentation()) {
    fail(ErrorCode::MismatchedCharacter, "character belongs to a different presentation than the complex");
  }
  if (u.is_zero()) fail(ErrorCode::ZeroCharacter, "fingerprint needs a nonzero character");
  const std::size_t n = c.num_degrees();
  std::vector<std::size_t> rank_d(n + 1, 0);  // rank of d_k
  for (std::size_t k = 1; k < n; ++k) {
    const RingMatrix& d = c.boundary(k);
    std::int64_t lo = 0;
    bool any = false;
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        for (const auto& [g, coeff] : d.at(i, j).terms()) {
          std::int64_t h = u.height(g);
          lo = any ? std::min(lo, h) : h;
          any = true;
        }
    if (!any) continue;
    std::vector<std::vector<Poly>> m(d.rows(), std::vector<Poly>(d.cols()));
    const Integer modulus(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) {
        Poly& e = m[i][j];
        for (const auto& [g, coeff] : d.at(i, j).terms()) {
          const std::size_t deg = static_cast<std::size_t>(u.height(g) - lo);
          if (e.size() <= deg) e.resize(deg + 1, 0);
          Integer r;
          mpz_fdiv_r(r.get_mpz_t(), coeff.get_mpz_t(), modulus.get_mpz_t());
          e[deg] = (e[deg] + r.get_ui()) % p;
        }
        trim(e);
      }
    rank_d[k] = poly_rank(std::move(m), p);
  }
  std::vector<std::size_t> betti(n, 0);
  for (std::size_t k = 0; k < n; ++k) betti[k] = c.rank(k) - rank_d[k] - rank_d[k + 1];
  return betti;
}

}  // namespace novikit
