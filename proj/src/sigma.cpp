#include "novikit/sigma.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "intmat.hpp"
#include "koszul.hpp"
#include "ringparse.hpp"
#include "text.hpp"

namespace novikit {

namespace {

std::string entry_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

std::optional<std::pair<std::size_t, std::size_t>> first_difference(const RingMatrix& a, const RingMatrix& b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(a.at(i, j) == b.at(i, j))) return std::make_pair(i, j);
  return std::nullopt;
}

Integer augment(const std::vector<Integer>& eps, const RingMatrix& m, std::size_t col) {
  Integer s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += eps[i] * m.at(i, col).augmentation();
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Resolutions and valuations

Resolution::Resolution(FreeComplex c) : c_(std::move(c)) {
  if (!c_.augmentation()) fail(ErrorCode::PreconditionFailed, "a resolution needs an 'aug' row");
  const auto& eps = *c_.augmentation();
  if (eps.size() != c_.rank(0)) fail(ErrorCode::ShapeMismatch, "augmentation length differs from rank of degree 0");
  if (c_.top_degree() >= 1) {
    const RingMatrix& d1 = c_.boundary(1);
    for (std::size_t j = 0; j < d1.cols(); ++j) {
      if (augment(eps, d1, j) != 0) {
        fail(ErrorCode::PreconditionFailed, "augmentation does not vanish on the boundary of " + c_.labels(1)[j]);
      }
    }
  }
  Integer g = 0;
  for (const auto& e : eps) g = gcd(g, e);
  if (g != 1) fail(ErrorCode::PreconditionFailed, "augmentation is not onto the integers");
}

Resolution Resolution::parse(std::string_view text, const std::string& base_dir) {
  return Resolution(FreeComplex::parse(text, base_dir));
}

Resolution Resolution::koszul(const PresentationPtr& pres) {
  FreeComplex c = koszul_complex(pres);
  c.set_augmentation(std::vector<Integer>{1});
  return Resolution(std::move(c));
}

std::optional<std::int64_t> valuation(const ValuationAssignment& va, std::size_t degree,
                                      const std::vector<RingElement>& coords) {
  if (degree >= va.nu.size()) fail(ErrorCode::ShapeMismatch, "no shift for degree " + std::to_string(degree));
  std::optional<std::int64_t> low;
  for (const auto& x : coords) {
    if (x.is_zero()) continue;
    const std::int64_t h = to_int64(x.height_range(va.u).first, "height");
    low = low ? std::min(*low, h) : h;
  }
  if (!low) return std::nullopt;
  return va.nu[degree] + *low;
}

ValuationReport check_valuation_condition(const Resolution& res, const ValuationAssignment& va) {
  const FreeComplex& c = res.complex();
  if (va.nu.size() != c.num_degrees()) {
    fail(ErrorCode::ShapeMismatch, "need one shift per degree (" + std::to_string(c.num_degrees()) + ")");
  }
  ValuationReport r;
  r.suggested_nu = va.nu;
  for (std::size_t j = 1; j < c.num_degrees(); ++j) {
    const RingMatrix& d = c.boundary(j);
    std::optional<std::int64_t> tightest;
    for (std::size_t col = 0; col < d.cols(); ++col) {
      std::vector<RingElement> coords;
      for (std::size_t i = 0; i < d.rows(); ++i) coords.push_back(d.at(i, col));
      auto rhs = valuation(va, j - 1, coords);
      if (!rhs) continue;
      if (va.nu[j] > *rhs) r.failures.push_back({j, col, c.labels(j)[col], va.nu[j], *rhs});
      ValuationAssignment shifted{va.u, r.suggested_nu};
      auto need = valuation(shifted, j - 1, coords);
      tightest = tightest ? std::min(*tightest, *need) : *need;
    }
    if (tightest) r.suggested_nu[j] = std::min(r.suggested_nu[j], *tightest);
  }
  r.ok = r.failures.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Witnesses

Witness Witness::parse(const Resolution& res, std::string_view text) {
  const FreeComplex& c = res.complex();
  const PresentationPtr& pres = c.presentation();
  const std::size_t m = c.top_degree();
  Witness w;
  w.phi.resize(m + 1);
  w.s.resize(m + 1);
  std::vector<bool> have_phi(m + 1, false);
  for (std::size_t j = 0; j <= m; ++j) w.s[j] = RingMatrix(pres, c.rank(j + 1), c.rank(j));
  for (const auto& st : text::split_statements(text)) {
    std::string_view body = st.body;
    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) text::syntax_error(st.body_at, "expected ':' after the index");
    const std::string index(text::trim(body.substr(0, colon)));
    text::Position at = st.body_at;
    at.column += static_cast<int>(colon + 1);
    text::Lexer lex(body.substr(colon + 1), at);
    auto rows = detail::parse_ring_rows(lex, pres, Coefficients::integers());
    if (!lex.at_end()) text::syntax_error(lex.peek().at, "unexpected '" + lex.peek().text + "' after matrix");
    if (st.key == "rho") {
      if (!pres->position_of(index)) fail(ErrorCode::UndeclaredGenerator, "rho for undeclared generator '" + index + "'");
      std::vector<std::vector<Integer>> m_int;
      for (const auto& row : rows) {
        std::vector<Integer> r;
        for (const auto& e : row) {
          if (e.size() > 1 || (e.size() == 1 && !e.terms().begin()->first.is_identity())) {
            text::syntax_error(st.body_at, "rho entries must be integers");
          }
          r.push_back(e.augmentation());
        }
        m_int.push_back(r);
      }
      w.rho[index] = m_int;
      continue;
    }
    if (st.key != "phi" && st.key != "s") text::syntax_error(st.at, "unknown witness statement '" + st.key + "'");
    std::size_t k = 0;
    try {
      k = std::stoul(index);
    } catch (const std::exception&) {
      text::syntax_error(st.body_at, "expected a degree");
    }
    if (k > m) text::syntax_error(st.body_at, "degree " + std::to_string(k) + " is above the resolution");
    const std::size_t nr = st.key == "phi" ? c.rank(k) : c.rank(k + 1);
    const std::size_t nc = c.rank(k);
    RingMatrix mat(pres, nr, nc);
    if (!(rows.empty() && (nr == 0 || nc == 0))) {
      if (rows.size() != nr) {
        fail(ErrorCode::ShapeMismatch, "line " + std::to_string(st.at.line) + ": " + st.key + " " + index + " needs " +
                                           std::to_string(nr) + " rows, got " + std::to_string(rows.size()));
      }
      for (std::size_t i = 0; i < nr; ++i) {
        if (rows[i].size() != nc) {
          fail(ErrorCode::ShapeMismatch, "line " + std::to_string(st.at.line) + ": " + st.key + " " + index +
                                             " needs " + std::to_string(nc) + " columns");
        }
        for (std::size_t j = 0; j < nc; ++j) mat.at(i, j) = rows[i][j];
      }
    }
    if (st.key == "phi") {
      w.phi[k] = mat;
      have_phi[k] = true;
    } else {
      w.s[k] = mat;
    }
  }
  for (std::size_t j = 0; j <= m; ++j) {
    if (!have_phi[j]) fail(ErrorCode::Syntax, "witness has no 'phi " + std::to_string(j) + "'");
  }
  return w;
}

namespace {

void check_phi_shapes(const Resolution& res, const std::vector<RingMatrix>& phi) {
  const FreeComplex& c = res.complex();
  if (phi.size() != c.num_degrees()) {
    fail(ErrorCode::ShapeMismatch, "need phi in every degree 0.." + std::to_string(c.top_degree()));
  }
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (phi[j].rows() != c.rank(j) || phi[j].cols() != c.rank(j)) {
      fail(ErrorCode::ShapeMismatch, "phi " + std::to_string(j) + " must be square of size " + std::to_string(c.rank(j)));
    }
  }
}

}  // namespace

WitnessReport verify_sigma_witness(const Resolution& res, const std::vector<RingMatrix>& phi, const Character& u) {
  check_phi_shapes(res, phi);
  const FreeComplex& c = res.complex();
  if (u.presentation() != c.presentation()) fail(ErrorCode::MismatchedCharacter, "character of another presentation");
  WitnessReport r;
  for (std::size_t j = 1; j < c.num_degrees(); ++j) {
    auto diff = first_difference(RingMatrix::compose(c.boundary(j), phi[j]), RingMatrix::compose(phi[j - 1], c.boundary(j)));
    if (diff) {
      r.reasons.push_back("not a chain map: d" + std::to_string(j) + " phi" + std::to_string(j) + " and phi" +
                          std::to_string(j - 1) + " d" + std::to_string(j) + " differ at " +
                          entry_text(diff->first, diff->second));
    }
  }
  const auto& eps = res.augmentation();
  for (std::size_t l = 0; l < c.rank(0); ++l) {
    if (augment(eps, phi[0], l) != eps[l]) {
      r.reasons.push_back("does not lift the identity: augmentation of phi0 differs in column " + std::to_string(l));
    }
  }
  for (std::size_t j = 0; j < phi.size(); ++j)
    for (std::size_t i = 0; i < phi[j].rows(); ++i)
      for (std::size_t l = 0; l < phi[j].cols(); ++l) {
        const RingElement& x = phi[j].at(i, l);
        if (x.is_zero() || x.is_u_positive(u)) continue;
        r.reasons.push_back("entry " + entry_text(i, l) + " of phi" + std::to_string(j) + " = " + x.format() +
                            " reaches height " + x.height_range(u).first.get_str() + ", not u-positive");
      }
  r.accepted = r.reasons.empty();
  return r;
}

WitnessReport verify_homotopy(const Resolution& res, const std::vector<RingMatrix>& phi,
                              const std::vector<RingMatrix>& s) {
  check_phi_shapes(res, phi);
  const FreeComplex& c = res.complex();
  const PresentationPtr& pres = c.presentation();
  auto s_at = [&](std::size_t j) {
    if (j < s.size()) {
      if (s[j].rows() != c.rank(j + 1) || s[j].cols() != c.rank(j)) {
        fail(ErrorCode::ShapeMismatch, "s " + std::to_string(j) + " must be " + std::to_string(c.rank(j + 1)) + "x" +
                                           std::to_string(c.rank(j)));
      }
      return s[j];
    }
    return RingMatrix(pres, c.rank(j + 1), c.rank(j));
  };
  WitnessReport r;
  for (std::size_t j = 0; j < c.num_degrees(); ++j) {
    RingMatrix lhs(pres, c.rank(j), c.rank(j));
    if (j + 1 < c.num_degrees()) lhs = lhs + RingMatrix::compose(c.boundary(j + 1), s_at(j));
    if (j >= 1) lhs = lhs + RingMatrix::compose(s_at(j - 1), c.boundary(j));
    RingMatrix rhs = phi[j] - RingMatrix::identity(pres, c.rank(j));
    if (auto diff = first_difference(lhs, rhs)) {
      r.reasons.push_back("d s + s d differs from phi - id in degree " + std::to_string(j) + " at " +
                          entry_text(diff->first, diff->second));
    }
  }
  r.accepted = r.reasons.empty();
  return r;
}

std::vector<RingMatrix> koszul_homotopy(const Resolution& res, const std::vector<RingMatrix>& phi) {
  check_phi_shapes(res, phi);
  const FreeComplex& c = res.complex();
  const PresentationPtr& pres = c.presentation();
  const FreeComplex model = koszul_complex(pres);
  bool same = model.ranks() == c.ranks();
  for (std::size_t k = 1; same && k < c.num_degrees(); ++k) same = model.boundary(k) == c.boundary(k);
  if (!same) fail(ErrorCode::PreconditionFailed, "the standard homotopy needs the Koszul resolution of the group");
  const auto& positions = pres->declaration_order();
  detail::KoszulBasis basis(positions.size());
  const std::size_t m = c.top_degree();
  std::vector<RingMatrix> s;
  for (std::size_t j = 0; j <= m; ++j) {
    RingMatrix sj(pres, c.rank(j + 1), c.rank(j));
    if (j < m) {
      for (std::size_t l = 0; l < c.rank(j); ++l) {
        detail::Chain chain(c.rank(j), RingElement::zero(pres));
        for (std::size_t i = 0; i < c.rank(j); ++i) chain[i] = phi[j].at(i, l);
        chain[l] -= RingElement::one(pres);
        if (j >= 1) {
          detail::Chain boundary(c.rank(j - 1), RingElement::zero(pres));
          for (std::size_t i = 0; i < c.rank(j - 1); ++i) boundary[i] = c.boundary(j).at(i, l);
          detail::Chain back = detail::apply_matrix(s[j - 1], boundary);
          for (std::size_t i = 0; i < chain.size(); ++i) chain[i] -= back[i];
        }
        detail::Chain up = detail::koszul_contract(pres, positions, basis, j, chain);
        for (std::size_t i = 0; i < up.size(); ++i) sj.at(i, l) = up[i];
      }
    }
    s.push_back(sj);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Representations

Representation::Representation(PresentationPtr pres,
                               const std::map<std::string, std::vector<std::vector<Integer>>>& by_name)
    : pres_(std::move(pres)) {
  r_ = by_name.empty() ? 1 : by_name.begin()->second.size();
  if (r_ == 0) fail(ErrorCode::RepresentationInconsistent, "representation matrices must be nonempty");
  fwd_.assign(pres_->size(), detail::identity_matrix(r_));
  inv_ = fwd_;
  for (const auto& [name, m] : by_name) {
    auto pos = pres_->position_of(name);
    if (!pos) fail(ErrorCode::UndeclaredGenerator, "rho for undeclared generator '" + name + "'");
    if (m.size() != r_ || std::any_of(m.begin(), m.end(), [&](const auto& row) { return row.size() != r_; })) {
      fail(ErrorCode::ShapeMismatch, "rho " + name + " must be " + std::to_string(r_) + "x" + std::to_string(r_));
    }
    auto inv = detail::unimodular_inverse(m);
    if (!inv) fail(ErrorCode::RepresentationInconsistent, "rho " + name + " is not invertible over the integers");
    fwd_[*pos] = m;
    inv_[*pos] = *inv;
  }
  auto word_image = [&](const Word& w) {
    auto out = detail::identity_matrix(r_);
    for (const auto& l : w) {
      const auto& base = l.exponent >= 0 ? fwd_[l.generator] : inv_[l.generator];
      out = detail::mat_mul(out, detail::mat_pow(base, abs(l.exponent)));
    }
    return out;
  };
  for (const auto& rel : pres_->relations()) {
    if (word_image(rel.lhs) != word_image(rel.rhs)) {
      fail(ErrorCode::RepresentationInconsistent, "rho violates the relation " + rel.text);
    }
  }
}

Representation Representation::trivial(PresentationPtr pres) { return Representation(std::move(pres), {}); }

std::vector<std::vector<Integer>> Representation::evaluate(const NormalForm& g) const {
  auto out = detail::identity_matrix(r_);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Integer& e = g.exponents[p];
    if (e == 0) continue;
    out = detail::mat_mul(out, detail::mat_pow(e > 0 ? fwd_[p] : inv_[p], abs(e)));
  }
  return out;
}

namespace {

// Block (i, j) of the result holds sum_g n_g rho(g^-1)[l][s] g at (i r + l, j r + s).
RingMatrix twist(const RingMatrix& m, const Representation& rho) {
  const std::size_t r = rho.dimension();
  const PresentationPtr& pres = m.presentation();
  RingMatrix out(pres, m.rows() * r, m.cols() * r, m.coefficients());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& [g, n] : m.at(i, j).terms()) {
        const auto a = rho.evaluate(pres->invert(g));
        for (std::size_t l = 0; l < r; ++l)
          for (std::size_t s = 0; s < r; ++s)
            if (a[l][s] != 0) out.at(i * r + l, j * r + s).add_term(g, n * a[l][s]);
      }
  return out;
}

}  // namespace

TensoredComplex tensor_with_rep(const Resolution& res, const Representation& rho, const Character& u,
                                std::int64_t precision, const std::vector<RingMatrix>& phi) {
  const FreeComplex& c = res.complex();
  if (u.presentation() != c.presentation()) fail(ErrorCode::MismatchedCharacter, "character of another presentation");
  if (u.is_zero()) fail(ErrorCode::ZeroCharacter, "the Novikov completion needs a nonzero character");
  const std::size_t r = rho.dimension();
  TensoredComplex out;
  NovikovComplex& nc = out.complex;
  nc.u = u;
  std::vector<RingMatrix> d(c.num_degrees());
  for (std::size_t k = 0; k < c.num_degrees(); ++k) {
    nc.ranks.push_back(c.rank(k) * r);
    std::vector<std::string> labels;
    for (const auto& l : c.labels(k)) {
      for (std::size_t s = 0; s < r; ++s) labels.push_back(r == 1 ? l : l + "|f" + std::to_string(s + 1));
    }
    nc.labels.push_back(labels);
  }
  nc.d.resize(c.num_degrees());
  for (std::size_t k = 1; k < c.num_degrees(); ++k) d[k] = twist(c.boundary(k), rho);
  for (std::size_t k = 1; k + 1 < c.num_degrees(); ++k) {
    if (!RingMatrix::compose(d[k], d[k + 1]).is_zero()) {
      fail(ErrorCode::RepresentationInconsistent, "twisted complex has d o d nonzero in degree " + std::to_string(k));
    }
  }
  for (std::size_t k = 1; k < c.num_degrees(); ++k) nc.d[k] = NovikovMatrix::embed(d[k], u, precision);
  if (!phi.empty()) {
    check_phi_shapes(res, phi);
    bool phi_positive = true;
    for (const auto& m : phi)
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
          phi_positive = phi_positive && (m.at(i, j).is_zero() || m.at(i, j).is_u_positive(u));
    for (const auto& m : phi) {
      out.psi.push_back(NovikovMatrix::embed(twist(m, rho), u, precision));
      if (phi_positive && out.psi.back().first_non_positive()) {
        throw std::logic_error("twisting lost u-positivity");
      }
    }
  }
  return out;
}

FinishCertificate finish_executor(const Resolution& res, const std::vector<RingMatrix>& phi,
                                  const std::vector<RingMatrix>& s, const Representation& rho, const Character& u,
                                  std::int64_t precision) {
  auto witness = verify_sigma_witness(res, phi, u);
  auto homotopy = verify_homotopy(res, phi, s);
  if (!witness.accepted || !homotopy.accepted) {
    std::string why;
    for (const auto& r : witness.reasons) why += (why.empty() ? "" : "; ") + r;
    for (const auto& r : homotopy.reasons) why += (why.empty() ? "" : "; ") + r;
    fail(ErrorCode::PreconditionFailed, "witness rejected: " + why);
  }
  const FreeComplex& c = res.complex();
  TensoredComplex t = tensor_with_rep(res, rho, u, precision, phi);
  const std::size_t r = rho.dimension();
  std::vector<NovikovMatrix> homotopy_twisted;
  for (std::size_t j = 0; j < c.num_degrees(); ++j) {
    RingMatrix sj = j < s.size() ? s[j] : RingMatrix(c.presentation(), c.rank(j + 1), c.rank(j));
    homotopy_twisted.push_back(NovikovMatrix::embed(twist(sj, rho), u, precision));
  }
  FinishCertificate cert;
  cert.precision = precision;
  std::vector<NovikovMatrix> id_minus;
  for (std::size_t j = 0; j < c.num_degrees(); ++j) {
    const std::size_t n = c.rank(j) * r;
    const NovikovMatrix id = NovikovMatrix::identity(u, Coefficients::integers(), n, precision);
    id_minus.push_back(id - t.psi[j]);
    NovikovMatrix b = invert_id_minus(t.psi[j], NovikovMatrix::Product::Composition);
    FinishDegree fd;
    fd.degree = j;
    fd.rank = n;
    fd.precision = b.precision();
    fd.left_inverse = NovikovMatrix::compose(id_minus[j], b).is_identity();
    fd.right_inverse = NovikovMatrix::compose(b, id_minus[j]).is_identity();
    fd.chain_map = true;
    if (j >= 1) {
      const NovikovMatrix& d = t.complex.d[j];
      fd.chain_map = (NovikovMatrix::compose(d, id_minus[j]) - NovikovMatrix::compose(id_minus[j - 1], d)).is_zero();
    }
    // Id - Psi = -(d S + S d)
    NovikovMatrix sum = id_minus[j];
    if (j + 1 < c.num_degrees()) sum = sum + NovikovMatrix::compose(t.complex.d[j + 1], homotopy_twisted[j]);
    if (j >= 1) sum = sum + NovikovMatrix::compose(homotopy_twisted[j - 1], t.complex.d[j]);
    fd.null_homotopic = sum.is_zero();
    if (!fd.left_inverse) cert.reasons.push_back("(Id - Psi) B is not the identity in degree " + std::to_string(j));
    if (!fd.right_inverse) cert.reasons.push_back("B (Id - Psi) is not the identity in degree " + std::to_string(j));
    if (!fd.chain_map) cert.reasons.push_back("Id - Psi is not a chain map in degree " + std::to_string(j));
    if (!fd.null_homotopic) cert.reasons.push_back("Id - Psi is not null-homotopic in degree " + std::to_string(j));
    cert.precision = std::min(cert.precision, fd.precision);
    cert.degrees.push_back(fd);
    cert.inverses.push_back(std::move(b));
  }
  cert.certified = cert.reasons.empty();
  return cert;
}

}  // namespace novikit
