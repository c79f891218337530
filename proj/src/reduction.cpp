#include "novikit/reduction.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>

namespace novikit {

PivotStrategy PivotStrategy::parse(const std::string& text) {
  PivotStrategy s;
  if (text.empty() || text == "lowest") return s;
  if (text == "sparse") {
    s.kind = Kind::Sparse;
    return s;
  }
  if (text.rfind("random", 0) == 0) {
    s.kind = Kind::Random;
    if (text.size() > 6) {
      if (text[6] != ':') fail(ErrorCode::InvalidArgument, "expected random:SEED, got '" + text + "'");
      try {
        std::size_t used = 0;
        s.seed = std::stoull(text.substr(7), &used);
        if (used != text.size() - 7) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "bad seed in '" + text + "'");
      }
    }
    return s;
  }
  fail(ErrorCode::InvalidArgument, "unknown strategy '" + text + "' (lowest, sparse, random:SEED)");
}

std::string PivotStrategy::name() const {
  switch (kind) {
    case Kind::LowestHeight: return "lowest";
    case Kind::Sparse: return "sparse";
    case Kind::Random: return "random:" + std::to_string(seed);
  }
  return "lowest";
}

namespace {

NovikovMatrix drop(const NovikovMatrix& m, std::optional<std::size_t> row, std::optional<std::size_t> col) {
  const std::size_t rows = m.rows() - (row ? 1 : 0);
  const std::size_t cols = m.cols() - (col ? 1 : 0);
  NovikovMatrix out(m.character(), m.coefficients(), rows, cols, m.precision());
  for (std::size_t i = 0, oi = 0; i < m.rows(); ++i) {
    if (row && i == *row) continue;
    for (std::size_t j = 0, oj = 0; j < m.cols(); ++j) {
      if (col && j == *col) continue;
      out.at(oi, oj++) = m.at(i, j);
    }
    ++oi;
  }
  out.uniformize();
  return out;
}

}  // namespace

ReductionMove eliminate(NovikovComplex& c, std::size_t k, std::size_t row, std::size_t col) {
  if (k == 0 || k >= c.d.size()) fail(ErrorCode::InvalidArgument, "no boundary in degree " + std::to_string(k));
  const NovikovMatrix& d = c.d[k];
  if (row >= d.rows() || col >= d.cols()) fail(ErrorCode::InvalidArgument, "pivot outside the boundary matrix");
  const NovikovSeries& p = d.at(row, col);
  if (p.is_zero()) fail(ErrorCode::NotAUnit, "pivot entry is zero below the precision");
  auto cert = p.certify_unit();
  if (!cert) fail(ErrorCode::NotAUnit, "pivot " + p.format() + " does not certify as a unit");

  ReductionMove move{k, col, row, c.labels[k][col], c.labels[k - 1][row], *cert, p.format()};

  // new basis e_j - D[row][j] p^-1 e_col in degree k kills the pivot row
  NovikovMatrix next(d.character(), d.coefficients(), d.rows() - 1, d.cols() - 1, d.precision());
  // the inverse is only needed when both the pivot row and column have other entries
  bool row_busy = false, col_busy = false;
  for (std::size_t j = 0; j < d.cols(); ++j) row_busy = row_busy || (j != col && !d.at(row, j).is_zero());
  for (std::size_t i = 0; i < d.rows(); ++i) col_busy = col_busy || (i != row && !d.at(i, col).is_zero());
  std::vector<NovikovSeries> factor(d.cols());
  if (row_busy && col_busy) {
    const NovikovSeries p_inv = p.invert_unit();
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j != col && !d.at(row, j).is_zero()) factor[j] = d.at(row, j) * p_inv;
    }
  }
  for (std::size_t i = 0, oi = 0; i < d.rows(); ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, oj = 0; j < d.cols(); ++j) {
      if (j == col) continue;
      NovikovSeries e = d.at(i, j);
      if (!d.at(row, j).is_zero() && !d.at(i, col).is_zero()) e -= factor[j] * d.at(i, col);
      next.at(oi, oj++) = e;
    }
    ++oi;
  }
  next.uniformize();
  c.d[k] = std::move(next);
  if (k + 1 < c.d.size()) c.d[k + 1] = drop(c.d[k + 1], col, std::nullopt);
  if (k >= 2) c.d[k - 1] = drop(c.d[k - 1], std::nullopt, row);
  c.ranks[k] -= 1;
  c.ranks[k - 1] -= 1;
  c.labels[k].erase(c.labels[k].begin() + static_cast<long>(col));
  c.labels[k - 1].erase(c.labels[k - 1].begin() + static_cast<long>(row));
  return move;
}

namespace {

struct Candidate {
  std::int64_t height = 0;
  std::size_t cost = 0;
  std::size_t degree = 0, row = 0, col = 0;
};

std::vector<Candidate> candidates(const NovikovComplex& c) {
  std::vector<Candidate> out;
  for (std::size_t k = 1; k < c.d.size(); ++k) {
    const NovikovMatrix& d = c.d[k];
    std::vector<std::size_t> row_nnz(d.rows(), 0), col_nnz(d.cols(), 0);
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (!d.at(i, j).is_zero()) {
          ++row_nnz[i];
          ++col_nnz[j];
        }
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) {
        const NovikovSeries& e = d.at(i, j);
        if (e.is_zero()) continue;
        auto cert = e.certify_unit();
        if (!cert) continue;
        out.push_back({cert->height, (row_nnz[i] - 1) * (col_nnz[j] - 1), k, i, j});
      }
  }
  return out;
}

}  // namespace

NovikovComplex reduce(const NovikovComplex& input, ReductionTrace& trace, const PivotStrategy& strategy,
                      const ReductionObserver& observer) {
  NovikovComplex c = input;
  std::mt19937_64 rng(strategy.seed);
  while (true) {
    auto cands = candidates(c);
    if (cands.empty()) break;
    Candidate pick;
    switch (strategy.kind) {
      case PivotStrategy::Kind::LowestHeight:
        pick = *std::min_element(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
          return std::tie(a.height, a.degree, a.row, a.col) < std::tie(b.height, b.degree, b.row, b.col);
        });
        break;
      case PivotStrategy::Kind::Sparse:
        pick = *std::min_element(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
          return std::tie(a.cost, a.height, a.degree, a.row, a.col) < std::tie(b.cost, b.height, b.degree, b.row, b.col);
        });
        break;
      case PivotStrategy::Kind::Random:
        pick = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
        break;
    }
    trace.moves.push_back(eliminate(c, pick.degree, pick.row, pick.col));
    if (!c.d_squared_vanishes()) {
      fail(ErrorCode::PrecisionExhausted, "d o d is nonzero below the precision after move " +
                                              std::to_string(trace.moves.size()) + " (precision now " +
                                              std::to_string(c.precision()) + "); rerun with a higher precision");
    }
    if (observer) observer(trace.moves.back(), c);
  }
  return c;
}

NovikovComplex replay(const NovikovComplex& input, const ReductionTrace& trace) {
  NovikovComplex c = input;
  for (const auto& m : trace.moves) eliminate(c, m.degree, m.target_index, m.source_index);
  return c;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Acyclic: return "ACYCLIC";
    case Verdict::FreeHomology: return "FREE_HOMOLOGY";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

BettiReport verdict(const NovikovComplex& residual, ReductionTrace trace, std::int64_t euler) {
  BettiReport r;
  r.betti = residual.ranks;
  r.euler = euler;
  r.precision = residual.precision();
  r.trace = std::move(trace);
  r.residual = residual;
  const bool empty = std::all_of(r.betti.begin(), r.betti.end(), [](std::size_t b) { return b == 0; });
  bool zero_d = true;
  for (std::size_t k = 1; k < residual.d.size(); ++k) zero_d = zero_d && residual.d[k].is_zero();
  r.verdict = empty ? Verdict::Acyclic : zero_d ? Verdict::FreeHomology : Verdict::Indeterminate;
  // cancellations remove one cell from adjacent degrees, so the alternating sum survives
  if (residual.euler_characteristic() != euler) {
    throw std::logic_error("residual Euler characteristic differs from the input");
  }
  if (r.verdict == Verdict::Acyclic && euler != 0) throw std::logic_error("acyclic complex with nonzero Euler characteristic");
  return r;
}

BettiReport novikov_homology(const FreeComplex& c, const Character& u, std::int64_t precision,
                             const PivotStrategy& strategy, const ReductionObserver& observer) {
  NovikovComplex nc = base_change_novikov(c, u, precision);
  ReductionTrace trace;
  NovikovComplex residual = reduce(nc, trace, strategy, observer);
  return verdict(residual, std::move(trace), c.euler_characteristic());
}

bool DualityReport::violated() const {
  return std::any_of(checks.begin(), checks.end(), [](const DualityCheck& c) { return c.status == "violated"; });
}

namespace {

void check_direction(const BettiReport& source, const BettiReport& target, const std::string& name, int n,
                     std::vector<DualityCheck>& out) {
  int l = -1;
  while (l + 1 <= n && source.vanishes_in(static_cast<std::size_t>(l + 1))) ++l;
  if (l < 0) return;
  for (int i = std::max(0, n - l); i <= n; ++i) {
    DualityCheck check{name, l, static_cast<std::size_t>(i), "untested"};
    if (target.vanishes_in(static_cast<std::size_t>(i))) {
      check.status = "holds";
    } else if (target.verdict == Verdict::FreeHomology) {
      check.status = "violated";
    }
    out.push_back(check);
  }
}

}  // namespace

DualityReport duality_check(const FreeComplex& c, const Character& u, std::int64_t precision,
                            const PivotStrategy& strategy) {
  if (!c.manifold_dim()) fail(ErrorCode::NotAManifold, "complex carries no manifold-dim tag");
  if (*c.manifold_dim() != static_cast<int>(c.top_degree())) {
    fail(ErrorCode::NotAManifold, "manifold-dim " + std::to_string(*c.manifold_dim()) +
                                      " does not match the top degree " + std::to_string(c.top_degree()));
  }
  DualityReport r;
  r.dimension = *c.manifold_dim();
  r.plus = novikov_homology(c, u, precision, strategy);
  r.minus = novikov_homology(c, u.negated(), precision, strategy);
  check_direction(r.minus, r.plus, "-u", r.dimension, r.checks);
  check_direction(r.plus, r.minus, "u", r.dimension, r.checks);
  return r;
}

}  // namespace novikit
