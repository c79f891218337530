// Command-line front end. Every subcommand prints one JSON document (or a
// short text rendering with --format text) and exits 0, 2 on a failed
// precondition, 3 when the precision runs out, 64 on usage errors.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "novikit/advisor.hpp"
#include "novikit/report.hpp"

using namespace novikit;
using report::Json;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitUsage = 64;

struct Options {
  std::int64_t prec = kDefaultPrecision;
  std::vector<std::uint64_t> primes;
  std::string format = "json";
  std::string strategy = "lowest";
  bool timing = false;

  std::string pres, complex, resolution, witness, chr, phi, nu;
  std::vector<std::string> words;
  std::string relator;
  int sphere = 2;
  bool cw = false, manifold = false;
  int dim = 0;
  bool torsion = false, kernel_finite = false, whitehead = false;
  std::optional<std::int64_t> euler;
  bool koszul_homotopy = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dir_of(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

PresentationPtr load_pres(const std::string& path) { return PcPresentation::parse(read_file(path)); }
FreeComplex load_complex(const std::string& path) { return FreeComplex::parse(read_file(path), dir_of(path)); }

Character character_for(const PresentationPtr& p, const std::string& spec) {
  if (!spec.empty()) return Character::parse(p, spec);
  if (p->default_character()) return Character::parse(p, *p->default_character());
  fail(ErrorCode::PreconditionFailed, "no character given and the presentation declares none");
}

std::vector<std::uint64_t> primes_or_default(const Options& o) {
  return o.primes.empty() ? std::vector<std::uint64_t>{2, 3, 5} : o.primes;
}

std::vector<std::vector<Integer>> parse_integer_matrix(const std::string& text) {
  // [[2,1],[1,1]]
  std::vector<std::vector<Integer>> m;
  std::vector<Integer> row;
  std::string num;
  int depth = 0;
  auto flush = [&] {
    if (!num.empty()) {
      try {
        row.emplace_back(num);
      } catch (const std::exception&) {
        fail(ErrorCode::Syntax, "bad integer '" + num + "' in matrix");
      }
      num.clear();
    }
  };
  for (char ch : text) {
    if (ch == '[') {
      ++depth;
    } else if (ch == ']') {
      flush();
      if (depth == 2) {
        m.push_back(row);
        row.clear();
      }
      --depth;
    } else if (ch == ',') {
      flush();
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
      num += ch;
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      fail(ErrorCode::Syntax, std::string("unexpected '") + ch + "' in matrix");
    }
  }
  if (depth != 0 || m.empty()) fail(ErrorCode::Syntax, "expected a matrix like [[2,1],[1,1]]");
  for (const auto& r : m) {
    if (r.size() != m.size()) fail(ErrorCode::ShapeMismatch, "monodromy must be a square matrix");
  }
  return m;
}

std::string betti_text(const std::vector<std::size_t>& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s + ")";
}

// Each command fills `out` (the report) and optionally a text rendering.
struct Result {
  Json inputs = Json::object();
  Json body = Json::object();
  Json cites = Json::array();
  bool has_precision = false;
  std::string text;
};

Result run(const std::string& cmd, const Options& o) {
  Result r;
  if (cmd == "collect") {
    auto p = load_pres(o.pres);
    r.inputs = {{"pres", o.pres}, {"words", o.words}};
    NormalForm x = p->identity();
    for (const auto& w : o.words) x = p->multiply(x, p->collect(w));
    std::vector<std::string> exps;
    for (const auto& e : x.exponents) exps.push_back(e.get_str());
    r.body = {{"normal_form", p->format(x)}, {"exponents", exps}};
    r.text = p->format(x);
  } else if (cmd == "consistency") {
    auto p = load_pres(o.pres);
    r.inputs = {{"pres", o.pres}};
    auto rep = p->check_consistency();
    r.body = report::to_json(rep, *p);
    r.text = rep.consistent() ? "consistent" : "inconsistent: " + rep.first_failure()->identity;
    if (!rep.consistent()) fail(ErrorCode::InconsistentPresentation, "failed check " + rep.first_failure()->identity);
  } else if (cmd == "hirsch") {
    auto p = load_pres(o.pres);
    r.inputs = {{"pres", o.pres}};
    r.body = {{"hirsch", p->hirsch_number()},
              {"poly_z", p->is_poly_z()},
              {"torsion", std::string(to_string(p->torsion_status()))}};
    r.text = std::to_string(p->hirsch_number());
  } else if (cmd == "char") {
    auto p = load_pres(o.pres);
    r.inputs = {{"pres", o.pres}, {"char", o.chr}};
    auto u = character_for(p, o.chr);
    Json values = Json::object();
    const auto decl = u.declared_values();
    for (std::size_t i = 0; i < decl.size(); ++i) values[p->name(p->declaration_order()[i])] = decl[i];
    r.body = {{"character", u.format()}, {"values", values}, {"zero", u.is_zero()}};
    r.text = u.format();
  } else if (cmd == "fox") {
    auto p = load_pres(o.pres);
    r.inputs = {{"pres", o.pres}, {"relator", o.relator}};
    Word w = p->parse_word(o.relator);
    Json d = Json::object();
    for (std::size_t pos : p->declaration_order()) {
      auto x = fox_derivative(p, w, pos);
      d[p->name(pos)] = x.format();
      r.text += "d/d" + p->name(pos) + " = " + x.format() + "\n";
    }
    r.body = {{"relator_value", p->format(p->collect(w))}, {"derivatives", d}};
  } else if (cmd == "complex-check") {
    r.inputs = {{"complex", o.complex}};
    auto c = load_complex(o.complex);
    r.body = {{"ranks", c.ranks()}, {"d_squared_zero", true}, {"euler", c.euler_characteristic()}};
    if (c.manifold_dim()) r.body["manifold_dim"] = *c.manifold_dim();
    r.text = "ok ranks " + betti_text(c.ranks()) + " euler " + std::to_string(c.euler_characteristic());
  } else if (cmd == "homology") {
    auto c = load_complex(o.complex);
    auto u = character_for(c.presentation(), o.chr);
    r.inputs = {{"complex", o.complex}, {"char", u.format()}, {"strategy", o.strategy}};
    auto rep = novikov_homology(c, u, o.prec, PivotStrategy::parse(o.strategy));
    r.body = report::to_json(rep);
    r.has_precision = true;
    r.text = to_string(rep.verdict) + (rep.verdict == Verdict::FreeHomology ? " " + betti_text(rep.betti) : "");
  } else if (cmd == "fingerprint") {
    auto c = load_complex(o.complex);
    auto u = character_for(c.presentation(), o.chr);
    auto primes = primes_or_default(o);
    r.inputs = {{"complex", o.complex}, {"char", u.format()}, {"primes", primes}};
    Json fp = Json::object();
    for (auto p : primes) {
      auto b = fingerprint(c, u, p);
      fp[std::to_string(p)] = b;
      r.text += "p=" + std::to_string(p) + " " + betti_text(b) + "\n";
    }
    r.body = {{"fingerprints", fp}, {"euler", c.euler_characteristic()}};
  } else if (cmd == "duality") {
    auto c = load_complex(o.complex);
    auto u = character_for(c.presentation(), o.chr);
    r.inputs = {{"complex", o.complex}, {"char", u.format()}};
    auto rep = duality_check(c, u, o.prec, PivotStrategy::parse(o.strategy));
    r.body = report::to_json(rep);
    r.has_precision = true;
    r.text = rep.violated() ? "violated" : "holds";
  } else if (cmd == "product") {
    auto c = load_complex(o.complex);
    r.inputs = {{"complex", o.complex}, {"sphere", o.sphere}};
    auto out = product_with_sphere(c, o.sphere);
    r.body = {{"ranks", out.ranks()}, {"euler", out.euler_characteristic()}, {"complex", out.serialize()}};
    r.text = out.serialize();
  } else if (cmd == "mapping-torus") {
    r.inputs = {{"phi", o.phi}};
    auto out = mapping_torus(parse_integer_matrix(o.phi));
    r.body = {{"ranks", out.ranks()}, {"euler", out.euler_characteristic()}, {"complex", out.serialize()}};
    r.text = out.serialize();
  } else if (cmd == "sigma-verify") {
    auto res = Resolution::parse(read_file(o.resolution), dir_of(o.resolution));
    auto p = res.complex().presentation();
    auto u = character_for(p, o.chr);
    auto w = Witness::parse(res, read_file(o.witness));
    r.inputs = {{"resolution", o.resolution}, {"witness", o.witness}, {"char", u.format()}};
    auto wr = verify_sigma_witness(res, w.phi, u);
    r.body = {{"witness", report::to_json(wr)}};
    std::vector<std::int64_t> nu(res.complex().num_degrees(), 0);
    if (!o.nu.empty()) {
      nu.clear();
      std::stringstream ss(o.nu);
      std::string item;
      while (std::getline(ss, item, ',')) nu.push_back(std::stoll(item));
    }
    r.body["valuation"] = report::to_json(check_valuation_condition(res, {u, nu}));
    r.text = wr.accepted ? "accepted" : "rejected";
    for (const auto& why : wr.reasons) r.text += "\n  " + why;
  } else if (cmd == "finish") {
    auto res = Resolution::parse(read_file(o.resolution), dir_of(o.resolution));
    auto p = res.complex().presentation();
    auto u = character_for(p, o.chr);
    auto w = Witness::parse(res, read_file(o.witness));
    auto s = o.koszul_homotopy ? koszul_homotopy(res, w.phi) : w.s;
    Representation rho(p, w.rho);
    r.inputs = {{"resolution", o.resolution}, {"witness", o.witness}, {"char", u.format()},
                {"koszul_homotopy", o.koszul_homotopy}, {"rep_dimension", rho.dimension()}};
    auto cert = finish_executor(res, w.phi, s, rho, u, o.prec);
    r.body = report::to_json(cert);
    r.has_precision = true;
    r.text = cert.certified ? "certified below height " + std::to_string(cert.precision) : "not certified";
  } else if (cmd == "advise") {
    if (o.cw == o.manifold) fail(ErrorCode::InvalidArgument, "choose exactly one of --cw and --manifold");
    AdvisorInput in;
    in.kind = o.cw ? SpaceKind::Cw : SpaceKind::Manifold;
    in.dimension = o.dim;
    in.pres = load_pres(o.pres);
    in.torsion = o.torsion;
    in.euler = o.euler;
    in.kernel_finite = o.kernel_finite;
    in.whitehead_trivial = o.whitehead;
    r.inputs = {{"kind", o.cw ? "cw" : "manifold"}, {"dim", o.dim}, {"pres", o.pres},
                {"declared", {{"torsion", o.torsion}, {"kernel_finite", o.kernel_finite},
                              {"whitehead_trivial", o.whitehead}}}};
    if (o.euler) r.inputs["euler"] = *o.euler;
    auto v = advise(in);
    r.body = report::to_json(v);
    r.cites = report::citations(v.citations);
    r.text = to_string(v.verdict);
  } else if (cmd == "obstruction") {
    auto c = load_complex(o.complex);
    auto u = character_for(c.presentation(), o.chr);
    auto primes = primes_or_default(o);
    r.inputs = {{"complex", o.complex}, {"char", u.format()}, {"primes", primes},
                {"declared", {{"whitehead_trivial", o.whitehead}, {"kernel_finitely_presented", o.kernel_finite}}}};
    auto rep = obstruction_report(c, u, o.prec, {o.whitehead, o.kernel_finite}, primes, PivotStrategy::parse(o.strategy));
    r.body = report::to_json(rep);
    r.cites = report::citations(rep.citations);
    r.has_precision = true;
    r.text = rep.conclusion;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown command " + cmd);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"novikit: polycyclic groups, Novikov homology and fibering obstructions"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--prec", o.prec, "precision (u-height bound)")->check(CLI::Range(1, 1 << 20));
    sub->add_option("--prime", o.primes, "prime for the fingerprint oracle (repeatable)");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--strategy", o.strategy, "pivot strategy: lowest, sparse, random:SEED");
    sub->add_flag("--timing", o.timing, "add timing_ms to the report");
  };
  auto pres_opt = [&](CLI::App* sub) { sub->add_option("--pres", o.pres, "presentation file")->required(); };
  auto complex_opt = [&](CLI::App* sub) { sub->add_option("--complex", o.complex, "complex file")->required(); };
  auto char_opt = [&](CLI::App* sub) { sub->add_option("--char", o.chr, "character, e.g. \"a=0,b=1\""); };

  auto* collect = app.add_subcommand("collect", "normal form of a word (several words are multiplied)");
  pres_opt(collect);
  collect->add_option("--word", o.words, "word")->required();
  auto* consistency = app.add_subcommand("consistency", "run the consistency checks");
  pres_opt(consistency);
  auto* hirsch = app.add_subcommand("hirsch", "Hirsch number");
  pres_opt(hirsch);
  auto* chr = app.add_subcommand("char", "validate a character");
  pres_opt(chr);
  char_opt(chr);
  auto* fox = app.add_subcommand("fox", "Fox derivatives of a relator");
  pres_opt(fox);
  fox->add_option("--relator", o.relator, "word")->required();
  auto* check = app.add_subcommand("complex-check", "parse a complex and verify d o d = 0");
  complex_opt(check);
  auto* homology = app.add_subcommand("homology", "Novikov homology verdict");
  complex_opt(homology);
  char_opt(homology);
  auto* fp = app.add_subcommand("fingerprint", "betti numbers over F_p(t)");
  complex_opt(fp);
  char_opt(fp);
  auto* duality = app.add_subcommand("duality", "duality harness for manifold complexes");
  complex_opt(duality);
  char_opt(duality);
  auto* product = app.add_subcommand("product", "product with a sphere");
  complex_opt(product);
  product->add_option("--sphere", o.sphere, "sphere dimension (>= 2)");
  auto* torus = app.add_subcommand("mapping-torus", "mapping torus of a torus automorphism");
  torus->add_option("--phi", o.phi, "integer matrix, columns are images of generators")->required();
  auto* sigma = app.add_subcommand("sigma-verify", "check a chain self-map witness");
  sigma->add_option("--resolution", o.resolution, "resolution file")->required();
  sigma->add_option("--witness", o.witness, "witness file")->required();
  sigma->add_option("--nu", o.nu, "valuation shifts per degree, comma separated");
  char_opt(sigma);
  auto* finish = app.add_subcommand("finish", "certify truncated acyclicity from a witness");
  finish->add_option("--resolution", o.resolution, "resolution file")->required();
  finish->add_option("--witness", o.witness, "witness file")->required();
  finish->add_flag("--koszul-homotopy", o.koszul_homotopy, "build s from the Koszul contraction");
  char_opt(finish);
  auto* adv = app.add_subcommand("advise", "finite generation of higher homotopy");
  pres_opt(adv);
  adv->add_flag("--cw", o.cw, "finite CW complex");
  adv->add_flag("--manifold", o.manifold, "closed manifold");
  adv->add_option("--dim", o.dim, "dimension")->required();
  adv->add_flag("--torsion", o.torsion, "declare torsion in the fundamental group");
  adv->add_option("--euler", o.euler, "Euler characteristic");
  adv->add_flag("--kernel-finite", o.kernel_finite, "declare the kernel finiteness hypotheses");
  adv->add_flag("--whitehead-trivial", o.whitehead, "declare vanishing Whitehead group");
  auto* obs = app.add_subcommand("obstruction", "fibering obstruction report");
  complex_opt(obs);
  char_opt(obs);
  obs->add_flag("--whitehead-trivial", o.whitehead, "declare vanishing Whitehead torsion");
  obs->add_flag("--kernel-fp", o.kernel_finite, "declare a finitely presented kernel");
  for (auto* sub : app.get_subcommands({})) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  Json out{{"command", cmd}};
  int code = 0;
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = run(cmd, o);
    out["inputs_echo"] = r.inputs;
    out["report"] = r.body;
    out["citations"] = r.cites;
    if (r.has_precision) out["precision"] = o.prec;
  } catch (const Error& e) {
    code = e.code() == ErrorCode::PrecisionExhausted ? kExitPrecision
           : e.code() == ErrorCode::InvalidArgument && cmd == "advise" ? kExitUsage
                                                                        : kExitPrecondition;
    out["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    std::cerr << "novikit " << cmd << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = 1;
    out["error"] = {{"code", "INTERNAL"}, {"message", e.what()}};
    std::cerr << "novikit " << cmd << ": internal error: " << e.what() << "\n";
  }
  if (o.timing) {
    out["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  if (o.format == "text" && code == 0) {
    std::cout << r.text << (r.text.empty() || r.text.back() != '\n' ? "\n" : "");
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return code;
}
