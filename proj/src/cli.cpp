#include "chiral/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "chiral/circlefn.hpp"
#include "chiral/heisenberg.hpp"
#include "chiral/mobius.hpp"
#include "chiral/pcwmob.hpp"
#include "chiral/quotient.hpp"
#include "chiral/sl2rep.hpp"
#include "chiral/smeared.hpp"
#include "chiral/verma.hpp"

namespace chiral::cli {

using json_io::Json;
using json_io::to_json;
using mobius::CirclePoint;
using mobius::Interval;
using mobius::kPi;
using mobius::MobiusElement;

namespace {

// Raised for malformed option values; maps to exit code 2.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// "1.5", "pi", "-pi/2", "0.25pi"
double parse_real(const std::string& text) {
  const auto pos = text.find("pi");
  try {
    if (pos == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw ArgumentError("not a number: '" + text + "'");
      return v;
    }
    const std::string head = text.substr(0, pos), tail = text.substr(pos + 2);
    double v = kPi;
    if (head == "-") v = -kPi;
    else if (!head.empty()) v *= parse_real(head);
    if (!tail.empty()) {
      if (tail[0] != '/') throw ArgumentError("not a number: '" + text + "'");
      v /= parse_real(tail.substr(1));
    }
    return v;
  } catch (const std::logic_error&) {
    throw ArgumentError("not a number: '" + text + "'");
  }
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_real(t));
  return out;
}

Rational parse_q(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ArgumentError(e.what());
  }
}

std::vector<CirclePoint> parse_points(const std::string& text) {
  std::vector<CirclePoint> out;
  for (double t : parse_reals(text)) out.emplace_back(t);
  return out;
}

Interval parse_interval(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() != 2) throw ArgumentError("interval needs two angles: '" + text + "'");
  return Interval(CirclePoint(v[0]), CirclePoint(v[1]));
}

int parse_int(const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw ArgumentError("not an integer: '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ArgumentError("not an integer: '" + text + "'");
  }
}

// "n:re[:im],…" with n ≥ 0; f̂_{−n} is the conjugate.
circlefn::FourierFunction parse_real_function(const std::string& text) {
  std::vector<std::pair<int, std::complex<double>>> terms;
  int top = 0;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ArgumentError("coefficient must be n:re[:im]: '" + item + "'");
    const int n = parse_int(parts[0]);
    if (n < 0) throw ArgumentError("coefficient index must be nonnegative: '" + item + "'");
    const double im = parts.size() == 3 ? parse_real(parts[2]) : 0.0;
    if (n == 0 && im != 0.0) throw ArgumentError("constant term must be real");
    terms.emplace_back(n, std::complex<double>(parse_real(parts[1]), im));
    top = std::max(top, n);
  }
  circlefn::FourierFunction f(top);
  for (const auto& [n, z] : terms) f.set_real_pair(n, z);
  return f;
}

// "n:re[:im],…" exact, any sign of n, no symmetry imposed.
smeared::ExactTrig parse_exact_trig(const std::string& text) {
  smeared::ExactTrig f;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ArgumentError("coefficient must be n:re[:im]: '" + item + "'");
    f[parse_int(parts[0])] += QComplex(parse_q(parts[1]), parts.size() == 3 ? parse_q(parts[2]) : Rational(0));
  }
  return f;
}

// Real trigonometric polynomial with small rational coefficients.
smeared::ExactTrig random_exact_trig(int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  smeared::ExactTrig f;
  f[0] = QComplex(Rational(num(rng), den(rng)));
  for (int n = 1; n <= degree; ++n) {
    const QComplex z(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    f[n] = z;
    f[-n] = z.conj();
  }
  return f;
}

Json exact_trig_json(const smeared::ExactTrig& f) {
  Json j = Json::object();
  for (const auto& [n, z] : f) j[std::to_string(n)] = to_json(z);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ArgumentError("'" + path + "' is not valid JSON: " + e.what());
  }
}

verma::VirasoroParams params_of(const std::string& c, const std::string& h) { return {parse_q(c), parse_q(h)}; }

// "rotation:α", "translation:a", "dilation:s", "interval-dilation:start:end:s",
// "ab:ar:ai:br:bi", "field:c0:c1:c2:t"
MobiusElement parse_factor(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw ArgumentError("empty factor");
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw ArgumentError("factor '" + text + "' has too few parameters");
    return parse_real(parts[i]);
  };
  const std::string& kind = parts[0];
  std::size_t want = 0;
  MobiusElement g;
  if (kind == "rotation") {
    g = mobius::one_parameter(mobius::OneParameterKind::rotation, arg(1)), want = 2;
  } else if (kind == "translation") {
    g = mobius::one_parameter(mobius::OneParameterKind::translation, arg(1)), want = 2;
  } else if (kind == "dilation") {
    g = mobius::one_parameter(mobius::OneParameterKind::dilation, arg(1)), want = 2;
  } else if (kind == "interval-dilation") {
    g = mobius::interval_dilation(Interval(CirclePoint(arg(1)), CirclePoint(arg(2))), arg(3)), want = 4;
  } else if (kind == "ab") {
    try {
      g = MobiusElement({arg(1), arg(2)}, {arg(3), arg(4)});
    } catch (const std::invalid_argument& e) {
      throw ArgumentError(e.what());
    }
    want = 5;
  } else if (kind == "field") {
    g = mobius::field_exp({arg(1), arg(2), arg(3)}, arg(4)), want = 5;
  } else {
    throw ArgumentError("unknown factor kind '" + kind + "'");
  }
  if (parts.size() != want) throw ArgumentError("factor '" + text + "' has the wrong number of parameters");
  return g;
}

MobiusElement product(const std::vector<std::string>& factors) {
  MobiusElement g;
  for (const auto& f : factors) g = g * parse_factor(f);
  return g;
}

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(); }

Json mark(Json j, bool passed) {
  j["passed"] = passed;
  return j;
}

bool reports_passed(std::initializer_list<const Report*> rs) {
  return std::all_of(rs.begin(), rs.end(), [](const Report* r) { return r->passed(); });
}

// ---- options shared by module-based commands ----

struct ModuleOptions {
  std::string kind = "verma";
  std::string c = "1/2";
  std::string h = "0";
  int cutoff = 10;
  int max_mode = 6;
  int exact_limit = 10;

  void attach(CLI::App* app) {
    app->add_option("--module", kind, "verma | heisenberg | sl2")->check(CLI::IsMember({"verma", "heisenberg", "sl2"}));
    app->add_option("--c", c, "central charge (verma)");
    app->add_option("--h", h, "lowest weight (verma, sl2)");
    app->add_option("--cutoff", cutoff, "level cutoff N")->check(CLI::Range(1, 200));
    app->add_option("--max-mode", max_mode, "highest |n| built")->check(CLI::Range(1, 200));
    app->add_option("--exact-limit", exact_limit, "exact quotient up to this cutoff");
  }
  LevelModule build() const {
    if (kind == "heisenberg") return heisenberg::fock_module(cutoff, std::min(max_mode, cutoff));
    if (kind == "sl2") return sl2::LowestWeightSL2(to_double(parse_q(h)), cutoff).as_level_module();
    return verma::quotient_module_auto(params_of(c, h), cutoff, exact_limit, max_mode);
  }
};

struct FunctionOptions {
  std::string coeffs;
  std::string pcw_field;
  int cutoff = circlefn::kDefaultCutoff;

  void attach(CLI::App* app) {
    app->add_option("--coeffs", coeffs, "real function as n:re[:im],… (n ≥ 0)");
    app->add_option("--pcw-field", pcw_field, "JSON file holding a piecewise Möbius field");
    app->add_option("--fourier-cutoff", cutoff, "coefficients kept for --pcw-field")->check(CLI::Range(1, 1 << 16));
  }
  bool given() const { return !coeffs.empty() || !pcw_field.empty(); }
  circlefn::FourierFunction build() const {
    if (!coeffs.empty() && !pcw_field.empty()) throw ArgumentError("give either --coeffs or --pcw-field");
    if (!pcw_field.empty()) {
      try {
        return circlefn::fourier_of_pcw_field(json_io::pcw_field_from_json(read_json_file(pcw_field)), cutoff);
      } catch (const Json::exception& e) {
        throw ArgumentError(e.what());
      }
    }
    if (coeffs.empty()) throw ArgumentError("a function is required (--coeffs or --pcw-field)");
    return parse_real_function(coeffs);
  }
};

// ---- command implementations ----

Json cmd_classify(const std::string& c, const std::string& h, int depth) {
  const auto cls = verma::classify_unitarity(params_of(c, h), depth);
  Json j = {{"class", verma::kind_name(cls.kind)}};
  if (cls.kind == verma::Classification::Kind::discrete) {
    j["m"] = cls.m;
    j["p"] = cls.p;
    j["q"] = cls.q;
  }
  if (cls.witness_level) j["witness_level"] = *cls.witness_level;
  return j;
}

Json cmd_gram(const std::string& c, const std::string& h, int level, bool kernel, std::optional<int> mode,
              int mode_cutoff) {
  const auto params = params_of(c, h);
  Json j = to_json(verma::gram_matrix(params, level));
  const auto k = verma::gram_kernel(params, level);
  j["det"] = to_json(k.det);
  if (kernel) {
    Json sv = Json::array();
    for (const auto& v : k.singular_vectors) sv.push_back(to_json(v));
    j["singular_vectors"] = sv;
    j["raising_maps_into_radical"] = k.raising_maps_into_radical;
    j["annihilated_exactly"] = k.annihilated_exactly;
  }
  if (mode) {
    const auto op = verma::operator_matrix(*mode, params, mode_cutoff);
    Json basis = Json::array();
    for (const auto& p : op.basis) basis.push_back(verma::format_partition(p));
    j["operator"] = {{"n", *mode}, {"cutoff", mode_cutoff}, {"basis", basis}, {"matrix", to_json(op.matrix)}};
  }
  return j;
}

Json cmd_kac_zeros(int m, int max_level, int random_count, std::uint64_t seed) {
  const Rational c = verma::minimal_charge(m);
  Json zeros = Json::array();
  bool ok = true;
  for (int p = 1; p <= m + 1; ++p)
    for (int q = 1; q <= m + 2; ++q) {
      if (p * q > max_level) continue;
      const Rational h = verma::minimal_weight(m, p, q);
      const Rational det = verma::gram_kernel({c, h}, p * q).det;
      ok = ok && det == 0;
      zeros.push_back({{"p", p}, {"q", q}, {"h", to_json(h)}, {"level", p * q}, {"det", to_json(det)}});
    }
  // random rational (c, h) with c < 1 away from the listed weights: nonzero determinant up to max_level
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 97), den(2, 101);
  Json others = Json::array();
  int found = 0;
  while (found < random_count) {
    const Rational cr = Rational(1) - Rational(num(rng), den(rng));
    const Rational hr = Rational(num(rng), den(rng));
    bool listed = false;
    for (int mm = 1; mm <= 3 && !listed; ++mm)
      if (verma::minimal_charge(mm) == cr)
        for (int p = 1; p <= mm + 1; ++p)
          for (int q = 1; q <= mm + 2; ++q) listed = listed || verma::minimal_weight(mm, p, q) == hr;
    if (listed) continue;
    ++found;
    Json dets = Json::array();
    for (int level = 1; level <= max_level; ++level) {
      const Rational det = verma::gram_kernel({cr, hr}, level).det;
      ok = ok && det != 0;
      dets.push_back(to_json(det));
    }
    others.push_back({{"c", to_json(cr)}, {"h", to_json(hr)}, {"dets", dets}});
  }
  return mark({{"m", m}, {"c", to_json(c)}, {"zeros", zeros}, {"random_nonzero", others}}, ok);
}

Json cmd_relations(const std::string& c, const std::string& h, int max_mode, int max_level) {
  const Report r = verma::virasoro_relations_check(params_of(c, h), max_mode, max_level);
  return mark(to_json(r), r.passed());
}

Json cmd_quotient(const std::string& c, const std::string& h, int cutoff, int exact_limit, int check_mode) {
  const auto params = params_of(c, h);
  Json j;
  if (cutoff <= exact_limit) {
    const auto q = verma::build_exact_quotient(params, cutoff);
    j["dims"] = q.module.dims();
    j["verma_dims"] = q.verma_dims;
    j["hermiticity_defect"] = q.hermiticity_defect;
    const double res = virasoro_residual(q.module, std::min(check_mode, q.module.max_mode()));
    j["virasoro_residual"] = res;
    return mark(j, res < 1e-9 && q.hermiticity_defect < 1e-9);
  }
  const LevelModule mod = verma::quotient_module_auto(params, cutoff, exact_limit);
  const double res = virasoro_residual(mod, std::min(check_mode, mod.max_mode()));
  j["dims"] = mod.dims();
  j["virasoro_residual"] = res;
  return mark(j, res < 1e-9);
}

Json cmd_vacuum(const std::string& c, int max_n) {
  const auto res = verma::vacuum_identity_check(parse_q(c), max_n);
  Json entries = Json::array();
  for (const auto& e : res.entries)
    entries.push_back({{"n", e.n},
                       {"lhs", to_json(e.lhs)},
                       {"rhs", to_json(e.rhs)},
                       {"equal", e.equal},
                       {"rhs_null", e.rhs_null}});
  return mark({{"entries", entries}, {"report", to_json(res.report)}}, res.report.passed());
}

Json cmd_sl2(const std::string& h, int cutoff, int samples, std::uint64_t seed, bool matrices) {
  const sl2::LowestWeightSL2 rep(to_double(parse_q(h)), cutoff);
  const Report ladder = sl2::ladder_check(rep), casimir = sl2::casimir_check(rep),
               gens = sl2::generator_check(rep), energy = sl2::energy_bounds_check(rep, samples, seed),
               analytic = sl2::analytic_vector_surrogate(rep);
  Json j = {{"lowest_weight", rep.lowest_weight()},
            {"cutoff", cutoff},
            {"ladder", to_json(ladder)},
            {"casimir", to_json(casimir)},
            {"generators", to_json(gens)},
            {"energy_bounds", to_json(energy)},
            {"analytic_surrogate", to_json(analytic)}};
  if (matrices) {
    const auto g = sl2::generators_htd(rep);
    j["matrices"] = {{"H", to_json(g.h)}, {"T", to_json(g.t)}, {"D_real", to_json(g.d_real)}, {"T_pi", to_json(g.t_pi)}};
  }
  return mark(j, reports_passed({&ladder, &casimir, &gens, &energy, &analytic}));
}

Json cmd_sugawara(int cutoff, int max_mode, std::optional<int> mode, std::optional<int> apply_j,
                  const std::string& state) {
  const Report rel = heisenberg::virasoro_check_c1(cutoff, max_mode);
  const Report herm = heisenberg::hermiticity_check(cutoff, max_mode);
  std::vector<long long> dims;
  for (int k = 0; k <= cutoff; ++k) dims.push_back(verma::partition_count(k));
  // L₀ diagonal and equal to the level
  const auto l0 = heisenberg::sugawara_matrix(0, cutoff);
  bool l0_ok = true;
  for (std::size_t i = 0; i < l0.basis.size(); ++i)
    for (std::size_t k = 0; k < l0.basis.size(); ++k)
      l0_ok = l0_ok && l0.matrix(i, k) == (i == k ? Rational(verma::level_of(l0.basis[i])) : Rational(0));
  const heisenberg::FockState omega = heisenberg::FockState::vacuum();
  const auto comm = heisenberg::apply_sugawara(2, heisenberg::apply_sugawara(-2, omega)) -
                    heisenberg::apply_sugawara(-2, heisenberg::apply_sugawara(2, omega));
  const bool central_ok = comm == Rational(1, 2) * omega;
  Json j = {{"relations", to_json(rel)},
            {"hermiticity", to_json(herm)},
            {"dims", dims},
            {"l0_is_level", l0_ok},
            {"l2_lm2_commutator_on_vacuum", to_json(comm)}};
  if (mode) {
    const auto op = heisenberg::sugawara_matrix(*mode, cutoff);
    Json basis = Json::array();
    for (const auto& p : op.basis) basis.push_back(verma::format_partition(p));
    j["operator"] = {{"n", *mode}, {"basis", basis}, {"matrix", to_json(op.matrix)}};
  }
  if (apply_j) {
    verma::Partition p;
    for (const auto& s : split(state, ',')) p.push_back(parse_int(s));
    std::sort(p.rbegin(), p.rend());
    if (std::any_of(p.begin(), p.end(), [](int x) { return x < 1; }))
      throw ArgumentError("--state parts must be positive");
    j["apply_j"] = {{"n", *apply_j},
                    {"state", verma::format_partition(p)},
                    {"result", to_json(heisenberg::apply_J(*apply_j, heisenberg::FockState::basis(p)))}};
  }
  return mark(j, rel.passed() && herm.passed() && l0_ok && central_ok);
}

Json cmd_character(int cutoff, const std::vector<double>& betas) {
  const auto ch = heisenberg::character(cutoff);
  Json rows = Json::array();
  for (double b : betas) {
    if (!(b > 0.0)) throw ArgumentError("beta must be positive");
    rows.push_back({{"beta", b},
                    {"partial_trace", ch.partial_trace(b)},
                    {"euler_partial", ch.euler_partial(b)},
                    {"tail_bound", ch.tail_bound(b)}});
  }
  return {{"dims", ch.dims}, {"traces", rows}};
}

std::vector<circlefn::FourierFunction> functions_for(const FunctionOptions& fo, int count, int degree,
                                                     std::uint64_t seed) {
  if (fo.given()) return {fo.build()};
  return smeared::random_test_functions(count, degree, seed);
}

Json cmd_smear(const ModuleOptions& mo, const FunctionOptions& fo, int degree, std::uint64_t seed, bool matrix) {
  const LevelModule mod = mo.build();
  const auto f = functions_for(fo, 1, degree, seed).front();
  const auto op = smeared::smear(f, mod);
  const int safe_dim = mod.offset(op.safe_level + 1);
  const Eigen::MatrixXcd block = op.matrix.topLeftCorner(safe_dim, safe_dim);
  const double symmetry = f.reality_defect() < 1e-15 ? (block - block.adjoint()).cwiseAbs().maxCoeff() : -1.0;
  const auto g = smeared::random_test_functions(1, std::max(degree, 1), seed + 1).front();
  const Report lin = smeared::linearity_check(f, g, 0.75, mod);
  Json j = {{"module", op.module_tag},
            {"cutoff", op.cutoff},
            {"safe_level", op.safe_level},
            {"warnings", op.warnings},
            {"function", to_json(f)},
            {"linearity", to_json(lin)}};
  if (symmetry >= 0.0) j["symmetry_defect"] = symmetry;
  if (matrix) j["matrix"] = to_json(op.matrix);
  return mark(j, lin.passed() && symmetry < 1e-10);
}

Json cmd_energy(const ModuleOptions& mo, const FunctionOptions& fo, int functions, int degree, int vectors,
                int max_mode, std::uint64_t seed) {
  const LevelModule mod = mo.build();
  const Report r = smeared::energy_bound_verify(mod, functions_for(fo, functions, degree, seed), vectors, seed, max_mode);
  return mark(to_json(r), r.passed());
}

Json cmd_commutator(const ModuleOptions& mo, int max_mode, double lo, double hi, int per_decade, int vectors,
                    std::uint64_t seed) {
  const LevelModule mod = mo.build();
  const Report r = smeared::commutator_norm_bound(mod, max_mode, smeared::log_grid(lo, hi, per_decade), vectors, seed);
  return mark(to_json(r), r.passed());
}

Json cmd_tt(const std::string& c, const std::string& h, const std::string& f_text, const std::string& g_text,
            int degree, int max_level, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const smeared::ExactTrig f = f_text.empty() ? random_exact_trig(degree, rng) : parse_exact_trig(f_text);
  const smeared::ExactTrig g = g_text.empty() ? random_exact_trig(degree, rng) : parse_exact_trig(g_text);
  const Report r = smeared::tt_commutator_check(f, g, params_of(c, h), max_level);
  return mark({{"f", exact_trig_json(f)},
               {"g", exact_trig_json(g)},
               {"pairing", to_json(smeared::central_pairing(g, f))},
               {"wronskian", exact_trig_json(smeared::wronskian(g, f))},
               {"report", to_json(r)}},
              r.passed());
}

Json cmd_t2(const std::string& c, const std::string& h, int cutoff, const smeared::T2SplitOptions& opts) {
  const Report r = smeared::t2_split(params_of(c, h), cutoff, opts);
  Json coeffs = Json::array();
  for (int n = -4; n <= 4; ++n) {
    const auto p = smeared::t2_plus_coeff(n);
    coeffs.push_back({{"n", n}, {"rational", to_json(p.rational)}, {"over_pi", to_json(p.over_pi)}});
  }
  return mark({{"plus_coefficients", coeffs}, {"report", to_json(r)}}, r.passed());
}

Json cmd_interp3(const std::string& src, const std::string& dst) {
  const auto s = parse_points(src), d = parse_points(dst);
  if (s.size() != 3 || d.size() != 3) throw ArgumentError("interp3 needs three source and three target points");
  const MobiusElement g = mobius::interp3({s[0], s[1], s[2]}, {d[0], d[1], d[2]});
  double err = 0.0;
  for (int k = 0; k < 3; ++k) err = std::max(err, mobius::circle_distance(g.apply(s[k]), d[k]));
  return mark({{"element", to_json(g)}, {"residual", err}}, err < 1e-10);
}

Json cmd_iwasawa(const std::vector<std::string>& factors) {
  const auto parts = mobius::iwasawa_decompose(product(factors));
  return {{"alpha", parts.alpha}, {"a", parts.a}, {"s", parts.s}};
}

Json cmd_apply(const std::vector<std::string>& factors, const std::string& thetas) {
  const MobiusElement g = product(factors);
  Json images = Json::array();
  for (const auto& p : parse_points(thetas)) {
    const auto r = mobius::apply_and_derivative(g, p);
    const auto x = mobius::cayley(r.point);
    images.push_back({{"theta", p.theta()},
                      {"image", r.point.theta()},
                      {"derivative", r.derivative},
                      {"cayley", optional_json(x)}});
  }
  return {{"element", to_json(g)}, {"images", images}};
}

Json c1_json(const pcwmob::C1Report& r) {
  Json bps = Json::array();
  for (const auto& b : r.breakpoints)
    bps.push_back({{"theta", b.point.theta()},
                   {"value_gap", b.value_gap},
                   {"derivative_gap", b.derivative_gap},
                   {"second_derivative_gap", b.second_derivative_gap}});
  return {{"ok", r.ok}, {"breakpoints", bps}};
}

Json cmd_kappa(const std::string& i1, const std::string& i2, double s) {
  const Interval a = parse_interval(i1), b = parse_interval(i2);
  if (!mobius::distant(a, b)) throw ArgumentError("intervals must have disjoint closures");
  const auto g = pcwmob::kappa(a, b, s);
  const auto c1 = pcwmob::c1_check(g);
  return mark({{"element", to_json(g)},
               {"field", to_json(pcwmob::kappa_field(a, b))},
               {"c1", c1_json(c1)},
               {"c2_defect", pcwmob::c2_defect(g)}},
              c1.ok);
}

Json factors_json(const std::vector<pcwmob::Factor>& factors) {
  Json out = Json::array();
  for (const auto& f : factors) {
    if (const auto* e = std::get_if<MobiusElement>(&f)) {
      out.push_back({{"mobius", to_json(*e)}});
    } else {
      const auto& k = std::get<pcwmob::KappaDescriptor>(f);
      out.push_back({{"kappa", {{"i1", to_json(k.i1)}, {"i2", to_json(k.i2)}, {"s", k.s}}}});
    }
  }
  return out;
}

Json cmd_decompose(const std::string& input, const std::string& field, std::optional<std::uint64_t> random_seed) {
  if (!field.empty()) {
    pcwmob::PcwField f;
    try {
      f = json_io::pcw_field_from_json(read_json_file(field));
    } catch (const Json::exception& e) {
      throw ArgumentError(e.what());
    }
    const auto d = pcwmob::field_span_decompose(f);
    Json terms = Json::array();
    for (const auto& t : d.terms) terms.push_back({{"i1", to_json(t.i1)}, {"i2", to_json(t.i2)}, {"lambda", t.lambda}});
    const double err = pcwmob::piecewise_distance(pcwmob::reconstruct(d), f);
    return mark({{"global", to_json(d.global)}, {"terms", terms}, {"reconstruction_error", err}}, err < 1e-9);
  }
  pcwmob::PcwMobius g;
  if (random_seed) {
    g = pcwmob::random_six_breakpoint(*random_seed);
  } else {
    if (input.empty()) throw ArgumentError("give --input, --field or --random");
    try {
      g = json_io::pcw_mobius_from_json(read_json_file(input));
    } catch (const Json::exception& e) {
      throw ArgumentError(e.what());
    }
  }
  const auto d = pcwmob::generator_decompose(g);
  const double err = pcwmob::sup_distance(pcwmob::recompose(d.factors), g, 1000);
  const double inv = pcwmob::sup_distance(g * g.inverse(), pcwmob::PcwMobius(), 1000);
  return mark({{"element", to_json(g)},
               {"factors", factors_json(d.factors)},
               {"min_separation", d.min_separation},
               {"roundtrip_error", err},
               {"inverse_error", inv},
               {"c1", c1_json(pcwmob::c1_check(g))},
               {"c2_defect", pcwmob::c2_defect(g)}},
              err < 1e-9);
}

Json cmd_interpolate(const std::string& src, const std::string& dst, const std::string& within) {
  const auto s = parse_points(src), d = parse_points(dst);
  if (s.size() != d.size() || s.empty()) throw ArgumentError("--src and --dst need the same positive number of points");
  std::optional<Interval> w;
  if (!within.empty()) w = parse_interval(within);
  const auto g = pcwmob::interpolate_points(s, d, w);
  double err = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) err = std::max(err, mobius::circle_distance(g.apply(s[k]), d[k]));
  Json j = {{"element", to_json(g)}, {"residual", err}, {"c1", c1_json(pcwmob::c1_check(g))}};
  double outside = 0.0;
  if (w) {
    const Interval comp = w->complement();
    for (int k = 0; k < 200; ++k) {
      const CirclePoint z(comp.start().theta() + comp.length() * (k + 0.5) / 200.0);
      outside = std::max(outside, mobius::circle_distance(g.apply(z), z));
    }
    j["complement_displacement"] = outside;
  }
  return mark(j, err < 1e-9 && outside < 1e-9);
}

Json cmd_approx(const FunctionOptions& fo, int steps, const std::string& bump, const std::string& support) {
  if (!bump.empty()) {
    const auto b = pcwmob::bump_field(parse_interval(bump));
    double minimum = 0.0;
    for (int k = 0; k < 4096; ++k) minimum = std::min(minimum, b(mobius::kTwoPi * k / 4096.0));
    return mark({{"bump", to_json(b)}, {"mean", b.mean()}, {"min_sample", minimum}},
                minimum >= -1e-12 && std::abs(b.mean() - 1.0) < 1e-8);
  }
  std::optional<Interval> supp;
  if (!support.empty()) supp = parse_interval(support);
  const auto f = fo.build();
  const auto seq = pcwmob::approx_field(f, steps, {}, supp);
  Json rows = Json::array();
  bool decreasing = true;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& st = seq[k];
    Json r = {{"samples", st.samples},
              {"mollifier_width", st.mollifier_width},
              {"error", to_json(st.error)},
              {"breakpoints", st.field.breakpoints().size()}};
    if (st.supported_in) r["supported_in"] = *st.supported_in;
    rows.push_back(std::move(r));
    if (k > 0) decreasing = decreasing && st.error.partial < seq[k - 1].error.partial;
  }
  return mark({{"steps", rows}, {"strictly_decreasing", decreasing}}, decreasing);
}

Json cmd_norms(const FunctionOptions& fo, const std::string& flow, double mollify) {
  const auto f = fo.build();
  Json j = {{"cutoff", f.cutoff()},
            {"norm_three_half", to_json(circlefn::norm_three_half(f))},
            {"norm_c1", circlefn::norm_c1(f)},
            {"decay_constant", optional_json(f.decay_constant())}};
  if (!flow.empty()) {
    const auto v = parse_reals(flow);
    if (v.size() != 2) throw ArgumentError("--flow needs theta,t");
    j["flow"] = {{"theta", v[0]}, {"t", v[1]}, {"image", circlefn::flow_exp(f, CirclePoint(v[0]), v[1]).theta()}};
  }
  if (mollify > 0.0) {
    const auto l = circlefn::fourier_of_pcw_field(
        pcwmob::bump_field(Interval(CirclePoint(-mollify), CirclePoint(mollify))), std::max(f.cutoff(), 64));
    const auto smooth = circlefn::convolve_smooth(f, l);
    j["mollified"] = {{"width", mollify},
                      {"norm_three_half", to_json(circlefn::norm_three_half(smooth))},
                      {"distance", to_json(circlefn::norm_three_half(smooth - f))}};
  }
  return j;
}

// ---- baseline ----

bool numbers_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

void diff_json(const Json& want, const Json& got, const std::string& path, double tol, std::vector<std::string>& out) {
  if (want.is_number_float() || got.is_number_float()) {
    if (!want.is_number() || !got.is_number() || !numbers_close(want.get<double>(), got.get<double>(), tol))
      out.push_back(path + ": expected " + want.dump() + ", got " + got.dump());
    return;
  }
  if (want.is_number() && got.is_number()) {
    if (want.get<long long>() != got.get<long long>())
      out.push_back(path + ": expected " + want.dump() + ", got " + got.dump());
    return;
  }
  if (want.type() != got.type()) {
    out.push_back(path + ": expected " + want.dump() + ", got " + got.dump());
    return;
  }
  if (want.is_object()) {
    for (const auto& [k, v] : want.items()) {
      if (!got.contains(k)) out.push_back(path + "." + k + ": missing");
      else diff_json(v, got.at(k), path + "." + k, tol, out);
    }
    for (const auto& [k, v] : got.items())
      if (!want.contains(k)) out.push_back(path + "." + k + ": unexpected");
    return;
  }
  if (want.is_array()) {
    if (want.size() != got.size()) {
      out.push_back(path + ": length " + std::to_string(want.size()) + " vs " + std::to_string(got.size()));
      return;
    }
    for (std::size_t i = 0; i < want.size(); ++i)
      diff_json(want[i], got[i], path + "[" + std::to_string(i) + "]", tol, out);
    return;
  }
  if (want != got) out.push_back(path + ": expected " + want.dump() + ", got " + got.dump());
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

// Runs the battery with at most worker_threads() commands in flight; results keep battery order.
std::vector<Outcome> run_battery(const std::vector<std::vector<std::string>>& battery) {
  std::vector<Outcome> results(battery.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, worker_threads()));
  for (std::size_t start = 0; start < battery.size(); start += workers) {
    std::vector<std::future<Outcome>> jobs;
    for (std::size_t i = start; i < std::min(battery.size(), start + workers); ++i) {
      auto args = battery[i];
      args.insert(args.end(), {"--format", "json"});
      jobs.push_back(std::async(std::launch::async, [args] { return execute(args); }));
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) results[start + k] = jobs[k].get();
  }
  return results;
}

Outcome cmd_baseline(const std::string& action, const std::string& path, double tol) {
  Outcome o;
  const auto battery = baseline_battery();
  if (action == "record") {
    const auto results = run_battery(battery);
    Json entries = Json::array();
    for (std::size_t i = 0; i < battery.size(); ++i)
      entries.push_back({{"args", battery[i]},
                         {"tolerance", tol},
                         {"exit_code", results[i].exit_code},
                         {"output", results[i].output}});
    std::ofstream file(path);
    if (!file) {
      o.exit_code = 2;
      o.error = "cannot write '" + path + "'";
      return o;
    }
    file << Json({{"version", 1}, {"entries", entries}}).dump(1) << "\n";
    o.output = {{"recorded", battery.size()}, {"path", path}};
    return o;
  }
  Json stored;
  try {
    stored = read_json_file(path);
  } catch (const ArgumentError& e) {
    o.exit_code = 2;
    o.error = e.what();
    return o;
  }
  std::vector<std::string> mismatches;
  if (!stored.contains("entries") || !stored["entries"].is_array()) {
    o.exit_code = 2;
    o.error = "'" + path + "' is not a baseline file";
    return o;
  }
  std::vector<std::vector<std::string>> recorded;
  for (const auto& e : stored["entries"]) recorded.push_back(e.at("args").get<std::vector<std::string>>());
  const auto results = run_battery(recorded);
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    const auto& e = stored["entries"][i];
    const std::string name = join(recorded[i]);
    if (e.at("exit_code").get<int>() != results[i].exit_code)
      mismatches.push_back(name + ": exit code " + std::to_string(e.at("exit_code").get<int>()) + " vs " +
                           std::to_string(results[i].exit_code));
    std::vector<std::string> diffs;
    diff_json(e.at("output"), results[i].output, "$", e.value("tolerance", tol), diffs);
    for (const auto& d : diffs) mismatches.push_back(name + ": " + d);
  }
  o.output = {{"compared", recorded.size()}, {"mismatches", mismatches}, {"passed", mismatches.empty()}};
  if (!mismatches.empty()) {
    o.exit_code = 1;
    for (const auto& m : mismatches) o.error += m + "\n";
  }
  return o;
}

// ---- table output ----

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void render_table(const Json& j, std::ostream& out, const std::string& path) {
  if (j.is_object() && j.contains("checks") && j["checks"].is_array()) {
    out << (path.empty() ? "" : path + ": ") << j.value("title", "") << (j.value("passed", false) ? "  [pass]" : "  [FAIL]")
        << "\n";
    for (const auto& c : j["checks"]) {
      out << "  " << (c.value("passed", false) ? "ok   " : "FAIL ") << std::left << std::setw(60) << c.value("name", "")
          << " observed=" << scalar_text(c["observed"]) << " bound=" << scalar_text(c["bound"]);
      if (c.contains("detail")) out << "  (" << c["detail"].get<std::string>() << ")";
      out << "\n";
    }
    for (const auto& w : j.value("warnings", Json::array())) out << "  warning: " << scalar_text(w) << "\n";
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_table(v, out, path.empty() ? k : path + "." + k);
    return;
  }
  if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_table(j[i], out, path + "[" + std::to_string(i) + "]");
    return;
  }
  out << path << " = " << (j.is_array() ? j.dump() : scalar_text(j)) << "\n";
}

}  // namespace

int worker_threads() {
  if (const char* env = std::getenv("CHIRAL_KERNEL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

const std::vector<RegistryEntry>& operation_registry() {
  static const std::vector<RegistryEntry> entries = {
      {"mobius", "compose", "mobius apply"},
      {"mobius", "apply_and_derivative", "mobius apply"},
      {"mobius", "one_parameter", "mobius apply"},
      {"mobius", "interval_dilation", "mobius apply"},
      {"mobius", "cayley", "mobius apply"},
      {"mobius", "field_exp", "mobius apply"},
      {"mobius", "interp3", "mobius interp3"},
      {"mobius", "iwasawa_decompose", "mobius iwasawa"},
      {"pcwmob", "group_ops", "pcw decompose"},
      {"pcwmob", "kappa", "pcw kappa"},
      {"pcwmob", "c1_check", "pcw kappa"},
      {"pcwmob", "c2_defect", "pcw kappa"},
      {"pcwmob", "generator_decompose", "pcw decompose"},
      {"pcwmob", "interpolate_points", "pcw interpolate"},
      {"pcwmob", "kappa_field", "pcw kappa"},
      {"pcwmob", "field_span_decompose", "pcw decompose"},
      {"pcwmob", "bump_field", "pcw approx"},
      {"pcwmob", "approx_field", "pcw approx"},
      {"circlefn", "fourier_of_pcw_field", "norms"},
      {"circlefn", "norm_three_half", "norms"},
      {"circlefn", "norm_c1", "norms"},
      {"circlefn", "convolve_smooth", "norms"},
      {"circlefn", "flow_exp", "norms"},
      {"verma", "partitions", "gram"},
      {"verma", "apply_L", "gram"},
      {"verma", "gram_matrix", "gram"},
      {"verma", "gram_kernel", "gram"},
      {"verma", "classify_unitarity", "classify"},
      {"verma", "operator_matrix", "gram"},
      {"verma", "quotient_module", "quotient"},
      {"verma", "vacuum_identity_check", "vacuum-id"},
      {"verma", "virasoro_relations_check", "relations"},
      {"verma", "minimal_weight", "kac-zeros"},
      {"sl2rep", "build", "sl2"},
      {"sl2rep", "casimir_check", "sl2"},
      {"sl2rep", "generators_HTD", "sl2"},
      {"sl2rep", "energy_bounds_check", "sl2"},
      {"heisenberg", "apply_J", "sugawara"},
      {"heisenberg", "sugawara_L", "sugawara"},
      {"heisenberg", "virasoro_check_c1", "sugawara"},
      {"heisenberg", "character", "character"},
      {"smeared", "smear", "smear"},
      {"smeared", "energy_bound_verify", "energy-bounds"},
      {"smeared", "commutator_norm_bound", "commutator-bound"},
      {"smeared", "tt_commutator_check", "tt-commutator"},
      {"smeared", "t2_split", "t2-split"},
      {"cli", "baseline", "baseline"},
  };
  return entries;
}

std::vector<std::string> subcommands() {
  return {"classify",      "gram",           "kac-zeros",        "relations",     "quotient",
          "vacuum-id",     "sl2",            "sugawara",         "character",     "smear",
          "energy-bounds", "commutator-bound", "tt-commutator",  "t2-split",      "mobius interp3",
          "mobius iwasawa", "mobius apply",  "pcw kappa",        "pcw decompose", "pcw interpolate",
          "pcw approx",    "norms",          "baseline"};
}

std::vector<std::vector<std::string>> baseline_battery() {
  return {
      {"classify", "--c", "1/2", "--h", "1/16"},
      {"classify", "--c", "7/10", "--h", "1/10"},
      {"classify", "--c", "2/5", "--h", "0"},
      {"gram", "--c", "1/2", "--h", "1/16", "--level", "2"},
      {"gram", "--c", "26/10", "--h", "3/7", "--level", "4", "--kernel"},
      {"kac-zeros", "--m", "1", "--random", "3"},
      {"relations", "--c", "1/2", "--h", "1/16", "--max-mode", "2", "--max-level", "6"},
      {"quotient", "--c", "1/2", "--h", "1/16", "--cutoff", "6"},
      {"vacuum-id", "--c", "1/2", "--max-n", "6"},
      {"sl2", "--h", "1/2", "--cutoff", "20"},
      {"sugawara", "--cutoff", "6", "--max-mode", "2"},
      {"character", "--cutoff", "20", "--beta", "0.5,1,2"},
      {"smear", "--c", "1/2", "--h", "1/16", "--cutoff", "6", "--coeffs", "0:0.5,1:-0.25"},
      {"energy-bounds", "--c", "7/10", "--h", "3/5", "--cutoff", "8", "--functions", "3", "--vectors", "20"},
      {"commutator-bound", "--c", "1", "--h", "0", "--cutoff", "8", "--max-mode", "3", "--vectors", "10"},
      {"tt-commutator", "--c", "1/2", "--h", "1/16", "--degree", "2", "--max-level", "3"},
      {"t2-split", "--c", "1/2", "--h", "0", "--cutoff", "12", "--cauchy-step", "0"},
      {"mobius", "iwasawa", "--factor", "rotation:0.3", "--factor", "translation:-1.2", "--factor", "dilation:0.7"},
      {"mobius", "interp3", "--src", "0,2,4", "--dst", "1,1.5,5"},
      {"mobius", "apply", "--factor", "interval-dilation:0.5:2:0.4", "--theta", "0,1,3"},
      {"pcw", "kappa", "--i1", "0.2,1.1", "--i2", "2.5,4", "--s", "0.7"},
      {"pcw", "decompose", "--random", "3"},
      {"pcw", "interpolate", "--src", "1.2,1.5", "--dst", "1.4,2", "--within", "1,2.5"},
      {"norms", "--coeffs", "0:1,1:0.5:0.25,3:0.125"},
  };
}

Outcome execute(const std::vector<std::string>& args) {
  Outcome o;
  CLI::App app{"Exact and truncated computations for Virasoro modules and piecewise Möbius groups", "chiral"};
  app.set_help_flag("--help", "print this help");
  app.set_config("--config", "", "key=value defaults, one per line; [subcommand] sections for subcommand options");
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string format = "json";
  app.add_option("--seed", seed, "seed for every randomized battery");
  app.add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));
  app.fallthrough();

  std::function<Json()> handler;
  std::function<Outcome()> raw_handler;

  // classify
  std::string c = "1/2", h = "0";
  int depth = 6;
  auto* classify = app.add_subcommand("classify", "unitarity class of (c, h)");
  classify->add_option("--c", c)->required();
  classify->add_option("--h", h)->required();
  classify->add_option("--depth", depth, "witness search depth")->check(CLI::Range(1, 12));
  classify->callback([&] { handler = [&] { return cmd_classify(c, h, depth); }; });

  // gram
  int level = 2, mode_cutoff = 4;
  bool kernel = false;
  std::optional<int> mode;
  auto* gram = app.add_subcommand("gram", "exact Gram matrix, determinant, singular vectors, mode matrices");
  gram->add_option("--c", c)->required();
  gram->add_option("--h", h)->required();
  gram->add_option("--level", level)->check(CLI::Range(0, 12));
  gram->add_flag("--kernel", kernel, "singular vectors and their raising images");
  gram->add_option("--mode", mode, "also print L_n on levels <= --mode-cutoff");
  gram->add_option("--mode-cutoff", mode_cutoff)->check(CLI::Range(0, 10));
  gram->callback([&] { handler = [&] { return cmd_gram(c, h, level, kernel, mode, mode_cutoff); }; });

  // kac-zeros
  int m = 1, max_level = 4, random_count = 20;
  auto* kac = app.add_subcommand("kac-zeros", "Gram determinants at the minimal-model weights and at random points");
  kac->add_option("--m", m)->check(CLI::Range(1, 20));
  kac->add_option("--max-level", max_level)->check(CLI::Range(1, 8));
  kac->add_option("--random", random_count, "random non-listed (c, h) with c < 1")->check(CLI::Range(0, 1000));
  kac->callback([&] { handler = [&] { return cmd_kac_zeros(m, max_level, random_count, seed); }; });

  // relations
  int max_mode = 4;
  auto* rel = app.add_subcommand("relations", "exact Virasoro relations on a Verma module");
  rel->add_option("--c", c)->required();
  rel->add_option("--h", h)->required();
  rel->add_option("--max-mode", max_mode)->check(CLI::Range(1, 10));
  rel->add_option("--max-level", max_level)->check(CLI::Range(0, 14));
  rel->callback([&] { handler = [&] { return cmd_relations(c, h, max_mode, max_level); }; });

  // quotient
  int cutoff = 8, exact_limit = 10;
  auto* quot = app.add_subcommand("quotient", "orthonormal irreducible truncation of a unitary module");
  quot->add_option("--c", c)->required();
  quot->add_option("--h", h)->required();
  quot->add_option("--cutoff", cutoff)->check(CLI::Range(0, 60));
  quot->add_option("--exact-limit", exact_limit)->check(CLI::Range(0, 14));
  quot->add_option("--check-mode", max_mode, "modes used for the relation residual")->check(CLI::Range(1, 10));
  quot->callback([&] { handler = [&] { return cmd_quotient(c, h, cutoff, exact_limit, max_mode); }; });

  // vacuum-id
  int max_n = 8;
  auto* vac = app.add_subcommand("vacuum-id", "[L2, L-n] on the vacuum");
  vac->add_option("--c", c)->required();
  vac->add_option("--max-n", max_n)->check(CLI::Range(2, 12));
  vac->callback([&] { handler = [&] { return cmd_vacuum(c, max_n); }; });

  // sl2
  int samples = 100;
  bool matrices = false;
  auto* sl2c = app.add_subcommand("sl2", "lowest-weight representation of the universal cover of SL(2,R)");
  sl2c->add_option("--h", h)->required();
  sl2c->add_option("--cutoff", cutoff)->check(CLI::Range(1, 2000));
  sl2c->add_option("--samples", samples)->check(CLI::Range(1, 100000));
  sl2c->add_flag("--matrices", matrices, "print H, T, D, T_pi");
  sl2c->callback([&] { handler = [&] { return cmd_sl2(h, cutoff, samples, seed, matrices); }; });

  // sugawara
  std::optional<int> apply_j;
  std::string state;
  auto* sug = app.add_subcommand("sugawara", "c = 1 Virasoro action on the Heisenberg Fock space");
  sug->add_option("--cutoff", cutoff)->check(CLI::Range(0, 14));
  sug->add_option("--max-mode", max_mode)->check(CLI::Range(1, 8));
  sug->add_option("--mode", mode, "print the matrix of L_n");
  sug->add_option("--apply-j", apply_j, "apply J_n to --state");
  sug->add_option("--state", state, "partition, e.g. 2,1,1");
  sug->callback([&] { handler = [&] { return cmd_sugawara(cutoff, max_mode, mode, apply_j, state); }; });

  // character
  std::string betas = "1";
  auto* chr = app.add_subcommand("character", "graded dimensions and partial traces of e^{-beta L0}");
  chr->add_option("--cutoff", cutoff)->check(CLI::Range(0, 4000));
  chr->add_option("--beta", betas, "comma separated");
  chr->callback([&] { handler = [&] { return cmd_character(cutoff, parse_reals(betas)); }; });

  // module-based commands
  ModuleOptions mo;
  FunctionOptions fo;
  int degree = 3, functions = 10, vectors = 500, per_decade = 2;
  double eps_lo = 1e-3, eps_hi = 1e3;
  bool print_matrix = false;

  auto* sm = app.add_subcommand("smear", "truncated T(f) on a module");
  mo.attach(sm);
  fo.attach(sm);
  sm->add_option("--degree", degree, "degree of the random f when no function is given")->check(CLI::Range(0, 50));
  sm->add_flag("--matrix", print_matrix);
  sm->callback([&] { handler = [&] { return cmd_smear(mo, fo, degree, seed, print_matrix); }; });

  auto* eb = app.add_subcommand("energy-bounds", "linear, single-mode and quadratic energy bounds on random vectors");
  mo.attach(eb);
  fo.attach(eb);
  eb->add_option("--functions", functions)->check(CLI::Range(1, 1000));
  eb->add_option("--degree", degree)->check(CLI::Range(0, 50));
  eb->add_option("--vectors", vectors)->check(CLI::Range(1, 100000));
  eb->add_option("--bound-modes", max_mode, "single-mode bound for |n| up to this")->check(CLI::Range(1, 50));
  eb->callback([&] { handler = [&] { return cmd_energy(mo, fo, functions, degree, vectors, max_mode, seed); }; });

  int comm_mode = 6;
  auto* cb = app.add_subcommand("commutator-bound", "||[L_n, exp(-eps L0)] v|| over a log grid of eps");
  mo.attach(cb);
  cb->add_option("--modes", comm_mode, "|n| up to this")->check(CLI::Range(1, 50));
  cb->add_option("--eps-lo", eps_lo)->check(CLI::PositiveNumber);
  cb->add_option("--eps-hi", eps_hi)->check(CLI::PositiveNumber);
  cb->add_option("--per-decade", per_decade)->check(CLI::Range(1, 100));
  cb->add_option("--vectors", vectors)->check(CLI::Range(1, 100000));
  cb->callback([&] {
    handler = [&] { return cmd_commutator(mo, comm_mode, eps_lo, eps_hi, per_decade, vectors, seed); };
  });

  std::string f_text, g_text;
  auto* tt = app.add_subcommand("tt-commutator", "exact [T(g), T(f)] identity with central term");
  tt->add_option("--c", c)->required();
  tt->add_option("--h", h)->required();
  tt->add_option("--f", f_text, "n:re[:im],… exact; random when omitted");
  tt->add_option("--g", g_text, "n:re[:im],… exact; random when omitted");
  tt->add_option("--degree", degree, "degree of random f, g")->check(CLI::Range(0, 6));
  tt->add_option("--max-level", max_level)->check(CLI::Range(0, 8));
  tt->callback([&] { handler = [&] { return cmd_tt(c, h, f_text, g_text, degree, max_level, seed); }; });

  smeared::T2SplitOptions t2opts;
  auto* t2 = app.add_subcommand("t2-split", "split of the 2-translation field at ±1");
  t2->add_option("--c", c)->required();
  t2->add_option("--h", h);
  t2->add_option("--cutoff", cutoff)->check(CLI::Range(8, 60));
  t2->add_option("--coeff-cutoff", t2opts.coeff_cutoff)->check(CLI::Range(1, 100000));
  t2->add_option("--cauchy-step", t2opts.cauchy_step, "0 disables the Cauchy comparison")->check(CLI::Range(0, 20));
  t2->add_option("--cauchy-threshold", t2opts.cauchy_threshold)->check(CLI::PositiveNumber);
  t2->callback([&] { handler = [&] { return cmd_t2(c, h, cutoff, t2opts); }; });

  // mobius
  std::string src, dst, thetas = "0";
  std::vector<std::string> factors;
  bool identity = false;
  auto* mob = app.add_subcommand("mobius", "Möbius group computations");
  mob->require_subcommand(1);
  auto* i3 = mob->add_subcommand("interp3", "unique Möbius map through three point pairs");
  i3->add_option("--src", src, "three angles")->required();
  i3->add_option("--dst", dst, "three angles")->required();
  i3->callback([&] { handler = [&] { return cmd_interp3(src, dst); }; });
  auto* iw = mob->add_subcommand("iwasawa", "rotation ∘ translation ∘ dilation decomposition");
  iw->add_option("--factor", factors, "element factors, composed left to right");
  iw->add_flag("--identity", identity);
  iw->callback([&] {
    handler = [&] {
      if (identity && !factors.empty()) throw ArgumentError("--identity excludes --factor");
      if (!identity && factors.empty()) throw ArgumentError("give --identity or --factor");
      return cmd_iwasawa(factors);
    };
  });
  auto* ap = mob->add_subcommand("apply", "images, derivatives and Cayley coordinates");
  ap->add_option("--factor", factors, "element factors, composed left to right")->required();
  ap->add_option("--theta", thetas, "comma separated angles");
  ap->callback([&] { handler = [&] { return cmd_apply(factors, thetas); }; });

  // pcw
  std::string i1, i2, within, input, field_file, bump, support;
  double s = 0.5;
  std::optional<std::uint64_t> random_seed;
  int steps = 4;
  auto* pcw = app.add_subcommand("pcw", "piecewise Möbius computations");
  pcw->require_subcommand(1);
  auto* kp = pcw->add_subcommand("kappa", "kappa element and its generating field");
  kp->add_option("--i1", i1, "start,end")->required();
  kp->add_option("--i2", i2, "start,end")->required();
  kp->add_option("--s", s);
  kp->callback([&] { handler = [&] { return cmd_kappa(i1, i2, s); }; });
  auto* dc = pcw->add_subcommand("decompose", "factor into Möbius and kappa elements, or split a field");
  dc->add_option("--input", input, "JSON piecewise Möbius element");
  dc->add_option("--random", random_seed, "random six-breakpoint element from this seed");
  dc->add_option("--field", field_file, "JSON piecewise field to split");
  dc->callback([&] { handler = [&] { return cmd_decompose(input, field_file, random_seed); }; });
  auto* ip = pcw->add_subcommand("interpolate", "element moving points to points");
  ip->add_option("--src", src)->required();
  ip->add_option("--dst", dst)->required();
  ip->add_option("--within", within, "start,end: identity outside");
  ip->callback([&] { handler = [&] { return cmd_interpolate(src, dst, within); }; });
  auto* ax = pcw->add_subcommand("approx", "piecewise Möbius approximation of a smooth field");
  fo.attach(ax);
  ax->add_option("--steps", steps)->check(CLI::Range(1, 10));
  ax->add_option("--bump", bump, "start,end: print the bump field only");
  ax->add_option("--support", support, "start,end: check supports");
  ax->callback([&] { handler = [&] { return cmd_approx(fo, steps, bump, support); }; });

  // norms
  std::string flow;
  double mollify = 0.0;
  auto* nm = app.add_subcommand("norms", "3/2 and C1 norms, flows, mollification");
  fo.attach(nm);
  nm->add_option("--flow", flow, "theta,t");
  nm->add_option("--mollify", mollify, "bump half-width")->check(CLI::Range(0.0, 3.0));
  nm->callback([&] { handler = [&] { return cmd_norms(fo, flow, mollify); }; });

  // baseline
  std::string action, path;
  double tol = 1e-9;
  auto* bl = app.add_subcommand("baseline", "record or compare the regression battery");
  bl->add_option("action", action, "record | compare")->required()->check(CLI::IsMember({"record", "compare"}));
  bl->add_option("path", path)->required();
  bl->add_option("--tolerance", tol, "relative float tolerance")->check(CLI::PositiveNumber);
  bl->callback([&] { raw_handler = [&] { return cmd_baseline(action, path, tol); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    o.text = app.help();
    return o;
  } catch (const CLI::CallForAllHelp&) {
    o.text = app.help("", CLI::AppFormatMode::All);
    return o;
  } catch (const CLI::ParseError& e) {
    o.exit_code = 2;
    o.error = std::string(e.what()) + "\n" + app.help();
    return o;
  }
  try {
    if (raw_handler) {
      Outcome r = raw_handler();
      r.format = format;
      return r;
    }
    if (!handler) {
      o.exit_code = 2;
      o.error = app.help();
      return o;
    }
    o.output = handler();
    if (o.output.is_object() && o.output.contains("passed") && !o.output["passed"].get<bool>()) o.exit_code = 1;
  } catch (const ArgumentError& e) {
    o.exit_code = 2;
    o.error = e.what();
  } catch (const std::domain_error& e) {
    o.exit_code = 1;
    o.error = e.what();
  } catch (const std::invalid_argument& e) {
    o.exit_code = 2;
    o.error = e.what();
  } catch (const std::exception& e) {
    o.exit_code = 1;
    o.error = e.what();
  }
  o.format = format;
  return o;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Outcome o = execute(args);
  if (o.output.is_null()) {
    if (o.exit_code == 0) out << o.text;
    if (!o.error.empty()) err << o.error << (o.error.back() == '\n' ? "" : "\n");
    return o.exit_code;
  }
  if (o.format == "table") render_table(o.output, out, "");
  else out << o.output.dump(2) << "\n";
  if (!o.error.empty()) err << o.error << (o.error.back() == '\n' ? "" : "\n");
  return o.exit_code;
}

}  // namespace chiral::cli
