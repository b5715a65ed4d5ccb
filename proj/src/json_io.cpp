#include "chiral/json_io.hpp"

#include <stdexcept>

namespace chiral::json_io {

namespace {

Json complex_pair(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::complex<double> complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(const Rational& r) { return format_rational(r); }

Json to_json(const QComplex& z) { return {{"re", format_rational(z.re)}, {"im", format_rational(z.im)}}; }

Json to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format_rational(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json to_json(const Eigen::MatrixXcd& m) {
  Json j = to_json(Eigen::MatrixXd(m.real()));
  std::vector<double> imag;
  imag.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) imag.push_back(m(r, c).imag());
  j["imag"] = imag;
  return j;
}

Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e = {{"name", c.name}, {"bound", c.bound}, {"observed", c.observed}, {"margin", c.margin},
              {"passed", c.passed}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  return {{"title", r.title}, {"passed", r.passed()}, {"checks", checks}, {"warnings", r.warnings}};
}

Json to_json(const verma::VermaState& v) {
  Json j = Json::object();
  for (const auto& [p, x] : v.terms) j[verma::format_partition(p)] = format_rational(x);
  return j;
}

Json to_json(const verma::GramMatrix& g) {
  Json basis = Json::array();
  for (const auto& p : g.basis) basis.push_back(verma::format_partition(p));
  return {{"level", g.level}, {"basis", basis}, {"entries", to_json(g.entries)}};
}

Json to_json(const mobius::MobiusElement& g) { return {{"a", complex_pair(g.a())}, {"b", complex_pair(g.b())}}; }

Json to_json(const mobius::MobiusField& f) { return {{"c0", f.c0}, {"c1", f.c1}, {"c2", f.c2}}; }

Json to_json(const mobius::Interval& i) { return Json::array({i.start().theta(), i.end().theta()}); }

Json to_json(const pcwmob::PcwMobius& g) {
  Json bps = Json::array(), pieces = Json::array();
  for (const auto& b : g.breakpoints()) bps.push_back(b.theta());
  for (const auto& p : g.pieces()) pieces.push_back(to_json(p));
  return {{"breakpoints", bps}, {"pieces", pieces}};
}

Json to_json(const pcwmob::PcwField& f) {
  Json bps = Json::array(), pieces = Json::array();
  for (const auto& b : f.breakpoints()) bps.push_back(b.theta());
  for (const auto& p : f.pieces()) pieces.push_back(to_json(p));
  return {{"breakpoints", bps}, {"pieces", pieces}};
}

Json to_json(const circlefn::FourierFunction& f) {
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(complex_pair(c));
  Json j = {{"cutoff", f.cutoff()}, {"coeffs", coeffs}};
  j["decay_constant"] = f.decay_constant() ? Json(*f.decay_constant()) : Json();
  return j;
}

Json to_json(const circlefn::NormValue& n) {
  Json j = {{"partial", n.partial}, {"upper", n.upper()}};
  j["tail_bound"] = n.tail_bound ? Json(*n.tail_bound) : Json();
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw std::invalid_argument("expected a rational string");
}

mobius::MobiusElement mobius_from_json(const Json& j) {
  return mobius::MobiusElement(complex_from(field(j, "a")), complex_from(field(j, "b")));
}

mobius::Interval interval_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [start, end]");
  return mobius::Interval(mobius::CirclePoint(j[0].get<double>()), mobius::CirclePoint(j[1].get<double>()));
}

pcwmob::PcwMobius pcw_mobius_from_json(const Json& j) {
  std::vector<mobius::CirclePoint> bps;
  std::vector<mobius::MobiusElement> pieces;
  for (const auto& b : field(j, "breakpoints")) bps.emplace_back(b.get<double>());
  for (const auto& p : field(j, "pieces")) pieces.push_back(mobius_from_json(p));
  if (bps.empty() && pieces.size() == 1) return pcwmob::PcwMobius(pieces[0]);
  return pcwmob::PcwMobius(std::move(bps), std::move(pieces));
}

pcwmob::PcwField pcw_field_from_json(const Json& j) {
  std::vector<mobius::CirclePoint> bps;
  std::vector<mobius::MobiusField> pieces;
  for (const auto& b : field(j, "breakpoints")) bps.emplace_back(b.get<double>());
  for (const auto& p : field(j, "pieces"))
    pieces.push_back({field(p, "c0").get<double>(), field(p, "c1").get<double>(), field(p, "c2").get<double>()});
  if (bps.empty() && pieces.size() == 1) return pcwmob::PcwField(pieces[0]);
  return pcwmob::PcwField(std::move(bps), std::move(pieces));
}

circlefn::FourierFunction fourier_from_json(const Json& j) {
  const int cutoff = field(j, "cutoff").get<int>();
  std::vector<std::complex<double>> coeffs;
  for (const auto& c : field(j, "coeffs")) coeffs.push_back(complex_from(c));
  circlefn::FourierFunction f(cutoff, std::move(coeffs));
  if (j.contains("decay_constant") && !j["decay_constant"].is_null())
    f.set_decay_constant(j["decay_constant"].get<double>());
  return f;
}

}  // namespace chiral::json_io
