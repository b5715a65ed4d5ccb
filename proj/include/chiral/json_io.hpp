#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include "chiral/circlefn.hpp"
#include "chiral/mobius.hpp"
#include "chiral/pcwmob.hpp"
#include "chiral/rational.hpp"
#include "chiral/report.hpp"
#include "chiral/verma.hpp"

namespace chiral::json_io {

using Json = nlohmann::json;

Json to_json(const Rational& r);  // "p/q"
Json to_json(const QComplex& z);  // {"re": "p/q", "im": "p/q"}
Json to_json(const RationalMatrix& m);
// Dense row-major {"rows", "cols", "data"}; complex matrices add "imag".
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Eigen::MatrixXcd& m);
Json to_json(const Report& r);
Json to_json(const verma::VermaState& v);  // {"L-3 L-1": "p/q", ...}
Json to_json(const verma::GramMatrix& g);
Json to_json(const mobius::MobiusElement& g);
Json to_json(const mobius::MobiusField& f);
Json to_json(const mobius::Interval& i);
Json to_json(const pcwmob::PcwMobius& g);
Json to_json(const pcwmob::PcwField& f);
Json to_json(const circlefn::FourierFunction& f);
Json to_json(const circlefn::NormValue& n);

// Inverses of the matching to_json; throw std::invalid_argument on malformed input.
Rational rational_from_json(const Json& j);
mobius::MobiusElement mobius_from_json(const Json& j);
mobius::Interval interval_from_json(const Json& j);
pcwmob::PcwMobius pcw_mobius_from_json(const Json& j);
pcwmob::PcwField pcw_field_from_json(const Json& j);
circlefn::FourierFunction fourier_from_json(const Json& j);

}  // namespace chiral::json_io
