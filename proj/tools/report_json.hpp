#pragma once

#include <json.hpp>

#include "pdo/calculus.hpp"
#include "pdo/fredholm.hpp"
#include "pdo/oscint.hpp"
#include "pdo/smoothing.hpp"
#include "pdo/verify.hpp"

namespace pdo::cli {

using nlohmann::json;

json to_json(Complex z);
json to_json(const MultiIndex& a, int dim);
json to_json(const SymbolClassSpec& s);
json to_json(const DecayFit& f);
json to_json(const SeminormReport& r, int dim);
json to_json(const OscIntResult& r);
json to_json(const CompositionResult& r);
json to_json(const SobolevWindow& w);
json to_json(const BoundednessReport& r);
json to_json(const EllipticityReport& r);
json to_json(const CompactnessReport& r);
json to_json(const TheoremParameters& p);
json to_json(const FredholmReport& r);

}  // namespace pdo::cli
