// finslerlab - the concrete metric zoo, built from declarative specs.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "finsler/change.hpp"
#include "finsler/evaluator.hpp"
#include "finsler/geometry.hpp"
#include "finsler/polynomial.hpp"

namespace finsler {

enum class MetricFamily {
  euclidean,
  riemannian,
  minkowski_pnorm,
  randers,
  funk,
  klein,
  pullback,
};

std::string family_name(MetricFamily f);
MetricFamily family_from_name(const std::string& name);

struct DomainSpec {
  enum class Kind { rn, ball };
  Kind kind = Kind::rn;
  double radius = 1.0;         // ball only
  double sample_radius = 1.0;  // sampling half-width (rn) or radius (ball)
};

struct MetricSpec {
  int dimension = 2;
  MetricFamily family = MetricFamily::euclidean;
  DomainSpec domain;

  // family-specific parameters
  double pnorm_p = 2.0;                        // minkowski_pnorm
  std::vector<std::vector<Polynomial>> g;      // riemannian, randers
  std::vector<Polynomial> b;                   // randers
  std::shared_ptr<MetricSpec> base;            // pullback
  std::optional<CoordinateChange> change;      // pullback

  static MetricSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

class Metric {
 public:
  Metric() = default;
  Metric(MetricSpec spec, std::shared_ptr<const ScalarEvaluator> eval)
      : spec_(std::move(spec)), eval_(std::move(eval)) {}

  int dimension() const { return spec_.dimension; }
  const MetricSpec& spec() const { return spec_; }
  const ScalarEvaluator& evaluator() const { return *eval_; }
  std::shared_ptr<const ScalarEvaluator> evaluator_ptr() const { return eval_; }

  double operator()(const TangentSample& s) const;
  bool in_domain(const Vec& x) const;
  bool unbounded_domain() const { return spec_.domain.kind == DomainSpec::Kind::rn; }

 private:
  MetricSpec spec_;
  std::shared_ptr<const ScalarEvaluator> eval_;
};

// Validates the spec (SPD coefficient field, Randers norm condition,
// invertible pullback Jacobian, ...) and wires up the family's closed-form
// evaluator.
Metric build_metric(const MetricSpec& spec);

// Reproducible samples: x uniform over the validity domain, y uniform on the
// Euclidean unit sphere.
std::vector<TangentSample> sample_domain(const MetricSpec& spec, int count, uint64_t seed);

// A metric whose evaluator composes another metric with a coordinate change:
// F(x, y) = F_base(phi(x), Dphi(x) y).
Metric pullback_metric(const Metric& base, const CoordinateChange& change, DomainSpec domain);

}  // namespace finsler
