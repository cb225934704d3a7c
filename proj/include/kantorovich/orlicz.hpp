#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kantorovich/scheme.hpp"

namespace kantorovich {

/// A phi-function: phi(0) = 0, positive and nondecreasing on (0, inf),
/// unbounded. Generates the modular I^phi[f] = integral of phi(|f|).
class ModularFunction {
 public:
  /// Probes the phi-function axioms and throws std::invalid_argument on failure.
  ModularFunction(std::string name, std::function<double(double)> phi, bool convex);

  double operator()(double u) const { return phi_(u); }
  const std::string& name() const { return name_; }
  bool convex() const { return convex_; }

 private:
  std::string name_;
  std::function<double(double)> phi_;
  bool convex_;
};

/// phi(u) = u^p, p >= 1. Gives I^phi[f] = ||f||_p^p.
ModularFunction power_phi(double p);
/// phi(u) = exp(u^alpha) - 1, alpha >= 1.
ModularFunction exponential_phi(double alpha);
/// "power:<p>" or "exp:<alpha>".
ModularFunction parse_phi(std::string_view spec);

/// Function samples at the centers of a regular grid over a box; the
/// midpoint-rule carrier for every integral in this module.
class SampledField {
 public:
  SampledField(Box domain, std::vector<std::size_t> shape, std::vector<double> values);

  /// Samples f at the cell centers of an n-dimensional grid over `domain`.
  static SampledField sample(const Box& domain, std::vector<std::size_t> shape,
                             const std::function<double(const std::vector<double>&)>& f);

  /// Cell-center coordinates along one axis.
  static std::vector<double> centers(const Box& domain, const std::vector<std::size_t>& shape,
                                     std::size_t axis);

  const Box& domain() const { return domain_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& values() const { return values_; }
  double cell_volume() const { return cell_volume_; }

  /// Same grid, new values.
  SampledField with_values(std::vector<double> values) const;
  SampledField scaled(double factor) const;
  bool same_grid(const SampledField& other) const;

 private:
  Box domain_;
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
  double cell_volume_ = 0.0;
};

/// Difference a - b on a shared grid.
SampledField difference(const SampledField& a, const SampledField& b);

/// cell_volume * sum phi(|value|).
double modular(const ModularFunction& phi, const SampledField& field);

/// modular(power:p)^(1/p); throws std::invalid_argument for p < 1.
double lp_norm(const SampledField& field, double p);

enum class LuxemburgForm {
  printed,   ///< inf{lambda > 0 : I[f / lambda] <= lambda}
  standard,  ///< inf{lambda > 0 : I[f / lambda] <= 1}
};

/// Luxemburg norm by bracketing from lambda = 1 (doubling/halving, at most 60
/// steps) then bisection to relative tolerance `tol`. A zero field gives 0.
/// Throws std::runtime_error if no bracket is found.
double luxemburg_norm(const ModularFunction& phi, const SampledField& field, double tol = 1e-8,
                      LuxemburgForm form = LuxemburgForm::printed);

/// max |a - b|; throws std::invalid_argument on a grid mismatch.
double sup_error(const SampledField& a, const SampledField& b);

}  // namespace kantorovich
