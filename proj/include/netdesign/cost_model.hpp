#pragma once

// Edge travel-time models.
//
// Every model exposes the travel time c(x), its derivative c'(x), the
// marginal (effective-cost derivative) c*(x) = c(x) + x c'(x) and the
// Beckmann integrand B(x) = integral of c over [0, x]. All four supported
// families are convex and nondecreasing on their domain.

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "netdesign/errors.hpp"

namespace netdesign {

/// Relative margin kept below a Greenshields capacity; flows at or beyond
/// u * (1 - kGreenshieldsMargin) are outside the model's domain.
inline constexpr double kGreenshieldsMargin = 1e-9;

struct ConstantCost {
  double c;
  bool operator==(const ConstantCost&) const = default;
};

/// a + b x
struct AffineCost {
  double a;
  double b;
  bool operator==(const AffineCost&) const = default;
};

/// l / (v_max (1 - x/u)), defined on 0 <= x < u.
struct GreenshieldsCost {
  double l;
  double v_max;
  double u;
  bool operator==(const GreenshieldsCost&) const = default;
};

/// c0 (1 + alpha (x/u)^beta)
struct BprCost {
  double c0;
  double u;
  double alpha;
  double beta;
  bool operator==(const BprCost&) const = default;
};

class CostModel;

/// The marginal-cost function c* of another model, used to pose SO as UE.
struct MarginalCost {
  std::shared_ptr<const CostModel> base;
  bool operator==(const MarginalCost& other) const;
};

class CostModel {
 public:
  using Variant = std::variant<ConstantCost, AffineCost, GreenshieldsCost, BprCost, MarginalCost>;

  CostModel() : v_(ConstantCost{1.0}) {}
  CostModel(ConstantCost m) : v_(m) { validate(); }
  CostModel(AffineCost m) : v_(m) { validate(); }
  CostModel(GreenshieldsCost m) : v_(m) { validate(); }
  CostModel(BprCost m) : v_(m) { validate(); }
  CostModel(MarginalCost m) : v_(std::move(m)) { validate(); }

  static CostModel constant(double c) { return ConstantCost{c}; }
  static CostModel affine(double a, double b) { return AffineCost{a, b}; }
  static CostModel greenshields(double l, double v_max, double u) {
    return GreenshieldsCost{l, v_max, u};
  }
  static CostModel bpr(double c0, double u, double alpha, double beta) {
    return BprCost{c0, u, alpha, beta};
  }

  const Variant& variant() const noexcept { return v_; }

  template <typename T>
  bool is() const noexcept {
    return std::holds_alternative<T>(v_);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(v_);
  }

  bool is_constant() const noexcept { return is<ConstantCost>(); }

  std::string kind() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantCost>) return "constant";
          else if constexpr (std::is_same_v<T, AffineCost>) return "affine";
          else if constexpr (std::is_same_v<T, GreenshieldsCost>) return "greenshields";
          else if constexpr (std::is_same_v<T, BprCost>) return "bpr";
          else return "marginal";
        },
        v_);
  }

  /// Largest flow accepted by evaluation (exclusive for Greenshields).
  double domain_limit() const noexcept {
    if (const auto* g = std::get_if<GreenshieldsCost>(&v_)) return g->u * (1.0 - kGreenshieldsMargin);
    if (const auto* m = std::get_if<MarginalCost>(&v_)) return m->base->domain_limit();
    return std::numeric_limits<double>::infinity();
  }

  bool in_domain(double x) const noexcept { return x >= 0.0 && x < domain_limit(); }

  double evaluate(double x) const {
    x = checked(x);
    return std::visit(
        [x](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantCost>) {
            return m.c;
          } else if constexpr (std::is_same_v<T, AffineCost>) {
            return m.a + m.b * x;
          } else if constexpr (std::is_same_v<T, GreenshieldsCost>) {
            return m.l / (m.v_max * (1.0 - x / m.u));
          } else if constexpr (std::is_same_v<T, BprCost>) {
            return m.c0 * (1.0 + m.alpha * std::pow(x / m.u, m.beta));
          } else {
            return m.base->marginal(x);
          }
        },
        v_);
  }

  double derivative(double x) const {
    x = checked(x);
    return std::visit(
        [x](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantCost>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, AffineCost>) {
            return m.b;
          } else if constexpr (std::is_same_v<T, GreenshieldsCost>) {
            const double s = 1.0 - x / m.u;
            return m.l / (m.v_max * m.u * s * s);
          } else if constexpr (std::is_same_v<T, BprCost>) {
            if (m.beta == 1.0) return m.c0 * m.alpha / m.u;
            if (x == 0.0) return 0.0;
            return m.c0 * m.alpha * m.beta * std::pow(x, m.beta - 1.0) / std::pow(m.u, m.beta);
          } else {
            // (c + x c')' = 2 c' + x c''
            return 2.0 * m.base->derivative(x) + x * m.base->second_derivative(x);
          }
        },
        v_);
  }

  double second_derivative(double x) const {
    x = checked(x);
    return std::visit(
        [x](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantCost> || std::is_same_v<T, AffineCost>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, GreenshieldsCost>) {
            const double s = 1.0 - x / m.u;
            return 2.0 * m.l / (m.v_max * m.u * m.u * s * s * s);
          } else if constexpr (std::is_same_v<T, BprCost>) {
            if (m.beta == 1.0) return 0.0;
            if (x == 0.0) {
              if (m.beta == 2.0) return 2.0 * m.c0 * m.alpha / (m.u * m.u);
              return m.beta < 2.0 ? std::numeric_limits<double>::infinity() : 0.0;
            }
            return m.c0 * m.alpha * m.beta * (m.beta - 1.0) * std::pow(x, m.beta - 2.0) /
                   std::pow(m.u, m.beta);
          } else {
            throw DomainError("second derivative of a marginal-cost model is not provided");
          }
        },
        v_);
  }

  /// c*(x) = c(x) + x c'(x)
  double marginal(double x) const {
    if (x == 0.0) return evaluate(0.0);
    return evaluate(x) + x * derivative(x);
  }

  /// Effective cost k(x) = x c(x).
  double effective(double x) const { return x == 0.0 ? 0.0 : x * evaluate(x); }

  double beckmann_integral(double x) const {
    x = checked(x);
    return std::visit(
        [x](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantCost>) {
            return m.c * x;
          } else if constexpr (std::is_same_v<T, AffineCost>) {
            return m.a * x + 0.5 * m.b * x * x;
          } else if constexpr (std::is_same_v<T, GreenshieldsCost>) {
            return -(m.l * m.u / m.v_max) * std::log1p(-x / m.u);
          } else if constexpr (std::is_same_v<T, BprCost>) {
            return m.c0 * (x + m.alpha * std::pow(x, m.beta + 1.0) /
                                   ((m.beta + 1.0) * std::pow(m.u, m.beta)));
          } else {
            return m.base->effective(x);
          }
        },
        v_);
  }

  bool operator==(const CostModel& other) const { return v_ == other.v_; }

 private:
  double checked(double x) const {
    if (std::isnan(x) || x < -1e-9) throw DomainError("flow must be non-negative");
    if (x < 0.0) x = 0.0;
    if (x >= domain_limit()) throw DomainError("flow at or beyond the Greenshields capacity");
    return x;
  }

  void validate() const {
    std::visit(
        [](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
          auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
          if constexpr (std::is_same_v<T, ConstantCost>) {
            if (!positive(m.c)) throw BadParams("constant cost must be finite and positive");
          } else if constexpr (std::is_same_v<T, AffineCost>) {
            if (!nonneg(m.a) || !nonneg(m.b)) throw BadParams("affine cost needs a >= 0 and b >= 0");
          } else if constexpr (std::is_same_v<T, GreenshieldsCost>) {
            if (!positive(m.l) || !positive(m.v_max) || !positive(m.u))
              throw BadParams("greenshields cost needs l, v_max, u > 0");
          } else if constexpr (std::is_same_v<T, BprCost>) {
            if (!positive(m.c0) || !positive(m.u) || !nonneg(m.alpha))
              throw BadParams("bpr cost needs c0, u > 0 and alpha >= 0");
            if (!std::isfinite(m.beta) || m.beta < 1.0) throw BadParams("bpr cost needs beta >= 1");
          } else {
            if (!m.base) throw BadParams("marginal cost needs a base model");
          }
        },
        v_);
  }

  Variant v_;
};

inline bool MarginalCost::operator==(const MarginalCost& other) const {
  if (base == other.base) return true;
  if (!base || !other.base) return false;
  return *base == *other.base;
}

/// The marginal-cost model c* of `model`. Families closed under the marginal
/// transform map onto themselves; Greenshields is wrapped.
inline CostModel marginal_model(const CostModel& model) {
  return std::visit(
      [&model](const auto& m) -> CostModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantCost>) {
          return m;
        } else if constexpr (std::is_same_v<T, AffineCost>) {
          return AffineCost{m.a, 2.0 * m.b};
        } else if constexpr (std::is_same_v<T, BprCost>) {
          return BprCost{m.c0, m.u, m.alpha * (1.0 + m.beta), m.beta};
        } else {
          return MarginalCost{std::make_shared<const CostModel>(model)};
        }
      },
      model.variant());
}

}  // namespace netdesign
