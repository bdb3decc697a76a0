#include "rc/states.hpp"

#include <cmath>

namespace rc {

Index StateModifier::feature_length(Index state_dim, Index input_dim) const {
  switch (base) {
    case ModifierBase::default_: return state_dim;
    case ModifierBase::extended: return state_dim + input_dim;
    case ModifierBase::padded: return state_dim + 1;
    case ModifierBase::padded_extended: return state_dim + input_dim + 1;
  }
  return state_dim;
}

void StateModifier::validate() const {
  if ((base == ModifierBase::padded || base == ModifierBase::padded_extended) && !std::isfinite(padding))
    throw ArgumentError("state modifier: padding constant must be finite");
}

Vector apply_modifier(const StateModifier& modifier, const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& u) {
  const Index n = x.size(), d = u.size();
  Vector z(modifier.feature_length(n, d));
  switch (modifier.base) {
    case ModifierBase::default_:
      z = x;
      break;
    case ModifierBase::extended:
      z << x, u;
      break;
    case ModifierBase::padded:
      z << modifier.padding, x;
      break;
    case ModifierBase::padded_extended:
      z << modifier.padding, x, u;
      break;
  }
  if (modifier.nonlinear == Nonlinear::none) return z;
  return nonlinear_transform(modifier.nonlinear, z);
}

Vector nonlinear_transform(Nonlinear variant, const Eigen::Ref<const Vector>& z) {
  const Index len = z.size();
  Vector out = z;
  // Loops below use 0-based k = i - 1, so "odd i" is even k.
  switch (variant) {
    case Nonlinear::none:
      break;
    case Nonlinear::t1:
      if (len < 1) throw DimensionError("nonlinear_transform t1: empty vector");
      for (Index k = 0; k < len; k += 2) out(k) = z(k) * z(k);
      break;
    case Nonlinear::t2:
      if (len < 3) throw DimensionError("nonlinear_transform t2: vector length must be >= 3");
      for (Index k = 3; k < len; k += 2) out(k) = z(k - 1) * z(k - 2);
      break;
    case Nonlinear::t3:
      if (len < 3) throw DimensionError("nonlinear_transform t3: vector length must be >= 3");
      for (Index k = 1; k + 1 < len; k += 2) out(k) = z(k - 1) * z(k + 1);
      break;
  }
  return out;
}

std::string_view to_string(ModifierBase base) {
  switch (base) {
    case ModifierBase::default_: return "default";
    case ModifierBase::extended: return "extended";
    case ModifierBase::padded: return "padded";
    case ModifierBase::padded_extended: return "padded_extended";
  }
  return "?";
}

std::string_view to_string(Nonlinear nonlinear) {
  switch (nonlinear) {
    case Nonlinear::none: return "none";
    case Nonlinear::t1: return "nlat1";
    case Nonlinear::t2: return "nlat2";
    case Nonlinear::t3: return "nlat3";
  }
  return "?";
}

ModifierBase parse_modifier_base(std::string_view name) {
  if (name == "default") return ModifierBase::default_;
  if (name == "extended") return ModifierBase::extended;
  if (name == "padded") return ModifierBase::padded;
  if (name == "padded_extended") return ModifierBase::padded_extended;
  throw ArgumentError("unknown state modifier '" + std::string(name) + "'");
}

Nonlinear parse_nonlinear(std::string_view name) {
  if (name == "none") return Nonlinear::none;
  if (name == "nlat1") return Nonlinear::t1;
  if (name == "nlat2") return Nonlinear::t2;
  if (name == "nlat3") return Nonlinear::t3;
  throw ArgumentError("unknown nonlinear transform '" + std::string(name) + "'");
}

}  // namespace rc
