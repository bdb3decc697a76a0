#pragma once

#include <string>
#include <string_view>

#include "rc/linalg.hpp"

namespace rc {

enum class ModifierBase { default_, extended, padded, padded_extended };
enum class Nonlinear { none, t1, t2, t3 };

/// Map from raw state x (N) and input u (D) to the readout feature z.
///
///   default          z = x
///   extended         z = [x; u]
///   padded           z = [c; x]
///   padded_extended  z = [c; x; u]
///
/// then the optional nonlinear transform over the whole of z.
struct StateModifier {
  ModifierBase base = ModifierBase::default_;
  Nonlinear nonlinear = Nonlinear::none;
  double padding = 1.0;

  Index feature_length(Index state_dim, Index input_dim) const;
  void validate() const;

  friend bool operator==(const StateModifier&, const StateModifier&) = default;
};

Vector apply_modifier(const StateModifier& modifier, const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& u);

/// Index rules, 1-based, each reading the untransformed z:
///   t1: z'_i = z_i²             for odd i
///   t2: z'_i = z_{i-1}·z_{i-2}  for even i ≥ 4
///   t3: z'_i = z_{i-1}·z_{i+1}  for even i, 2 ≤ i ≤ len-1
/// all other entries pass through. t2/t3 need len ≥ 3, t1 len ≥ 1.
Vector nonlinear_transform(Nonlinear variant, const Eigen::Ref<const Vector>& z);

std::string_view to_string(ModifierBase base);
std::string_view to_string(Nonlinear nonlinear);
ModifierBase parse_modifier_base(std::string_view name);
// Accepts "none", "nlat1", "nlat2", "nlat3".
Nonlinear parse_nonlinear(std::string_view name);

}  // namespace rc
