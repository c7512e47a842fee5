#include "fsim/policy.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace fsim {

std::string_view to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::Bfs:
      return "bfs";
    case PolicyKind::QOracle:
      return "qoracle";
    case PolicyKind::QFirst:
      return "qfirst";
    case PolicyKind::QMin:
      return "qmin";
  }
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (PolicyKind kind : kAllPolicies) {
    if (to_string(kind) == lower) return kind;
  }
  throw ValidationError("unknown policy '" + std::string(name) + "' (expected bfs, qoracle, qfirst or qmin)");
}

double initial_priority(PolicyKind kind, const DiscoveryContext& ctx) {
  if (kind != PolicyKind::QOracle && ctx.target_quality_oracle) {
    throw std::invalid_argument("oracle quality supplied to a non-oracle policy");
  }
  switch (kind) {
    case PolicyKind::Bfs:
      return 0.0;
    case PolicyKind::QOracle:
      if (!ctx.target_quality_oracle) throw std::invalid_argument("qoracle requires the target's own quality");
      return *ctx.target_quality_oracle;
    case PolicyKind::QFirst:
    case PolicyKind::QMin:
      return ctx.ancestor_quality;
  }
  throw std::invalid_argument("unhandled policy kind");
}

std::optional<double> rediscovery_update(PolicyKind kind, double current, const DiscoveryContext& ctx) {
  if (kind == PolicyKind::QMin && ctx.ancestor_quality < current) return ctx.ancestor_quality;
  return std::nullopt;
}

}  // namespace fsim
