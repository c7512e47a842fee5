#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "fsim/types.hpp"

namespace fsim {

/// Frontier prioritisation policies.
///   Bfs      constant priority; FIFO selection reduces the frontier to a queue.
///   QOracle  a page's own quality score, known before download.
///   QFirst   quality of the first page that linked to it; never revised.
///   QMin     like QFirst, lowered to the minimum ancestor quality on every
///            rediscovery.
enum class PolicyKind { Bfs, QOracle, QFirst, QMin };

inline constexpr std::array<PolicyKind, 4> kAllPolicies{PolicyKind::Bfs, PolicyKind::QOracle, PolicyKind::QFirst,
                                                        PolicyKind::QMin};

/// "bfs", "qoracle", "qfirst", "qmin".
std::string_view to_string(PolicyKind kind) noexcept;
/// Case-insensitive inverse of to_string; throws ValidationError.
PolicyKind parse_policy(std::string_view name);

/// What the crawler knows when it finds a link from `ancestor` to `target`.
struct DiscoveryContext {
  PageId ancestor;
  double ancestor_quality;
  PageId target;
  /// Only populated for QOracle.
  std::optional<double> target_quality_oracle;
};

/// Priority of a page on first discovery. Throws std::invalid_argument when
/// the oracle score is missing for QOracle or present for any other policy.
double initial_priority(PolicyKind kind, const DiscoveryContext& ctx);

/// New priority on rediscovery of a page already in the frontier at
/// `current`, or nullopt when the priority stays as is. Only QMin revises, and
/// only when the ancestor's quality is strictly lower.
std::optional<double> rediscovery_update(PolicyKind kind, double current, const DiscoveryContext& ctx);

}  // namespace fsim
