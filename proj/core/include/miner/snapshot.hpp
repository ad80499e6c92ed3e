#pragma once

#include <optional>
#include <vector>

#include "miner/schema.hpp"

namespace miner {

/// Replays the revision history up to `at` (inclusive; whole history when
/// absent) and returns the surviving files sorted ascending by path.
/// Deleted paths do not appear; every returned file has
/// change_kind != DELETED.
std::vector<ChangedFile> compute_snapshot(const CodeRepository& repo,
                                          std::optional<Timestamp> at = std::nullopt);

/// Zero-copy variant: pointers into `repo`'s own revisions. Valid while the
/// repository is alive.
std::vector<const ChangedFile*> snapshot_files(const CodeRepository& repo,
                                               std::optional<Timestamp> at = std::nullopt);

} // namespace miner
