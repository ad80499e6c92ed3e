#include "miner/snapshot.hpp"

#include <algorithm>
#include <map>

namespace miner {

std::vector<const ChangedFile*> snapshot_files(const CodeRepository& repo,
                                               std::optional<Timestamp> at) {
    // Replay in stored order; (commit_time, id) ties are already resolved
    // by the build-time total order.
    std::map<std::string_view, const ChangedFile*> live;
    for (const auto& rev : repo.revisions) {
        if (at && rev.commit_time > *at) continue;
        for (const auto& f : rev.files) {
            if (f.change_kind == ChangeKind::DELETED)
                live.erase(f.path);
            else
                live[f.path] = &f;
        }
    }
    std::vector<const ChangedFile*> out;
    out.reserve(live.size());
    for (const auto& [path, file] : live) out.push_back(file);
    return out;
}

std::vector<ChangedFile> compute_snapshot(const CodeRepository& repo,
                                          std::optional<Timestamp> at) {
    std::vector<ChangedFile> out;
    for (const ChangedFile* f : snapshot_files(repo, at)) out.push_back(*f);
    return out;
}

} // namespace miner
