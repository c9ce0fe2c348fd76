#pragma once

#include <array>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "burngate/timekey.hpp"

namespace burngate::artifacts {

enum class ArtifactKind {
  runtime_buffer,
  kv_cache,
  session_embedding,
  conversation_history,
  session_log,
  metadata,
  local_file,
  remote_cache,
};

/// Deletion order executed by a burn: most-sensitive local artifacts first,
/// the remote cache last (client-then-server flow).
inline constexpr std::array<ArtifactKind, 8> kBurnOrder = {
    ArtifactKind::runtime_buffer,     ArtifactKind::kv_cache,
    ArtifactKind::session_embedding,  ArtifactKind::conversation_history,
    ArtifactKind::session_log,        ArtifactKind::metadata,
    ArtifactKind::local_file,         ArtifactKind::remote_cache,
};

const char* to_string(ArtifactKind kind);
std::optional<ArtifactKind> kind_from_string(std::string_view name);

enum class Location { local, remote };

struct ArtifactRef {
  ArtifactKind kind = ArtifactKind::runtime_buffer;
  Location location = Location::local;
  std::string handle;  // path relative to the data dir

  bool operator==(const ArtifactRef&) const = default;
};

/// Simulated persistence root: local artifacts live at
/// <data-dir>/<context_id>/<kind>, the remote key-value region at
/// <data-dir>/remote/<context_id>.<kind>. Residuals left by failed burns are
/// therefore observable by walking real files.
class ArtifactVault {
 public:
  explicit ArtifactVault(std::filesystem::path data_dir);

  ArtifactRef put(const timekey::ContextId& session, ArtifactKind kind,
                  std::string_view content);
  /// Overwrite-or-create for append-style kinds (history, logs).
  ArtifactRef append(const timekey::ContextId& session, ArtifactKind kind,
                     std::string_view content);

  bool remove(const ArtifactRef& ref);
  std::optional<std::string> read(const ArtifactRef& ref) const;
  bool exists(const ArtifactRef& ref) const;

  /// All artifacts currently on disk for this session, burn order.
  std::vector<ArtifactRef> list_for(const timekey::ContextId& session) const;

  /// Every file under the data dir, relative paths, sorted. Audit surface.
  std::vector<std::string> walk() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path path_of(const ArtifactRef& ref) const;
  static ArtifactRef ref_for(const timekey::ContextId& session,
                             ArtifactKind kind);

  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace burngate::artifacts
