#include "burngate/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace burngate::artifacts {

const char* to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::runtime_buffer: return "runtime_buffer";
    case ArtifactKind::kv_cache: return "kv_cache";
    case ArtifactKind::session_embedding: return "session_embedding";
    case ArtifactKind::conversation_history: return "conversation_history";
    case ArtifactKind::session_log: return "session_log";
    case ArtifactKind::metadata: return "metadata";
    case ArtifactKind::local_file: return "local_file";
    case ArtifactKind::remote_cache: return "remote_cache";
  }
  return "?";
}

std::optional<ArtifactKind> kind_from_string(std::string_view name) {
  for (ArtifactKind kind : kBurnOrder) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

ArtifactVault::ArtifactVault(std::filesystem::path data_dir)
    : root_(std::move(data_dir)) {
  std::filesystem::create_directories(root_ / "remote");
}

ArtifactRef ArtifactVault::ref_for(const timekey::ContextId& session,
                                   ArtifactKind kind) {
  ArtifactRef ref;
  ref.kind = kind;
  if (kind == ArtifactKind::remote_cache) {
    ref.location = Location::remote;
    ref.handle = "remote/" + session.hex() + "." + to_string(kind);
  } else {
    ref.location = Location::local;
    ref.handle = session.hex() + "/" + to_string(kind);
  }
  return ref;
}

std::filesystem::path ArtifactVault::path_of(const ArtifactRef& ref) const {
  return root_ / ref.handle;
}

ArtifactRef ArtifactVault::put(const timekey::ContextId& session,
                               ArtifactKind kind, std::string_view content) {
  std::lock_guard lock(mu_);
  ArtifactRef ref = ref_for(session, kind);
  std::filesystem::create_directories(path_of(ref).parent_path());
  std::ofstream out(path_of(ref), std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  return ref;
}

ArtifactRef ArtifactVault::append(const timekey::ContextId& session,
                                  ArtifactKind kind, std::string_view content) {
  std::lock_guard lock(mu_);
  ArtifactRef ref = ref_for(session, kind);
  std::filesystem::create_directories(path_of(ref).parent_path());
  std::ofstream out(path_of(ref), std::ios::binary | std::ios::app);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  return ref;
}

bool ArtifactVault::remove(const ArtifactRef& ref) {
  std::lock_guard lock(mu_);
  std::error_code ec;
  bool removed = std::filesystem::remove(path_of(ref), ec);
  if (ec) return false;
  if (removed && ref.location == Location::local) {
    // Drop the session directory once its last artifact is gone.
    std::filesystem::path dir = path_of(ref).parent_path();
    if (std::filesystem::is_directory(dir, ec) &&
        std::filesystem::is_empty(dir, ec)) {
      std::filesystem::remove(dir, ec);
    }
  }
  return removed;
}

std::optional<std::string> ArtifactVault::read(const ArtifactRef& ref) const {
  std::lock_guard lock(mu_);
  std::ifstream in(path_of(ref), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ArtifactVault::exists(const ArtifactRef& ref) const {
  std::lock_guard lock(mu_);
  std::error_code ec;
  return std::filesystem::exists(path_of(ref), ec);
}

std::vector<ArtifactRef> ArtifactVault::list_for(
    const timekey::ContextId& session) const {
  std::vector<ArtifactRef> out;
  for (ArtifactKind kind : kBurnOrder) {
    ArtifactRef ref = ref_for(session, kind);
    if (exists(ref)) out.push_back(std::move(ref));
  }
  return out;
}

std::vector<std::string> ArtifactVault::walk() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  std::error_code ec;
  for (auto it = std::filesystem::recursive_directory_iterator(root_, ec);
       it != std::filesystem::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file()) {
      out.push_back(std::filesystem::relative(it->path(), root_).generic_string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace burngate::artifacts
