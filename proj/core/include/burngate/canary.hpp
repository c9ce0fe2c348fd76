#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "burngate/common.hpp"

namespace burngate::canary {

/// Markers look like CNRY-<tenant>-<doc>-<rand8>; globally unique across all
/// tenants so a sighting anywhere pins the leaking document exactly.
struct CanaryDocument {
  std::string id;
  std::string text;
  std::vector<std::string> markers;
};

struct CanaryCorpus {
  std::string tenant_id;
  std::vector<CanaryDocument> documents;

  /// Reads every *.txt in the directory; each file is one document and must
  /// carry at least one marker. Throws DomainError otherwise.
  static CanaryCorpus load_dir(const std::string& tenant_id,
                               const std::filesystem::path& dir);
  static CanaryCorpus from_documents(const std::string& tenant_id,
                                     std::vector<CanaryDocument> documents);

  std::vector<std::string> all_markers() const;
  const CanaryDocument* find_document(const std::string& doc_id) const;
  CanaryCorpus restricted_to(const std::string& doc_id) const;
};

std::vector<std::string> find_markers(std::string_view text);
bool contains_marker(std::string_view text);
std::string redact_markers(std::string_view text);  // -> "[REDACTED]"

}  // namespace burngate::canary
