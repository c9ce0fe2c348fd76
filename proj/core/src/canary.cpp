#include "burngate/canary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace burngate::canary {

namespace {
bool is_marker_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

// Matches CNRY-<alnum>-<alnum>-<alnum{8}> starting at `pos`; returns length
// or 0. Hand-rolled because this runs over every log payload and response.
std::size_t match_marker(std::string_view text, std::size_t pos) {
  static constexpr std::string_view kPrefix = "CNRY-";
  if (text.substr(pos, kPrefix.size()) != kPrefix) return 0;
  std::size_t i = pos + kPrefix.size();
  for (int section = 0; section < 2; ++section) {
    std::size_t start = i;
    while (i < text.size() && is_marker_char(text[i])) ++i;
    if (i == start || i >= text.size() || text[i] != '-') return 0;
    ++i;
  }
  std::size_t start = i;
  while (i < text.size() && is_marker_char(text[i])) ++i;
  if (i - start != 8) return 0;
  return i - pos;
}
}  // namespace

std::vector<std::string> find_markers(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t pos = 0; (pos = text.find("CNRY-", pos)) != std::string_view::npos;) {
    std::size_t len = match_marker(text, pos);
    if (len == 0) {
      ++pos;
      continue;
    }
    out.emplace_back(text.substr(pos, len));
    pos += len;
  }
  return out;
}

bool contains_marker(std::string_view text) {
  for (std::size_t pos = 0; (pos = text.find("CNRY-", pos)) != std::string_view::npos;) {
    if (match_marker(text, pos) > 0) return true;
    ++pos;
  }
  return false;
}

std::string redact_markers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t hit = text.find("CNRY-", pos);
    if (hit == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    std::size_t len = match_marker(text, hit);
    if (len == 0) {
      out.append(text.substr(pos, hit + 1 - pos));
      pos = hit + 1;
      continue;
    }
    out.append(text.substr(pos, hit - pos));
    out.append("[REDACTED]");
    pos = hit + len;
  }
  return out;
}

CanaryCorpus CanaryCorpus::load_dir(const std::string& tenant_id,
                                    const std::filesystem::path& dir) {
  std::vector<CanaryDocument> documents;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    CanaryDocument doc;
    doc.id = path.stem().string();
    doc.text = buf.str();
    doc.markers = find_markers(doc.text);
    documents.push_back(std::move(doc));
  }
  return from_documents(tenant_id, std::move(documents));
}

CanaryCorpus CanaryCorpus::from_documents(const std::string& tenant_id,
                                          std::vector<CanaryDocument> documents) {
  if (documents.empty()) {
    throw DomainError("corpus for tenant '" + tenant_id + "' is empty");
  }
  for (auto& doc : documents) {
    if (doc.markers.empty()) doc.markers = find_markers(doc.text);
    if (doc.markers.empty()) {
      throw DomainError("document '" + doc.id + "' carries no canary marker");
    }
  }
  return CanaryCorpus{tenant_id, std::move(documents)};
}

std::vector<std::string> CanaryCorpus::all_markers() const {
  std::vector<std::string> out;
  for (const auto& doc : documents) {
    out.insert(out.end(), doc.markers.begin(), doc.markers.end());
  }
  return out;
}

const CanaryDocument* CanaryCorpus::find_document(
    const std::string& doc_id) const {
  for (const auto& doc : documents) {
    if (doc.id == doc_id) return &doc;
  }
  return nullptr;
}

CanaryCorpus CanaryCorpus::restricted_to(const std::string& doc_id) const {
  const CanaryDocument* doc = find_document(doc_id);
  if (!doc) throw DomainError("no document '" + doc_id + "' in corpus");
  return CanaryCorpus{tenant_id, {*doc}};
}

}  // namespace burngate::canary
