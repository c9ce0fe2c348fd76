#pragma once

#include <optional>
#include <string>

#include "burngate/common.hpp"

namespace burngate::extract {

enum class DocFormat { pdf, xls, txt, docx };
const char* to_string(DocFormat format);
std::optional<DocFormat> format_from_string(std::string_view name);

struct ExtractOutcome {
  enum class Status { ok, unsupported_format, parse_failure };
  Status status = Status::ok;
  std::string text;

  bool ok() const { return status == Status::ok; }
};

/// Plain-text extraction of the minimal representation handed to the model.
/// txt is passed through, pdf covers Tj/TJ text operators in plain or
/// Flate-compressed content streams, docx reads word/document.xml out of the
/// zip container. xls (legacy OLE binary) is not parsed here and reports
/// unsupported_format.
ExtractOutcome extract_text(ByteView raw, DocFormat format);

}  // namespace burngate::extract
