#include "burngate/extract.hpp"

#include <zlib.h>

#include <cstring>

namespace burngate::extract {

namespace {

std::optional<Bytes> inflate_bytes(ByteView data, int window_bits) {
  z_stream zs{};
  if (inflateInit2(&zs, window_bits) != Z_OK) return std::nullopt;
  Bytes out;
  out.reserve(data.size() * 4);
  std::uint8_t buf[16384];
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  int rc = Z_OK;
  do {
    zs.next_out = buf;
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      return std::nullopt;
    }
    out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
  } while (rc != Z_STREAM_END && zs.avail_in > 0);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) return std::nullopt;
  return out;
}

// ------------------------------------------------------------------- pdf --

// Appends the content of one PDF string literal, resolving escapes.
void append_pdf_literal(std::string_view lit, std::string& out) {
  for (std::size_t i = 0; i < lit.size(); ++i) {
    char c = lit[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i >= lit.size()) break;
    switch (lit[i]) {
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case '(': out.push_back('('); break;
      case ')': out.push_back(')'); break;
      case '\\': out.push_back('\\'); break;
      default:
        if (lit[i] >= '0' && lit[i] <= '7') {
          int v = 0, digits = 0;
          while (digits < 3 && i < lit.size() && lit[i] >= '0' && lit[i] <= '7') {
            v = v * 8 + (lit[i] - '0');
            ++i;
            ++digits;
          }
          --i;
          out.push_back(static_cast<char>(v));
        }
        break;
    }
  }
}

// Reads a (...) literal starting at `pos` (which points at '('); returns the
// index one past the closing ')' and appends the body to `body`.
std::size_t read_pdf_string(std::string_view s, std::size_t pos,
                            std::string& body) {
  int depth = 0;
  std::size_t start = pos + 1;
  for (std::size_t i = pos; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      if (--depth == 0) {
        append_pdf_literal(s.substr(start, i - start), body);
        return i + 1;
      }
    }
  }
  return s.size();
}

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() &&
         (s[i] == ' ' || s[i] == '\n' || s[i] == '\r' || s[i] == '\t')) {
    ++i;
  }
  return i;
}

// Emits text shown by Tj / ' / TJ, with T* as a line break. Other
// positioning operators are not tracked; the golden fixture pins this.
void scan_content_stream(std::string_view s, std::string& out) {
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '(') {
      std::string pending;
      i = read_pdf_string(s, i, pending);
      std::size_t j = skip_ws(s, i);
      if (s.substr(j, 2) == "Tj") {
        out += pending;
        i = j + 2;
      } else if (j < s.size() && s[j] == '\'') {
        out.push_back('\n');
        out += pending;
        i = j + 1;
      }
    } else if (c == '[') {
      // TJ array: string elements interleaved with kerning numbers.
      std::string pending;
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != ']') {
        if (s[j] == '(') {
          j = read_pdf_string(s, j, pending);
        } else {
          ++j;
        }
      }
      std::size_t k = skip_ws(s, j + 1);
      if (s.substr(k, 2) == "TJ") {
        out += pending;
        i = k + 2;
      } else {
        i = j + 1;
      }
    } else if (c == 'T' && i + 1 < s.size() && s[i + 1] == '*') {
      out.push_back('\n');
      i += 2;
    } else {
      ++i;
    }
  }
}
}  // namespace

const char* to_string(DocFormat format) {
  switch (format) {
    case DocFormat::pdf: return "pdf";
    case DocFormat::xls: return "xls";
    case DocFormat::txt: return "txt";
    case DocFormat::docx: return "docx";
  }
  return "?";
}

std::optional<DocFormat> format_from_string(std::string_view name) {
  if (name == "pdf") return DocFormat::pdf;
  if (name == "xls") return DocFormat::xls;
  if (name == "txt") return DocFormat::txt;
  if (name == "docx") return DocFormat::docx;
  return std::nullopt;
}

namespace {

ExtractOutcome extract_pdf(ByteView raw) {
  ExtractOutcome out;
  std::string_view s(reinterpret_cast<const char*>(raw.data()), raw.size());
  if (s.substr(0, 5) != "%PDF-") {
    out.status = ExtractOutcome::Status::parse_failure;
    return out;
  }
  std::size_t pos = 0;
  while ((pos = s.find("stream", pos)) != std::string_view::npos) {
    std::size_t body = pos + 6;
    if (body < s.size() && s[body] == '\r') ++body;
    if (body < s.size() && s[body] == '\n') ++body;
    std::size_t end = s.find("endstream", body);
    if (end == std::string_view::npos) break;
    std::size_t len = end - body;
    while (len > 0 && (s[body + len - 1] == '\n' || s[body + len - 1] == '\r')) --len;

    ByteView stream_bytes = raw.subspan(body, len);
    auto inflated = inflate_bytes(stream_bytes, /*window_bits=*/15);
    std::string content = inflated
                              ? burngate::to_string(*inflated)
                              : std::string(s.substr(body, len));
    scan_content_stream(content, out.text);
    pos = end + 9;
  }
  if (!out.text.empty() && out.text.back() != '\n') out.text.push_back('\n');
  return out;
}

// -------------------------------------------------------------------- zip --

std::optional<Bytes> zip_entry(ByteView raw, std::string_view name) {
  std::string_view s(reinterpret_cast<const char*>(raw.data()), raw.size());
  std::size_t pos = 0;
  while ((pos = s.find("PK\x03\x04", pos)) != std::string_view::npos) {
    if (pos + 30 > raw.size()) break;
    auto u16 = [&](std::size_t off) {
      return static_cast<std::uint32_t>(raw[pos + off]) |
             static_cast<std::uint32_t>(raw[pos + off + 1]) << 8;
    };
    auto u32 = [&](std::size_t off) {
      return u16(off) | u16(off + 2) << 16;
    };
    std::uint32_t method = u16(8);
    std::uint32_t comp_size = u32(18);
    std::uint32_t name_len = u16(26);
    std::uint32_t extra_len = u16(28);
    std::size_t data_off = pos + 30 + name_len + extra_len;
    if (data_off + comp_size > raw.size()) break;
    std::string_view entry_name = s.substr(pos + 30, name_len);
    if (entry_name == name) {
      ByteView data = raw.subspan(data_off, comp_size);
      if (method == 0) return Bytes(data.begin(), data.end());
      if (method == 8) return inflate_bytes(data, /*raw deflate*/ -15);
      return std::nullopt;
    }
    pos = data_off + comp_size;
  }
  return std::nullopt;
}

std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    auto take = [&](std::string_view entity, char replacement) {
      if (s.substr(i, entity.size()) == entity) {
        out.push_back(replacement);
        i += entity.size();
        return true;
      }
      return false;
    };
    if (!take("&amp;", '&') && !take("&lt;", '<') && !take("&gt;", '>') &&
        !take("&quot;", '"') && !take("&apos;", '\'')) {
      out.push_back(s[i++]);
    }
  }
  return out;
}

ExtractOutcome extract_docx(ByteView raw) {
  ExtractOutcome out;
  auto xml_bytes = zip_entry(raw, "word/document.xml");
  if (!xml_bytes) {
    out.status = ExtractOutcome::Status::parse_failure;
    return out;
  }
  std::string xml = burngate::to_string(*xml_bytes);

  // Paragraphs become lines; <w:t> runs inside one paragraph concatenate.
  std::string current;
  std::size_t i = 0;
  while (i < xml.size()) {
    if (xml.compare(i, 5, "<w:t ") == 0 || xml.compare(i, 5, "<w:t>") == 0) {
      std::size_t open_end = xml.find('>', i);
      std::size_t close = xml.find("</w:t>", open_end);
      if (open_end == std::string::npos || close == std::string::npos) break;
      current += xml_unescape(
          std::string_view(xml).substr(open_end + 1, close - open_end - 1));
      i = close + 6;
    } else if (xml.compare(i, 6, "</w:p>") == 0) {
      out.text += current;
      out.text.push_back('\n');
      current.clear();
      i += 6;
    } else {
      ++i;
    }
  }
  out.text += current;
  return out;
}
}  // namespace

ExtractOutcome extract_text(ByteView raw, DocFormat format) {
  switch (format) {
    case DocFormat::txt: {
      ExtractOutcome out;
      out.text = burngate::to_string(raw);
      return out;
    }
    case DocFormat::pdf:
      return extract_pdf(raw);
    case DocFormat::docx:
      return extract_docx(raw);
    case DocFormat::xls: {
      ExtractOutcome out;
      out.status = ExtractOutcome::Status::unsupported_format;
      return out;
    }
  }
  ExtractOutcome out;
  out.status = ExtractOutcome::Status::unsupported_format;
  return out;
}

}  // namespace burngate::extract
