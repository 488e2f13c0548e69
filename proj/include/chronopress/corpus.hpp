#pragma once

#include <expat.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "chronopress/date.hpp"
#include "chronopress/error.hpp"
#include "chronopress/text.hpp"

namespace chronopress {

inline constexpr double default_font_size = 10.0;

// One OCR word, as carried by an ALTO <String>.
struct WordToken {
    std::string text;
    long hpos = 0;
    long vpos = 0;
    long width = 0;
    long height = 0;
    double font_size = default_font_size;

    bool operator==(const WordToken&) const = default;
};

struct BoundingBox {
    long hpos = 0;
    long vpos = 0;
    long width = 0;
    long height = 0;

    bool operator==(const BoundingBox&) const = default;
};

struct TextBlock {
    std::string block_id;
    std::vector<WordToken> tokens;  // source order
    BoundingBox bbox;

    bool operator==(const TextBlock&) const = default;
};

struct PageId {
    std::string title;
    Date date;
    int page_number = 1;

    auto operator<=>(const PageId&) const = default;
    bool operator==(const PageId&) const = default;
};

struct Page {
    PageId id;
    std::vector<TextBlock> blocks;  // source order

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.tokens.size();
        return n;
    }

    const TextBlock* find_block(std::string_view block_id) const {
        for (const auto& b : blocks)
            if (b.block_id == block_id) return &b;
        return nullptr;
    }
};

enum class PageFormat { alto, text };

inline std::string_view to_string(PageFormat f) { return f == PageFormat::alto ? "alto" : "text"; }

struct ManifestEntry {
    std::filesystem::path path;
    PageId id;
    PageFormat format = PageFormat::alto;

    bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
};

// ---------------------------------------------------------------------------
// ALTO subset

namespace detail {

inline std::string_view local_name(std::string_view qname) {
    const auto colon = qname.rfind(':');
    return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

inline std::optional<double> parse_number(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

class AltoReader {
public:
    explicit AltoReader(PageId id) { page_.id = std::move(id); }

    Page parse(std::string_view bytes) {
        XML_Parser parser = XML_ParserCreate(nullptr);
        if (!parser) throw Error("cannot allocate XML parser");
        struct Guard {
            XML_Parser p;
            ~Guard() { XML_ParserFree(p); }
        } guard{parser};
        parser_ = parser;

        XML_SetUserData(parser, this);
        XML_SetElementHandler(parser, &AltoReader::on_start, &AltoReader::on_end);

        // Expat takes an int length; feed large documents in chunks.
        constexpr std::size_t chunk = 1 << 24;
        std::size_t done = 0;
        do {
            const std::size_t n = std::min(chunk, bytes.size() - done);
            const bool final = done + n == bytes.size();
            if (XML_Parse(parser, bytes.data() + done, static_cast<int>(n), final) != XML_STATUS_OK) {
                if (structural_) throw StructuralError(*structural_);
                const auto offset = XML_GetCurrentByteIndex(parser);
                std::ostringstream msg;
                msg << "malformed XML: " << XML_ErrorString(XML_GetErrorCode(parser)) << " at line "
                    << XML_GetCurrentLineNumber(parser) << ", column "
                    << XML_GetCurrentColumnNumber(parser);
                throw ParseError(msg.str(), offset < 0 ? 0 : static_cast<std::size_t>(offset));
            }
            done += n;
        } while (done < bytes.size());

        if (!saw_root_) throw StructuralError("document has no <alto> root element");
        resolve_fonts();
        return std::move(page_);
    }

private:
    struct Frame {
        std::string name;
        int ordinal = 1;
        std::map<std::string, int, std::less<>> child_counts;
        std::optional<std::string> stylerefs;
    };

    static void on_start(void* self, const XML_Char* name, const XML_Char** atts) {
        static_cast<AltoReader*>(self)->start(name, atts);
    }
    static void on_end(void* self, const XML_Char* /*name*/) { static_cast<AltoReader*>(self)->end(); }

    static const char* attr(const XML_Char** atts, std::string_view key) {
        for (int i = 0; atts[i]; i += 2)
            if (local_name(atts[i]) == key) return atts[i + 1];
        return nullptr;
    }

    std::string element_path() const {
        std::string p;
        for (const auto& f : stack_) {
            if (!p.empty()) p += '/';
            p += f.name;
            if (f.ordinal > 1 || f.name == "TextBlock" || f.name == "TextLine" || f.name == "String")
                p += '[' + std::to_string(f.ordinal) + ']';
        }
        return p;
    }

    void fail(std::string message) {
        if (!structural_) structural_ = element_path() + ": " + message;
        XML_StopParser(parser_, XML_FALSE);
    }

    long geometry(const XML_Char** atts, std::string_view key) {
        const char* v = attr(atts, key);
        if (!v) return 0;
        const auto num = parse_number(v);
        if (!num || *num < 0) {
            fail("attribute " + std::string(key) + " must be a non-negative number, got '" + v + "'");
            return 0;
        }
        return std::lround(*num);
    }

    void start(const XML_Char* qname, const XML_Char** atts) {
        if (structural_) return;
        const std::string name{local_name(qname)};
        Frame frame;
        frame.name = name;
        if (!stack_.empty()) {
            auto& counts = stack_.back().child_counts;
            frame.ordinal = ++counts[name];
        }
        if (const char* s = attr(atts, "STYLEREFS")) frame.stylerefs = s;
        stack_.push_back(std::move(frame));

        if (stack_.size() == 1) {
            if (name != "alto") return fail("root element must be <alto>");
            saw_root_ = true;
            return;
        }

        if (name == "TextStyle") {
            const char* id = attr(atts, "ID");
            const char* size = attr(atts, "FONTSIZE");
            if (id && size) {
                const auto v = parse_number(size);
                if (v && *v > 0) styles_.emplace(id, *v);
            }
        } else if (name == "TextBlock") {
            if (in_block_) return fail("nested TextBlock is not supported");
            TextBlock block;
            const char* id = attr(atts, "ID");
            block.block_id = id ? std::string(id) : "TB" + std::to_string(page_.blocks.size() + 1);
            if (!block_ids_.insert(block.block_id).second)
                return fail("duplicate TextBlock ID '" + block.block_id + "'");
            block.bbox = {geometry(atts, "HPOS"), geometry(atts, "VPOS"), geometry(atts, "WIDTH"),
                          geometry(atts, "HEIGHT")};
            page_.blocks.push_back(std::move(block));
            pending_.emplace_back();
            in_block_ = true;
        } else if (name == "String") {
            if (!in_block_) return fail("String outside of a TextBlock");
            const char* content = attr(atts, "CONTENT");
            if (!content) return fail("String element is missing CONTENT");
            WordToken tok;
            tok.text = content;
            tok.hpos = geometry(atts, "HPOS");
            tok.vpos = geometry(atts, "VPOS");
            tok.width = geometry(atts, "WIDTH");
            tok.height = geometry(atts, "HEIGHT");
            if (structural_) return;
            // Blank CONTENT carries no word; dropping it keeps the token invariant.
            if (split_whitespace(tok.text).empty()) return;
            page_.blocks.back().tokens.push_back(std::move(tok));
            pending_.back().push_back(nearest_stylerefs());
        }
    }

    void end() {
        if (structural_) return;
        if (!stack_.empty() && stack_.back().name == "TextBlock") in_block_ = false;
        stack_.pop_back();
    }

    std::optional<std::string> nearest_stylerefs() const {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            if (it->stylerefs) return it->stylerefs;
            if (it->name == "TextBlock") break;
        }
        return std::nullopt;
    }

    // Styles may be declared after the layout in non-conforming files, so
    // resolution runs once the whole document is read.
    void resolve_fonts() {
        for (std::size_t b = 0; b < page_.blocks.size(); ++b) {
            auto& tokens = page_.blocks[b].tokens;
            for (std::size_t t = 0; t < tokens.size(); ++t) {
                tokens[t].font_size = default_font_size;
                if (!pending_[b][t]) continue;
                for (const auto& ref : split_whitespace(*pending_[b][t])) {
                    if (auto it = styles_.find(ref); it != styles_.end()) {
                        tokens[t].font_size = it->second;
                        break;
                    }
                }
            }
        }
    }

    XML_Parser parser_ = nullptr;
    Page page_;
    std::vector<Frame> stack_;
    std::unordered_map<std::string, double> styles_;
    std::set<std::string> block_ids_;
    std::vector<std::vector<std::optional<std::string>>> pending_;
    std::optional<std::string> structural_;
    bool in_block_ = false;
    bool saw_root_ = false;
};

}  // namespace detail

// Reads the ALTO subset: Styles/TextStyle and the
// Layout/Page/PrintSpace/TextBlock/TextLine/String hierarchy. Element names
// may carry a namespace prefix.
inline Page parse_alto_page(std::string_view bytes, PageId id) {
    return detail::AltoReader{std::move(id)}.parse(bytes);
}

// Bare OCR text: one block, whitespace-split tokens, default font, no geometry.
inline Page parse_plaintext_page(std::string_view text, PageId id) {
    Page page;
    page.id = std::move(id);
    TextBlock block;
    block.block_id = "TB1";
    for (auto& w : split_whitespace(text)) {
        WordToken tok;
        tok.text = std::move(w);
        block.tokens.push_back(std::move(tok));
    }
    page.blocks.push_back(std::move(block));
    return page;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return ss.str();
}

inline Page load_page(const ManifestEntry& entry) {
    const std::string bytes = read_file(entry.path);
    try {
        return entry.format == PageFormat::alto ? parse_alto_page(bytes, entry.id)
                                                : parse_plaintext_page(bytes, entry.id);
    } catch (const ParseError& e) {
        throw ParseError(entry.path.string() + ": " + e.what(), e.offset());
    } catch (const StructuralError& e) {
        throw StructuralError(entry.path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Manifest CSV

namespace detail {

// One CSV record, RFC 4180 quoting.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw ValidationError("manifest line " + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace detail

// Parses manifest text; relative paths are resolved against `base_dir`.
inline CorpusManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    CorpusManifest manifest;
    std::map<PageId, std::size_t> seen;
    bool header_seen = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (split_whitespace(line).empty()) continue;

        const auto where = "manifest line " + std::to_string(line_no) + ": ";
        auto fields = detail::split_csv_line(line, line_no);
        if (!header_seen) {
            const std::vector<std::string> expected{"path", "title", "date", "page_number", "format"};
            if (fields != expected)
                throw ValidationError(where + "header must be 'path,title,date,page_number,format'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 5)
            throw ValidationError(where + "expected 5 fields, got " + std::to_string(fields.size()));

        ManifestEntry e;
        if (fields[0].empty()) throw ValidationError(where + "empty path");
        e.path = std::filesystem::path(fields[0]);
        if (e.path.is_relative() && !base_dir.empty()) e.path = base_dir / e.path;
        if (fields[1].empty()) throw ValidationError(where + "empty title");
        e.id.title = fields[1];
        const auto date = Date::parse(fields[2]);
        if (!date) throw ValidationError(where + "invalid date '" + fields[2] + "' (expected YYYY-MM-DD)");
        e.id.date = *date;
        int page = 0;
        const auto& pn = fields[3];
        const auto [ptr, ec] = std::from_chars(pn.data(), pn.data() + pn.size(), page);
        if (ec != std::errc{} || ptr != pn.data() + pn.size() || page < 1)
            throw ValidationError(where + "page_number must be an integer >= 1, got '" + pn + "'");
        e.id.page_number = page;
        if (fields[4] == "alto")
            e.format = PageFormat::alto;
        else if (fields[4] == "text")
            e.format = PageFormat::text;
        else
            throw ValidationError(where + "format must be 'alto' or 'text', got '" + fields[4] + "'");

        if (auto [it, fresh] = seen.emplace(e.id, line_no); !fresh)
            throw ValidationError(where + "duplicate page (" + e.id.title + ", " + e.id.date.iso() + ", " +
                                  std::to_string(e.id.page_number) + "), first listed on line " +
                                  std::to_string(it->second));
        manifest.entries.push_back(std::move(e));
    }
    if (!header_seen) throw ValidationError("manifest is empty (missing header row)");
    return manifest;
}

inline CorpusManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_file(path), path.parent_path());
}

}  // namespace chronopress
