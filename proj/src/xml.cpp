#include "xsw/xml.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace xsw {

std::string to_string(const QName& name) {
    if (name.uri.empty()) {
        return name.local;
    }
    return "{" + name.uri + "}" + name.local;
}

XmlNode XmlNode::element(QName name, std::string prefix) {
    XmlNode n;
    n.kind = Kind::Element;
    n.name = std::move(name);
    n.prefix = std::move(prefix);
    return n;
}

XmlNode XmlNode::text_node(std::string content) {
    XmlNode n;
    n.kind = Kind::Text;
    n.text = std::move(content);
    return n;
}

XmlNode XmlNode::comment(std::string content) {
    XmlNode n;
    n.kind = Kind::Comment;
    n.text = std::move(content);
    return n;
}

const XmlAttr* XmlNode::find_attribute(const QName& name) const {
    for (const auto& a : attributes) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

XmlAttr* XmlNode::find_attribute(const QName& name) {
    for (auto& a : attributes) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

void XmlNode::set_attribute(QName name, std::string prefix, std::string value) {
    if (auto* existing = find_attribute(name)) {
        existing->prefix = std::move(prefix);
        existing->value = std::move(value);
        return;
    }
    attributes.push_back(XmlAttr{std::move(name), std::move(prefix), std::move(value)});
}

std::string XmlNode::text_content() const {
    std::string out;
    if (kind == Kind::Text) {
        return text;
    }
    for (const auto& child : children) {
        out += child.text_content();
    }
    return out;
}

std::vector<size_t> XmlNode::element_children() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < children.size(); ++i) {
        if (children[i].is_element()) {
            out.push_back(i);
        }
    }
    return out;
}

NodePath NodePath::parent() const {
    NodePath p = *this;
    if (!p.steps.empty()) {
        p.steps.pop_back();
    }
    return p;
}

NodePath NodePath::child(size_t index, QName name) const {
    NodePath p = *this;
    p.steps.push_back(Step{index, std::move(name)});
    return p;
}

std::string NodePath::to_string() const {
    if (steps.empty()) {
        return "/";
    }
    std::string out;
    for (const auto& s : steps) {
        out += "/" + s.name.local + "[" + std::to_string(s.child_index) + "]";
    }
    return out;
}

IdRegistry IdRegistry::standard() {
    IdRegistry reg;
    reg.add(QName{"Id", "http://docs.oasis-open.org/wss/2004/01/oasis-200401-wss-wssecurity-utility-1.0.xsd"});
    reg.add(QName{"Id", ""});
    reg.add(QName{"ID", ""});
    reg.add(QName{"id", ""});
    return reg;
}

void IdRegistry::add(QName name) {
    if (!is_id(name)) {
        names_.push_back(std::move(name));
    }
}

bool IdRegistry::is_id(const QName& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

bool is_name_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp <= 0x7F) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7FF) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0xFFFF) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

void validate_utf8(std::string_view bytes) {
    size_t i = 0;
    while (i < bytes.size()) {
        unsigned char c = bytes[i];
        size_t extra;
        uint32_t cp;
        if (c < 0x80) {
            if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') {
                throw WellFormednessError("control character not allowed in XML: 0x" +
                                          std::to_string(static_cast<int>(c)));
            }
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            throw WellFormednessError("invalid UTF-8 byte sequence");
        }
        if (i + extra >= bytes.size()) {
            throw WellFormednessError("truncated UTF-8 sequence");
        }
        for (size_t k = 1; k <= extra; ++k) {
            unsigned char cc = bytes[i + k];
            if ((cc & 0xC0) != 0x80) {
                throw WellFormednessError("invalid UTF-8 continuation byte");
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
            (extra == 3 && cp < 0x10000)) {
            throw WellFormednessError("overlong UTF-8 encoding");
        }
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            throw WellFormednessError("UTF-8 sequence outside Unicode range");
        }
        i += extra + 1;
    }
}

struct RawName {
    std::string prefix;
    std::string local;
    std::string as_written;
};

class Parser {
public:
    explicit Parser(std::string text) : text_(std::move(text)) {}

    XmlNode parse_document() {
        skip_bom();
        skip_xml_declaration();
        skip_misc(true);
        if (eof() || peek() != '<') {
            throw WellFormednessError("expected root element");
        }
        std::map<std::string, std::string> scope;
        scope["xml"] = kXmlNamespace;
        XmlNode root = parse_element(scope);
        skip_misc(false);
        if (!eof()) {
            throw WellFormednessError("content after root element");
        }
        return root;
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const {
        return text_.compare(pos_, s.size(), s) == 0;
    }
    char take() {
        if (eof()) {
            throw WellFormednessError("unexpected end of input");
        }
        return text_[pos_++];
    }
    void expect(char c) {
        if (eof() || text_[pos_] != c) {
            throw WellFormednessError(std::string("expected '") + c + "' at offset " +
                                      std::to_string(pos_));
        }
        ++pos_;
    }
    void skip_ws() {
        while (!eof() && is_ws(text_[pos_])) {
            ++pos_;
        }
    }

    void skip_bom() {
        if (starts_with("\xEF\xBB\xBF")) {
            pos_ += 3;
        }
    }

    void skip_xml_declaration() {
        if (starts_with("<?xml") && (is_ws(peek(5)) || peek(5) == '?')) {
            size_t end = text_.find("?>", pos_);
            if (end == std::string::npos) {
                throw WellFormednessError("unterminated XML declaration");
            }
            std::string decl = text_.substr(pos_, end - pos_);
            if (decl.find("encoding") != std::string::npos &&
                decl.find("UTF-8") == std::string::npos &&
                decl.find("utf-8") == std::string::npos) {
                throw UnsupportedConstruct("only UTF-8 encoded documents are accepted");
            }
            pos_ = end + 2;
        }
    }

    // Whitespace and comments outside the root element. Comments out here
    // have no place in the tree and are dropped.
    void skip_misc(bool before_root) {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                parse_comment_text();
            } else if (starts_with("<!DOCTYPE") || starts_with("<!ENTITY")) {
                throw UnsupportedConstruct("DTD constructs are rejected");
            } else if (starts_with("<?")) {
                throw UnsupportedConstruct("processing instructions are rejected");
            } else if (before_root && starts_with("<!")) {
                throw WellFormednessError("unexpected markup before root element");
            } else {
                return;
            }
        }
    }

    std::string parse_comment_text() {
        pos_ += 4;  // <!--
        size_t end = text_.find("--", pos_);
        if (end == std::string::npos) {
            throw WellFormednessError("unterminated comment");
        }
        std::string content = text_.substr(pos_, end - pos_);
        if (end + 2 >= text_.size() || text_[end + 2] != '>') {
            throw WellFormednessError("'--' not allowed inside comment");
        }
        pos_ = end + 3;
        return content;
    }

    RawName parse_name() {
        if (eof() || !is_name_start(peek())) {
            throw WellFormednessError("expected name at offset " + std::to_string(pos_));
        }
        size_t start = pos_;
        while (!eof() && is_name_char(peek())) {
            ++pos_;
        }
        std::string first = text_.substr(start, pos_ - start);
        RawName name;
        if (!eof() && peek() == ':') {
            ++pos_;
            if (eof() || !is_name_start(peek())) {
                throw WellFormednessError("expected local name after ':'");
            }
            size_t lstart = pos_;
            while (!eof() && is_name_char(peek())) {
                ++pos_;
            }
            name.prefix = first;
            name.local = text_.substr(lstart, pos_ - lstart);
            name.as_written = name.prefix + ":" + name.local;
            if (!eof() && peek() == ':') {
                throw WellFormednessError("more than one ':' in name");
            }
        } else {
            name.local = first;
            name.as_written = first;
        }
        return name;
    }

    uint32_t parse_char_reference() {
        // positioned after "&#"
        uint32_t cp = 0;
        bool hex = false;
        if (peek() == 'x' || peek() == 'X') {
            hex = true;
            ++pos_;
        }
        size_t digits = 0;
        for (;;) {
            char c = peek();
            uint32_t v;
            if (c >= '0' && c <= '9') {
                v = c - '0';
            } else if (hex && c >= 'a' && c <= 'f') {
                v = 10 + (c - 'a');
            } else if (hex && c >= 'A' && c <= 'F') {
                v = 10 + (c - 'A');
            } else {
                break;
            }
            cp = cp * (hex ? 16 : 10) + v;
            if (cp > 0x10FFFF) {
                throw WellFormednessError("character reference out of range");
            }
            ++pos_;
            ++digits;
        }
        if (digits == 0) {
            throw WellFormednessError("empty character reference");
        }
        expect(';');
        bool valid = cp == 0x9 || cp == 0xA || cp == 0xD ||
                     (cp >= 0x20 && cp <= 0xD7FF) || (cp >= 0xE000 && cp <= 0xFFFD) ||
                     (cp >= 0x10000 && cp <= 0x10FFFF);
        if (!valid) {
            throw WellFormednessError("character reference to invalid XML character");
        }
        return cp;
    }

    // Expands the five predefined entities and character references. Any
    // other entity means a DTD would be needed: hard reject.
    void parse_reference(std::string& out) {
        expect('&');
        if (peek() == '#') {
            ++pos_;
            append_utf8(out, parse_char_reference());
            return;
        }
        size_t start = pos_;
        while (!eof() && peek() != ';' && pos_ - start < 8) {
            ++pos_;
        }
        std::string ent = text_.substr(start, pos_ - start);
        expect(';');
        if (ent == "lt") {
            out.push_back('<');
        } else if (ent == "gt") {
            out.push_back('>');
        } else if (ent == "amp") {
            out.push_back('&');
        } else if (ent == "apos") {
            out.push_back('\'');
        } else if (ent == "quot") {
            out.push_back('"');
        } else {
            throw UnsupportedConstruct("entity reference '&" + ent + ";' requires a DTD");
        }
    }

    std::string parse_attribute_value() {
        char quote = take();
        if (quote != '"' && quote != '\'') {
            throw WellFormednessError("attribute value must be quoted");
        }
        std::string value;
        for (;;) {
            if (eof()) {
                throw WellFormednessError("unterminated attribute value");
            }
            char c = peek();
            if (c == quote) {
                ++pos_;
                break;
            }
            if (c == '<') {
                throw WellFormednessError("'<' not allowed in attribute value");
            }
            if (c == '&') {
                parse_reference(value);  // characters from references are not normalized
            } else if (c == '\t' || c == '\n' || c == '\r') {
                value.push_back(' ');  // attribute-value normalization
                ++pos_;
            } else {
                value.push_back(c);
                ++pos_;
            }
        }
        return value;
    }

    XmlNode parse_element(const std::map<std::string, std::string>& parent_scope) {
        expect('<');
        RawName raw = parse_name();

        struct RawAttr {
            RawName name;
            std::string value;
        };
        std::vector<RawAttr> raw_attrs;
        std::vector<std::pair<std::string, std::string>> decls;
        bool self_closing = false;

        for (;;) {
            bool had_ws = !eof() && is_ws(peek());
            skip_ws();
            if (eof()) {
                throw WellFormednessError("unterminated start tag <" + raw.as_written);
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (peek() == '/') {
                ++pos_;
                expect('>');
                self_closing = true;
                break;
            }
            if (!had_ws) {
                throw WellFormednessError("expected whitespace between attributes");
            }
            RawName attr_name = parse_name();
            skip_ws();
            expect('=');
            skip_ws();
            std::string value = parse_attribute_value();

            if (attr_name.as_written == "xmlns" ||
                attr_name.prefix == "xmlns") {
                std::string decl_prefix = attr_name.prefix.empty() ? "" : attr_name.local;
                if (decl_prefix == "xmlns") {
                    throw WellFormednessError("the xmlns prefix cannot be declared");
                }
                if (decl_prefix == "xml" && value != kXmlNamespace) {
                    throw WellFormednessError("the xml prefix is bound to the XML namespace");
                }
                if (decl_prefix != "xml" && value == kXmlNamespace) {
                    throw WellFormednessError("the XML namespace cannot be bound to another prefix");
                }
                if (value == kXmlnsNamespace) {
                    throw WellFormednessError("the xmlns namespace cannot be declared");
                }
                if (!decl_prefix.empty() && value.empty()) {
                    throw WellFormednessError("namespace undeclaration of a prefix is not XML 1.0");
                }
                for (const auto& d : decls) {
                    if (d.first == decl_prefix) {
                        throw WellFormednessError("duplicate namespace declaration for prefix '" +
                                                  decl_prefix + "'");
                    }
                }
                decls.emplace_back(decl_prefix, value);
            } else {
                raw_attrs.push_back(RawAttr{std::move(attr_name), std::move(value)});
            }
        }

        std::map<std::string, std::string> scope = parent_scope;
        for (const auto& [p, u] : decls) {
            if (p.empty() && u.empty()) {
                scope.erase("");
            } else {
                scope[p] = u;
            }
        }

        XmlNode node = XmlNode::element(QName{raw.local, resolve(raw.prefix, scope, true)}, raw.prefix);
        node.ns_decls = std::move(decls);

        for (auto& ra : raw_attrs) {
            std::string uri;
            if (!ra.name.prefix.empty()) {
                uri = resolve(ra.name.prefix, scope, false);
            }
            QName qn{ra.name.local, uri};
            if (node.find_attribute(qn) != nullptr) {
                throw WellFormednessError("duplicate attribute " + to_string(qn));
            }
            node.attributes.push_back(XmlAttr{std::move(qn), ra.name.prefix, std::move(ra.value)});
        }

        if (self_closing) {
            return node;
        }

        // content
        std::string pending_text;
        auto flush_text = [&] {
            if (!pending_text.empty()) {
                node.children.push_back(XmlNode::text_node(std::move(pending_text)));
                pending_text.clear();
            }
        };
        for (;;) {
            if (eof()) {
                throw WellFormednessError("unterminated element <" + raw.as_written + ">");
            }
            char c = peek();
            if (c == '<') {
                if (starts_with("</")) {
                    flush_text();
                    pos_ += 2;
                    RawName closing = parse_name();
                    skip_ws();
                    expect('>');
                    if (closing.as_written != raw.as_written) {
                        throw WellFormednessError("mismatched end tag </" + closing.as_written +
                                                  ">, expected </" + raw.as_written + ">");
                    }
                    return node;
                }
                if (starts_with("<!--")) {
                    flush_text();
                    node.children.push_back(XmlNode::comment(parse_comment_text()));
                    continue;
                }
                if (starts_with("<![CDATA[")) {
                    pos_ += 9;
                    size_t end = text_.find("]]>", pos_);
                    if (end == std::string::npos) {
                        throw WellFormednessError("unterminated CDATA section");
                    }
                    pending_text += text_.substr(pos_, end - pos_);
                    pos_ = end + 3;
                    continue;
                }
                if (starts_with("<?")) {
                    throw UnsupportedConstruct("processing instructions are rejected");
                }
                if (starts_with("<!")) {
                    throw UnsupportedConstruct("DTD constructs are rejected");
                }
                flush_text();
                node.children.push_back(parse_element(scope));
                continue;
            }
            if (c == '&') {
                parse_reference(pending_text);
                continue;
            }
            if (c == ']' && starts_with("]]>")) {
                throw WellFormednessError("']]>' not allowed in character data");
            }
            pending_text.push_back(c);
            ++pos_;
        }
    }

    std::string resolve(const std::string& prefix, const std::map<std::string, std::string>& scope,
                        bool use_default) {
        if (prefix.empty()) {
            if (!use_default) {
                return "";
            }
            auto it = scope.find("");
            return it == scope.end() ? "" : it->second;
        }
        auto it = scope.find(prefix);
        if (it == scope.end()) {
            throw WellFormednessError("undeclared namespace prefix '" + prefix + "'");
        }
        return it->second;
    }

    std::string text_;
    size_t pos_ = 0;
};

std::string normalize_line_endings(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    for (size_t i = 0; i < bytes.size(); ++i) {
        if (bytes[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < bytes.size() && bytes[i + 1] == '\n') {
                ++i;
            }
        } else {
            out.push_back(bytes[i]);
        }
    }
    return out;
}

}  // namespace

XmlDocument XmlDocument::parse(std::string_view bytes, IdRegistry registry) {
    validate_utf8(bytes);
    Parser parser(normalize_line_endings(bytes));
    XmlDocument doc;
    doc.root_ = parser.parse_document();
    doc.registry_ = std::move(registry);
    doc.index_ids();
    return doc;
}

XmlDocument XmlDocument::from_tree(XmlNode root, IdRegistry registry) {
    if (!root.is_element()) {
        throw WellFormednessError("document root must be an element");
    }
    XmlDocument doc;
    doc.root_ = std::move(root);
    doc.registry_ = std::move(registry);
    doc.index_ids();
    return doc;
}

const XmlNode& XmlDocument::node_at(const NodePath& path) const {
    const XmlNode* node = &root_;
    for (const auto& step : path.steps) {
        if (step.child_index >= node->children.size()) {
            throw Error("node path step out of range: " + path.to_string());
        }
        node = &node->children[step.child_index];
        if (!node->is_element() || node->name != step.name) {
            throw Error("node path does not address the recorded element: " + path.to_string());
        }
    }
    if (!node->is_element()) {
        throw Error("node path addresses a non-element");
    }
    return *node;
}

namespace {

void collect_ids(const XmlNode& node, const NodePath& path, const IdRegistry& reg,
                 std::vector<std::pair<std::string, NodePath>>& out) {
    for (const auto& attr : node.attributes) {
        if (reg.is_id(attr.name)) {
            out.emplace_back(attr.value, path);
        }
    }
    for (size_t i = 0; i < node.children.size(); ++i) {
        const XmlNode& child = node.children[i];
        if (child.is_element()) {
            collect_ids(child, path.child(i, child.name), reg, out);
        }
    }
}

}  // namespace

void XmlDocument::index_ids() {
    ids_.clear();
    duplicate_ids_.clear();
    collect_ids(root_, NodePath{}, registry_, ids_);
    std::map<std::string, int> counts;
    for (const auto& [value, path] : ids_) {
        if (++counts[value] == 2) {
            duplicate_ids_.push_back(value);
        }
    }
}

NodePath XmlDocument::resolve_id(std::string_view id_value) const {
    const NodePath* found = nullptr;
    for (const auto& [value, path] : ids_) {
        if (value == id_value) {
            if (found != nullptr) {
                throw AmbiguityError(AmbiguityError::Kind::MultipleMatches,
                                     "ID value '" + std::string(id_value) +
                                         "' identifies more than one node");
            }
            found = &path;
        }
    }
    if (found == nullptr) {
        throw AmbiguityError(AmbiguityError::Kind::ZeroMatches,
                             "ID value '" + std::string(id_value) + "' identifies no node");
    }
    return *found;
}

std::optional<NodePath> XmlDocument::first_id_match(std::string_view id_value) const {
    for (const auto& [value, path] : ids_) {
        if (value == id_value) {
            return path;
        }
    }
    return std::nullopt;
}

namespace {

void find_all_rec(const XmlNode& node, const NodePath& path, const QName& name,
                  std::vector<NodePath>& out) {
    if (node.name == name) {
        out.push_back(path);
    }
    for (size_t i = 0; i < node.children.size(); ++i) {
        const XmlNode& child = node.children[i];
        if (child.is_element()) {
            find_all_rec(child, path.child(i, child.name), name, out);
        }
    }
}

}  // namespace

std::vector<NodePath> XmlDocument::find_all(const QName& name) const {
    std::vector<NodePath> out;
    find_all_rec(root_, NodePath{}, name, out);
    return out;
}

std::optional<NodePath> XmlDocument::find_first(const QName& name) const {
    auto all = find_all(name);
    if (all.empty()) {
        return std::nullopt;
    }
    return all.front();
}

std::vector<NodePath> XmlDocument::child_elements(const NodePath& parent) const {
    const XmlNode& node = node_at(parent);
    std::vector<NodePath> out;
    for (size_t i = 0; i < node.children.size(); ++i) {
        if (node.children[i].is_element()) {
            out.push_back(parent.child(i, node.children[i].name));
        }
    }
    return out;
}

std::optional<NodePath> XmlDocument::child_element(const NodePath& parent,
                                                   const QName& name) const {
    const XmlNode& node = node_at(parent);
    for (size_t i = 0; i < node.children.size(); ++i) {
        if (node.children[i].is_element() && node.children[i].name == name) {
            return parent.child(i, name);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Serializer
// ---------------------------------------------------------------------------

namespace {

void escape_text(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\r': out += "&#13;"; break;
            default: out.push_back(c);
        }
    }
}

// Literal tab/newline must round-trip as character references: a re-parse
// would otherwise normalize them to spaces.
void escape_attribute(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '"': out += "&quot;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            default: out.push_back(c);
        }
    }
}

void serialize_node(const XmlNode& node, std::string& out) {
    switch (node.kind) {
        case XmlNode::Kind::Text:
            escape_text(node.text, out);
            return;
        case XmlNode::Kind::Comment:
            out += "<!--";
            out += node.text;
            out += "-->";
            return;
        case XmlNode::Kind::Element:
            break;
    }
    std::string tag = node.prefix.empty() ? node.name.local : node.prefix + ":" + node.name.local;
    out += "<" + tag;
    for (const auto& [prefix, uri] : node.ns_decls) {
        out += prefix.empty() ? " xmlns=\"" : " xmlns:" + prefix + "=\"";
        escape_attribute(uri, out);
        out += "\"";
    }
    for (const auto& attr : node.attributes) {
        out += " ";
        out += attr.prefix.empty() ? attr.name.local : attr.prefix + ":" + attr.name.local;
        out += "=\"";
        escape_attribute(attr.value, out);
        out += "\"";
    }
    if (node.children.empty()) {
        out += "/>";
        return;
    }
    out += ">";
    for (const auto& child : node.children) {
        serialize_node(child, out);
    }
    out += "</" + tag + ">";
}

}  // namespace

std::string XmlDocument::serialize() const {
    std::string out;
    serialize_node(root_, out);
    return out;
}

bool structurally_equal(const XmlNode& a, const XmlNode& b) {
    if (a.kind != b.kind) {
        return false;
    }
    if (a.kind != XmlNode::Kind::Element) {
        return a.text == b.text;
    }
    if (a.name != b.name || a.attributes.size() != b.attributes.size() ||
        a.children.size() != b.children.size()) {
        return false;
    }
    for (size_t i = 0; i < a.attributes.size(); ++i) {
        if (a.attributes[i].name != b.attributes[i].name ||
            a.attributes[i].value != b.attributes[i].value) {
            return false;
        }
    }
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(a.children[i], b.children[i])) {
            return false;
        }
    }
    return true;
}

bool structurally_equal(const XmlDocument& a, const XmlDocument& b) {
    return structurally_equal(a.root(), b.root());
}

namespace {

void resolve_namespaces_rec(XmlNode& node, const std::map<std::string, std::string>& parent_scope) {
    if (!node.is_element()) {
        return;
    }
    std::map<std::string, std::string> scope = parent_scope;
    for (const auto& [p, u] : node.ns_decls) {
        if (p.empty() && u.empty()) {
            scope.erase("");
        } else {
            scope[p] = u;
        }
    }
    auto lookup = [&](const std::string& prefix, bool use_default) -> std::string {
        if (prefix.empty()) {
            if (!use_default) {
                return "";
            }
            auto it = scope.find("");
            return it == scope.end() ? "" : it->second;
        }
        auto it = scope.find(prefix);
        if (it == scope.end()) {
            throw WellFormednessError("undeclared namespace prefix '" + prefix + "'");
        }
        return it->second;
    };
    node.name.uri = lookup(node.prefix, true);
    for (auto& attr : node.attributes) {
        attr.name.uri = lookup(attr.prefix, false);
    }
    for (auto& child : node.children) {
        resolve_namespaces_rec(child, scope);
    }
}

}  // namespace

void resolve_namespaces(XmlNode& root) {
    std::map<std::string, std::string> scope;
    scope["xml"] = kXmlNamespace;
    resolve_namespaces_rec(root, scope);
}

namespace {

bool whitespace_only(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return is_ws(c); });
}

void pretty_rec(const XmlNode& node, int depth, std::string& out) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    if (node.kind == XmlNode::Kind::Text) {
        if (!whitespace_only(node.text)) {
            out += indent;
            escape_text(node.text, out);
            out += "\n";
        }
        return;
    }
    if (node.kind == XmlNode::Kind::Comment) {
        out += indent + "<!--" + node.text + "-->\n";
        return;
    }
    std::string tag = node.prefix.empty() ? node.name.local : node.prefix + ":" + node.name.local;
    out += indent + "<" + tag;
    for (const auto& [prefix, uri] : node.ns_decls) {
        out += prefix.empty() ? " xmlns=\"" : " xmlns:" + prefix + "=\"";
        escape_attribute(uri, out);
        out += "\"";
    }
    for (const auto& attr : node.attributes) {
        out += " " + (attr.prefix.empty() ? attr.name.local : attr.prefix + ":" + attr.name.local) +
               "=\"";
        escape_attribute(attr.value, out);
        out += "\"";
    }
    bool has_elements = false;
    std::string text_payload;
    for (const auto& child : node.children) {
        if (child.is_element() || child.kind == XmlNode::Kind::Comment) {
            has_elements = true;
        } else if (child.is_text()) {
            text_payload += child.text;
        }
    }
    if (node.children.empty()) {
        out += "/>\n";
    } else if (!has_elements) {
        out += ">";
        escape_text(text_payload, out);
        out += "</" + tag + ">\n";
    } else {
        out += ">\n";
        for (const auto& child : node.children) {
            pretty_rec(child, depth + 1, out);
        }
        out += indent + "</" + tag + ">\n";
    }
}

}  // namespace

std::string pretty_print(const XmlDocument& doc) {
    std::string out;
    pretty_rec(doc.root(), 0, out);
    return out;
}

}  // namespace xsw
