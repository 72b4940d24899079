#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xsw/errors.hpp"

namespace xsw {

inline constexpr const char* kXmlNamespace = "http://www.w3.org/XML/1998/namespace";
inline constexpr const char* kXmlnsNamespace = "http://www.w3.org/2000/xmlns/";

/// Expanded name: local part plus namespace URI. Prefixes never appear here;
/// they are kept separately as serialization hints.
struct QName {
    std::string local;
    std::string uri;

    friend auto operator<=>(const QName&, const QName&) = default;
};

std::string to_string(const QName& name);

struct XmlAttr {
    QName name;
    std::string prefix;  // as written in the source document, "" if none
    std::string value;
};

/// One node of the document tree. Elements own their attributes, namespace
/// declarations (exactly as written) and children; text and comment nodes
/// carry their payload in `text`.
struct XmlNode {
    enum class Kind { Element, Text, Comment };

    Kind kind = Kind::Element;
    QName name;
    std::string prefix;
    std::vector<XmlAttr> attributes;
    std::vector<std::pair<std::string, std::string>> ns_decls;  // prefix ("" = default) -> uri
    std::vector<XmlNode> children;
    std::string text;

    bool is_element() const { return kind == Kind::Element; }
    bool is_text() const { return kind == Kind::Text; }

    static XmlNode element(QName name, std::string prefix = "");
    static XmlNode text_node(std::string content);
    static XmlNode comment(std::string content);

    const XmlAttr* find_attribute(const QName& name) const;
    XmlAttr* find_attribute(const QName& name);
    void set_attribute(QName name, std::string prefix, std::string value);

    /// Concatenated text of this node and all descendants, in document order.
    std::string text_content() const;

    /// Indexes of element children, in order.
    std::vector<size_t> element_children() const;
};

/// Address of an element node: child indexes from the root, with the expected
/// QName recorded per step. An empty path addresses the root element. Stable
/// across serialize/parse round trips because all child nodes are preserved
/// verbatim.
struct NodePath {
    struct Step {
        size_t child_index = 0;
        QName name;

        friend bool operator==(const Step&, const Step&) = default;
    };

    std::vector<Step> steps;

    bool is_root() const { return steps.empty(); }
    NodePath parent() const;
    NodePath child(size_t index, QName name) const;
    std::string to_string() const;

    friend bool operator==(const NodePath&, const NodePath&) = default;
};

/// The set of attribute names treated as IDs when building the ID index.
/// Defaults to wsu:Id plus the unqualified Id/ID/id spellings.
class IdRegistry {
public:
    static IdRegistry standard();

    void add(QName name);
    bool is_id(const QName& name) const;
    const std::vector<QName>& entries() const { return names_; }

private:
    std::vector<QName> names_;
};

/// Immutable namespace-aware document. All mutation paths (signing, attack
/// construction) copy the tree and rebuild a document via from_tree().
class XmlDocument {
public:
    /// Parse UTF-8 octets. DTDs, processing instructions and entity
    /// definitions are rejected with UnsupportedConstruct; everything else
    /// that is not well-formed XML 1.0 + Namespaces raises
    /// WellFormednessError. Comments inside the root element are preserved.
    static XmlDocument parse(std::string_view bytes, IdRegistry registry = IdRegistry::standard());

    /// Build a document from an already-resolved tree (root must be an
    /// element and prefixes must resolve consistently).
    static XmlDocument from_tree(XmlNode root, IdRegistry registry = IdRegistry::standard());

    const XmlNode& root() const { return root_; }
    const IdRegistry& id_registry() const { return registry_; }

    const XmlNode& node_at(const NodePath& path) const;

    /// Round-trippable serialization: prefixes, attribute order, namespace
    /// declarations, whitespace and comments are reproduced.
    std::string serialize() const;

    /// Strict ID lookup: the value must identify exactly one node.
    NodePath resolve_id(std::string_view id_value) const;

    /// First node in document order carrying the ID, if any. This emulates
    /// the lax lookup that ID-referencing verifiers typically perform; the
    /// hardened pipeline never uses it.
    std::optional<NodePath> first_id_match(std::string_view id_value) const;

    /// All (id value, node) pairs in document order.
    const std::vector<std::pair<std::string, NodePath>>& id_entries() const { return ids_; }

    /// ID values that occur on more than one node. Kept as a document defect
    /// instead of silently dropping entries.
    const std::vector<std::string>& duplicate_ids() const { return duplicate_ids_; }

    // Tree queries used across the toolkit. All return element paths.
    std::vector<NodePath> find_all(const QName& name) const;
    std::optional<NodePath> find_first(const QName& name) const;
    std::vector<NodePath> child_elements(const NodePath& parent) const;
    std::optional<NodePath> child_element(const NodePath& parent, const QName& name) const;

private:
    XmlDocument() = default;

    void index_ids();

    XmlNode root_;
    IdRegistry registry_;
    std::vector<std::pair<std::string, NodePath>> ids_;
    std::vector<std::string> duplicate_ids_;
};

/// Equality over names, namespaces, attributes, text and child order.
/// Prefixes and namespace declarations are serialization detail and do not
/// participate.
bool structurally_equal(const XmlNode& a, const XmlNode& b);
bool structurally_equal(const XmlDocument& a, const XmlDocument& b);

/// Re-derives every QName uri in the tree from the prefixes and the
/// declarations in scope. Used after tree surgery that touches declarations.
void resolve_namespaces(XmlNode& root);

/// Indented rendering for human consumption. Never apply this to signed
/// subtrees: it changes the octets the digests were computed over.
std::string pretty_print(const XmlDocument& doc);

}  // namespace xsw
