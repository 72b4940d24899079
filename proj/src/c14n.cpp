#include "xsw/c14n.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace xsw {

namespace {

void escape_c14n_text(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\r': out += "&#xD;"; break;
            default: out.push_back(c);
        }
    }
}

void escape_c14n_attribute(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '"': out += "&quot;"; break;
            case '\t': out += "&#x9;"; break;
            case '\n': out += "&#xA;"; break;
            case '\r': out += "&#xD;"; break;
            default: out.push_back(c);
        }
    }
}

using Scope = std::map<std::string, std::string>;

Scope apply_decls(const Scope& scope, const XmlNode& el) {
    Scope out = scope;
    for (const auto& [p, u] : el.ns_decls) {
        if (p.empty() && u.empty()) {
            out.erase("");
        } else {
            out[p] = u;
        }
    }
    return out;
}

class Canonicalizer {
public:
    explicit Canonicalizer(const std::vector<std::string>& inclusive_prefixes) {
        for (const auto& p : inclusive_prefixes) {
            inclusive_.insert(p == "#default" ? "" : p);
        }
    }

    std::string run(const XmlDocument& doc, const NodePath& subtree) {
        const XmlNode& target = doc.node_at(subtree);  // validates the path
        // Namespace context above the subtree comes from the original
        // document; rendering state starts empty, which is what makes the
        // output independent of where the subtree sat.
        Scope scope;
        scope["xml"] = kXmlNamespace;
        const XmlNode* node = &doc.root();
        for (const auto& step : subtree.steps) {
            scope = apply_decls(scope, *node);
            node = &node->children[step.child_index];
        }
        std::string out;
        render_element(target, scope, Scope{}, out);
        return out;
    }

private:
    void render_element(const XmlNode& el, const Scope& parent_scope, const Scope& rendered,
                        std::string& out) {
        Scope scope = apply_decls(parent_scope, el);

        auto lookup = [&](const std::string& prefix) -> const std::string* {
            auto it = scope.find(prefix);
            return it == scope.end() ? nullptr : &it->second;
        };

        // Visibly utilized prefixes: the element's own plus every prefixed
        // attribute's. The xml prefix is implicitly bound and never emitted.
        std::set<std::string> candidates;
        if (el.prefix != "xml") {
            candidates.insert(el.prefix);
        }
        for (const auto& attr : el.attributes) {
            if (!attr.prefix.empty() && attr.prefix != "xml") {
                candidates.insert(attr.prefix);
            }
        }
        for (const auto& p : inclusive_) {
            if (p == "xml") {
                continue;
            }
            if (p.empty() || lookup(p) != nullptr) {
                candidates.insert(p);
            }
        }

        std::vector<std::pair<std::string, std::string>> to_render;
        for (const auto& prefix : candidates) {
            std::string value;
            if (prefix.empty()) {
                const std::string* v = lookup("");
                value = v == nullptr ? "" : *v;
            } else {
                const std::string* v = lookup(prefix);
                if (v == nullptr) {
                    throw CanonicalizationError("prefix '" + prefix +
                                                "' is not declared in scope");
                }
                value = *v;
            }
            auto it = rendered.find(prefix);
            const bool already = prefix.empty()
                                     ? value == (it == rendered.end() ? std::string() : it->second)
                                     : it != rendered.end() && it->second == value;
            if (!already) {
                to_render.emplace_back(prefix, value);
            }
        }
        std::sort(to_render.begin(), to_render.end());

        // Consistency between the stored expanded name and the declarations;
        // tree surgery that breaks this must not go unnoticed.
        if (el.prefix != "xml") {
            const std::string* v = el.prefix.empty() ? lookup("") : lookup(el.prefix);
            std::string resolved = v == nullptr ? "" : *v;
            if (el.prefix.empty() && v == nullptr) {
                resolved = "";
            } else if (!el.prefix.empty() && v == nullptr) {
                throw CanonicalizationError("prefix '" + el.prefix + "' is not declared in scope");
            }
            if (resolved != el.name.uri) {
                throw CanonicalizationError("element " + to_string(el.name) +
                                            " disagrees with in-scope declaration of prefix '" +
                                            el.prefix + "'");
            }
        }

        std::string tag = el.prefix.empty() ? el.name.local : el.prefix + ":" + el.name.local;
        out += "<" + tag;

        Scope next_rendered = rendered;
        for (const auto& [prefix, uri] : to_render) {
            out += prefix.empty() ? " xmlns=\"" : " xmlns:" + prefix + "=\"";
            escape_c14n_attribute(uri, out);
            out += "\"";
            next_rendered[prefix] = uri;
        }

        auto attr_uri = [&](const XmlAttr& attr) -> std::string {
            if (attr.prefix.empty()) {
                return "";
            }
            if (attr.prefix == "xml") {
                return kXmlNamespace;
            }
            const std::string* v = lookup(attr.prefix);
            if (v == nullptr) {
                throw CanonicalizationError("attribute prefix '" + attr.prefix +
                                            "' is not declared in scope");
            }
            return *v;
        };

        std::vector<const XmlAttr*> attrs;
        attrs.reserve(el.attributes.size());
        for (const auto& a : el.attributes) {
            attrs.push_back(&a);
        }
        std::sort(attrs.begin(), attrs.end(), [&](const XmlAttr* a, const XmlAttr* b) {
            return std::tie(a->name.uri, a->name.local) < std::tie(b->name.uri, b->name.local);
        });
        for (const XmlAttr* a : attrs) {
            if (attr_uri(*a) != a->name.uri) {
                throw CanonicalizationError("attribute " + to_string(a->name) +
                                            " disagrees with in-scope declaration of prefix '" +
                                            a->prefix + "'");
            }
            out += " ";
            out += a->prefix.empty() ? a->name.local : a->prefix + ":" + a->name.local;
            out += "=\"";
            escape_c14n_attribute(a->value, out);
            out += "\"";
        }
        out += ">";

        for (const auto& child : el.children) {
            switch (child.kind) {
                case XmlNode::Kind::Text:
                    escape_c14n_text(child.text, out);
                    break;
                case XmlNode::Kind::Comment:
                    break;  // omit-comments variant
                case XmlNode::Kind::Element:
                    render_element(child, scope, next_rendered, out);
                    break;
            }
        }
        out += "</" + tag + ">";
    }

    std::set<std::string> inclusive_;
};

}  // namespace

std::string canonicalize(const XmlDocument& doc, const NodePath& subtree,
                         const std::vector<std::string>& inclusive_prefixes) {
    return Canonicalizer(inclusive_prefixes).run(doc, subtree);
}

}  // namespace xsw
