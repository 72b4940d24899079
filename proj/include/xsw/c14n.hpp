#pragma once

#include <string>
#include <vector>

#include "xsw/xml.hpp"

namespace xsw {

/// Exclusive XML Canonicalization 1.0 (omit comments) of the subtree rooted
/// at `subtree`. Namespace declarations are emitted only where visibly
/// utilized or listed in `inclusive_prefixes` ("#default" selects the default
/// namespace). The result is the exact octet stream digests are computed
/// over.
std::string canonicalize(const XmlDocument& doc, const NodePath& subtree,
                         const std::vector<std::string>& inclusive_prefixes = {});

}  // namespace xsw
