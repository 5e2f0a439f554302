#pragma once

#include <string>
#include <string_view>

#include "sparqlopt/term.hpp"

namespace sparqlopt {

/// Parses a document file: one `(term, term, term)` triple per line,
/// `#`-prefixed comment lines, blank lines ignored. Duplicates collapse.
Document parse_document(std::string_view text);

/// Deterministic inverse of parse_document: one triple per line, in the
/// document's lexicographic order.
std::string serialize_document(const Document& d);

}  // namespace sparqlopt
