#include "sparqlopt/rdf_io.hpp"

#include <sstream>
#include <vector>

namespace sparqlopt {

namespace {

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits "(t1, t2, t3)" into the three raw term tokens, respecting quotes.
std::vector<std::string_view> split_triple(std::string_view line, int lineno) {
    line = trim(line);
    if (line.size() < 2 || line.front() != '(' || line.back() != ')')
        throw ParseError("expected (subject, predicate, object), got: " + std::string(line),
                         lineno);
    std::string_view inner = line.substr(1, line.size() - 2);
    std::vector<std::string_view> parts;
    size_t start = 0;
    char quote = 0;
    for (size_t i = 0; i <= inner.size(); ++i) {
        if (i < inner.size() && quote) {
            if (inner[i] == quote) quote = 0;
            continue;
        }
        if (i < inner.size() && (inner[i] == '"' || inner[i] == '\'')) {
            quote = inner[i];
            continue;
        }
        if (i == inner.size() || inner[i] == ',') {
            parts.push_back(trim(inner.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (quote)
        throw ParseError("unterminated quote in triple", lineno);
    if (parts.size() != 3)
        throw ParseError("expected exactly three terms in triple, got " +
                             std::to_string(parts.size()),
                         lineno);
    return parts;
}

}  // namespace

Document parse_document(std::string_view text) {
    Document doc;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++lineno;
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto parts = split_triple(line, lineno);
        doc.emplace(Term::parse(parts[0], lineno), Term::parse(parts[1], lineno),
                    Term::parse(parts[2], lineno), lineno);
    }
    return doc;
}

std::string serialize_document(const Document& d) {
    std::ostringstream out;
    for (const Triple& t : d) out << t.render() << "\n";
    return out.str();
}

}  // namespace sparqlopt
