#include "sparqlopt/relational.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sparqlopt {

std::string Arg::render() const {
    switch (kind) {
        case Kind::Var: return name;
        case Kind::Const: return name;
        case Kind::Null: return "_N" + std::to_string(null_id);
    }
    return {};
}

bool Atom::ground() const {
    return std::none_of(args.begin(), args.end(), [](const Arg& a) { return a.is_var(); });
}

std::string Atom::render() const {
    std::string s = rel + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i].render();
    }
    return s + ")";
}

std::set<std::string> vars(const Atom& a) {
    std::set<std::string> out;
    for (const Arg& x : a.args)
        if (x.is_var()) out.insert(x.name);
    return out;
}

std::set<std::string> vars(const std::vector<Atom>& atoms) {
    std::set<std::string> out;
    for (const Atom& a : atoms) {
        auto v = vars(a);
        out.insert(v.begin(), v.end());
    }
    return out;
}

std::string render(const Instance& i) {
    std::ostringstream out;
    for (const Atom& a : i) out << a.render() << "\n";
    return out.str();
}

std::set<Arg> domain(const Instance& i) {
    std::set<Arg> out;
    for (const Atom& a : i)
        for (const Arg& x : a.args) out.insert(x);
    return out;
}

std::set<std::string> Constraint::universal_vars() const {
    std::set<std::string> out = vars(body);
    if (is_tgd()) {
        std::set<std::string> ex(existentials.begin(), existentials.end());
        for (const Atom& a : head)
            for (const Arg& x : a.args)
                if (x.is_var() && !ex.count(x.name)) out.insert(x.name);
    } else {
        out.insert(eq_left);
        out.insert(eq_right);
    }
    return out;
}

std::optional<std::string> Constraint::check() const {
    if (is_tgd()) {
        if (head.empty()) return "TGD with empty head";
        std::set<std::string> bv = body_vars();
        std::set<std::string> ex(existentials.begin(), existentials.end());
        for (const std::string& e : existentials)
            if (bv.count(e)) return "existential variable " + e + " occurs in the body";
        for (const Atom& a : head)
            for (const Arg& x : a.args)
                if (x.is_var() && !ex.count(x.name) && !bv.count(x.name))
                    return "head variable " + x.name + " does not occur in the body";
    } else {
        if (body.empty()) return "EGD with empty body";
        std::set<std::string> bv = body_vars();
        if (!bv.count(eq_left)) return "equated variable " + eq_left + " does not occur in the body";
        if (!bv.count(eq_right))
            return "equated variable " + eq_right + " does not occur in the body";
    }
    return std::nullopt;
}

void Constraint::validate() const {
    if (auto err = check()) throw ParseError(*err + " in " + render());
}

std::string Constraint::render() const {
    std::string s;
    for (size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += body[i].render();
    }
    s += " -> ";
    if (is_egd()) return s + eq_left + " = " + eq_right;
    if (!existentials.empty()) {
        s += "exists ";
        for (size_t i = 0; i < existentials.size(); ++i) {
            if (i) s += ", ";
            s += existentials[i];
        }
        s += " . ";
    }
    for (size_t i = 0; i < head.size(); ++i) {
        if (i) s += ", ";
        s += head[i].render();
    }
    return s;
}

std::set<std::string> constants_of(const Sigma& sigma) {
    std::set<std::string> out;
    for (const Constraint& c : sigma) {
        for (const std::vector<Atom>* atoms : {&c.body, &c.head})
            for (const Atom& a : *atoms)
                for (const Arg& x : a.args)
                    if (x.is_const()) out.insert(x.name);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constraint / CQ parsing
// ---------------------------------------------------------------------------

namespace {

struct RelToken {
    enum class Kind { Ident, Quoted, LParen, RParen, Comma, Dot, Semi, Arrow, LeftArrow, Eq, End };
    Kind kind;
    std::string text;
    int line;
};

class RelLexer {
public:
    RelLexer(std::string_view src) {
        size_t pos = 0;
        int line = 1;
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '\n') { ++line; ++pos; continue; }
            if (std::isspace(static_cast<unsigned char>(c))) { ++pos; continue; }
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') ++pos;
                continue;
            }
            if (c == '(') { toks_.push_back({RelToken::Kind::LParen, "(", line}); ++pos; continue; }
            if (c == ')') { toks_.push_back({RelToken::Kind::RParen, ")", line}); ++pos; continue; }
            if (c == ',') { toks_.push_back({RelToken::Kind::Comma, ",", line}); ++pos; continue; }
            if (c == '.') { toks_.push_back({RelToken::Kind::Dot, ".", line}); ++pos; continue; }
            if (c == ';') { toks_.push_back({RelToken::Kind::Semi, ";", line}); ++pos; continue; }
            if (c == '=') { toks_.push_back({RelToken::Kind::Eq, "=", line}); ++pos; continue; }
            if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
                toks_.push_back({RelToken::Kind::Arrow, "->", line});
                pos += 2;
                continue;
            }
            if (c == '<' && pos + 1 < src.size() && src[pos + 1] == '-') {
                toks_.push_back({RelToken::Kind::LeftArrow, "<-", line});
                pos += 2;
                continue;
            }
            if (c == '\'' || c == '"') {
                size_t end = src.find(c, pos + 1);
                if (end == std::string_view::npos) throw ParseError("unterminated quote", line);
                toks_.push_back(
                    {RelToken::Kind::Quoted, std::string(src.substr(pos + 1, end - pos - 1)), line});
                pos = end + 1;
                continue;
            }
            size_t start = pos;
            while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
                   std::string_view("(),.;=#<'\"").find(src[pos]) == std::string_view::npos &&
                   !(src[pos] == '-' && pos + 1 < src.size() && src[pos + 1] == '>'))
                ++pos;
            toks_.push_back({RelToken::Kind::Ident, std::string(src.substr(start, pos - start)), line});
        }
        toks_.push_back({RelToken::Kind::End, "", line});
    }

    const RelToken& peek(size_t ahead = 0) const {
        size_t i = idx_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    RelToken take() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }
    void expect(RelToken::Kind k, const char* what) {
        if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().line);
        take();
    }

private:
    std::vector<RelToken> toks_;
    size_t idx_ = 0;
};

bool numeric_token(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    });
}

class RelParser {
public:
    explicit RelParser(std::string_view src) : lex_(src) {}

    Sigma parse_sigma() {
        parse_const_decls();
        Sigma out;
        while (lex_.peek().kind != RelToken::Kind::End) out.push_back(parse_constraint());
        return out;
    }

    CQ parse_single_cq() {
        parse_const_decls();
        CQ q = parse_cq_rule();
        if (lex_.peek().kind != RelToken::Kind::End)
            throw ParseError("trailing input after query", lex_.peek().line);
        return q;
    }

private:
    void parse_const_decls() {
        while (lex_.peek().kind == RelToken::Kind::Ident && lex_.peek().text == "const") {
            lex_.take();
            while (true) {
                if (lex_.peek().kind != RelToken::Kind::Ident)
                    throw ParseError("expected constant name", lex_.peek().line);
                consts_.insert(lex_.take().text);
                if (lex_.peek().kind == RelToken::Kind::Comma) {
                    lex_.take();
                    continue;
                }
                break;
            }
            lex_.expect(RelToken::Kind::Semi, ";");
        }
    }

    Arg parse_arg() {
        if (lex_.peek().kind == RelToken::Kind::Quoted) {
            // quoted literals render like RDF literals so the bridge stays injective
            return Arg::constant("\"" + lex_.take().text + "\"");
        }
        if (lex_.peek().kind != RelToken::Kind::Ident)
            throw ParseError("expected an atom argument", lex_.peek().line);
        std::string t = lex_.take().text;
        if (consts_.count(t) || numeric_token(t) || t.rfind("_:", 0) == 0) return Arg::constant(t);
        return Arg::var(t);
    }

    Atom parse_atom() {
        if (lex_.peek().kind != RelToken::Kind::Ident)
            throw ParseError("expected a relation name", lex_.peek().line);
        Atom a;
        a.rel = lex_.take().text;
        lex_.expect(RelToken::Kind::LParen, "(");
        while (true) {
            a.args.push_back(parse_arg());
            if (lex_.peek().kind == RelToken::Kind::Comma) {
                lex_.take();
                continue;
            }
            break;
        }
        lex_.expect(RelToken::Kind::RParen, ")");
        return a;
    }

    std::vector<Atom> parse_atom_list() {
        std::vector<Atom> out;
        out.push_back(parse_atom());
        while (lex_.peek().kind == RelToken::Kind::Comma) {
            lex_.take();
            out.push_back(parse_atom());
        }
        return out;
    }

    Constraint parse_constraint() {
        int line = lex_.peek().line;
        Constraint c;
        if (lex_.peek().kind != RelToken::Kind::Arrow) c.body = parse_atom_list();
        lex_.expect(RelToken::Kind::Arrow, "->");
        // EGD: x = y
        if (lex_.peek().kind == RelToken::Kind::Ident && lex_.peek(1).kind == RelToken::Kind::Eq) {
            c.kind = Constraint::Kind::Egd;
            Arg l = parse_arg();
            lex_.expect(RelToken::Kind::Eq, "=");
            Arg r = parse_arg();
            if (!l.is_var() || !r.is_var())
                throw ParseError("EGD must equate two variables", line);
            c.eq_left = l.name;
            c.eq_right = r.name;
        } else {
            c.kind = Constraint::Kind::Tgd;
            if (lex_.peek().kind == RelToken::Kind::Ident && lex_.peek().text == "exists") {
                lex_.take();
                while (true) {
                    if (lex_.peek().kind != RelToken::Kind::Ident)
                        throw ParseError("expected existential variable", lex_.peek().line);
                    c.existentials.push_back(lex_.take().text);
                    if (lex_.peek().kind == RelToken::Kind::Comma) {
                        lex_.take();
                        continue;
                    }
                    break;
                }
                lex_.expect(RelToken::Kind::Dot, ".");
            }
            c.head = parse_atom_list();
        }
        c.validate();
        return c;
    }

    CQ parse_cq_rule() {
        CQ q;
        if (lex_.peek().kind != RelToken::Kind::Ident || lex_.peek().text != "ans")
            throw ParseError("expected ans(...)", lex_.peek().line);
        lex_.take();
        lex_.expect(RelToken::Kind::LParen, "(");
        if (lex_.peek().kind != RelToken::Kind::RParen) {
            while (true) {
                q.head.push_back(parse_arg());
                if (lex_.peek().kind == RelToken::Kind::Comma) {
                    lex_.take();
                    continue;
                }
                break;
            }
        }
        lex_.expect(RelToken::Kind::RParen, ")");
        lex_.expect(RelToken::Kind::LeftArrow, "<-");
        q.body = parse_atom_list();
        q.validate();
        return q;
    }

    RelLexer lex_;
    std::set<std::string> consts_;
};

}  // namespace

Sigma parse_constraints(std::string_view text) { return RelParser(text).parse_sigma(); }

std::string render(const Sigma& sigma) {
    std::ostringstream out;
    // identifier-shaped constants need a declaration to parse back as constants
    std::set<std::string> decls;
    for (const std::string& c : constants_of(sigma))
        if (!numeric_token(c) && c.rfind("_:", 0) != 0 && c.front() != '"' && c.front() != '\'')
            decls.insert(c);
    if (!decls.empty()) {
        out << "const ";
        bool first = true;
        for (const std::string& c : decls) {
            if (!first) out << ", ";
            first = false;
            out << c;
        }
        out << ";\n";
    }
    for (const Constraint& c : sigma) out << c.render() << "\n";
    return out.str();
}

void CQ::validate() const {
    std::set<std::string> bv = vars(body);
    for (const Arg& h : head) {
        if (h.is_var() && !bv.count(h.name))
            throw ParseError("head variable " + h.name + " does not occur in the body of " +
                             render());
    }
}

std::string CQ::render() const {
    std::string s = "ans(";
    for (size_t i = 0; i < head.size(); ++i) {
        if (i) s += ", ";
        s += head[i].render();
    }
    s += ") <- ";
    for (size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += body[i].render();
    }
    return s;
}

CQ parse_cq(std::string_view text) { return RelParser(text).parse_single_cq(); }

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

Arg apply_hom(const Homomorphism& h, const Arg& a) {
    if (a.is_const()) return a;
    auto it = h.find(a);
    return it == h.end() ? a : it->second;
}

Atom apply_hom(const Homomorphism& h, const Atom& a) {
    Atom out;
    out.rel = a.rel;
    out.args.reserve(a.args.size());
    for (const Arg& x : a.args) out.args.push_back(apply_hom(h, x));
    return out;
}

namespace {

bool match_atom(const Atom& pat, const Atom& fact, Homomorphism& h,
                std::vector<Arg>& bound_here) {
    if (pat.rel != fact.rel || pat.args.size() != fact.args.size()) return false;
    for (size_t i = 0; i < pat.args.size(); ++i) {
        const Arg& p = pat.args[i];
        const Arg& v = fact.args[i];
        if (p.is_const()) {
            if (p != v) return false;
        } else {
            auto it = h.find(p);
            if (it != h.end()) {
                if (it->second != v) return false;
            } else {
                h.emplace(p, v);
                bound_here.push_back(p);
            }
        }
    }
    return true;
}

bool search(const std::vector<Atom>& src, size_t idx, const Instance& dst, Homomorphism& h,
            const std::function<bool(const Homomorphism&)>& cb, bool& keep_going) {
    if (idx == src.size()) {
        keep_going = cb(h);
        return true;  // found one; continuation is governed by keep_going
    }
    for (const Atom& fact : dst) {
        std::vector<Arg> bound_here;
        if (match_atom(src[idx], fact, h, bound_here)) {
            search(src, idx + 1, dst, h, cb, keep_going);
        }
        for (const Arg& b : bound_here) h.erase(b);
        if (!keep_going) return true;
    }
    return false;
}

}  // namespace

void for_each_homomorphism(const std::vector<Atom>& src, const Instance& dst,
                           const Homomorphism& seed,
                           const std::function<bool(const Homomorphism&)>& cb) {
    Homomorphism h = seed;
    bool keep_going = true;
    search(src, 0, dst, h, cb, keep_going);
}

std::optional<Homomorphism> find_homomorphism(const std::vector<Atom>& src, const Instance& dst,
                                              const Homomorphism& seed) {
    std::optional<Homomorphism> out;
    for_each_homomorphism(src, dst, seed, [&](const Homomorphism& h) {
        out = h;
        return false;  // stop at the first witness
    });
    return out;
}

std::optional<Homomorphism> homomorphism_exists(const std::vector<Atom>& src,
                                                const std::vector<Atom>& dst) {
    Instance inst(dst.begin(), dst.end());
    return find_homomorphism(src, inst);
}

bool homomorphically_equivalent(const Instance& a, const Instance& b) {
    std::vector<Atom> av(a.begin(), a.end());
    std::vector<Atom> bv(b.begin(), b.end());
    return find_homomorphism(av, b).has_value() && find_homomorphism(bv, a).has_value();
}

}  // namespace sparqlopt
