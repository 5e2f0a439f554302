#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlopt/term.hpp"

namespace sparqlopt {

/// Argument of a relational atom: a variable, a constant or a labeled null.
/// Constants carry the injective text rendering of the value (for RDF-backed
/// relations this is the Term rendering), so distinct terms stay distinct.
struct Arg {
    enum class Kind { Var, Const, Null };

    Kind kind = Kind::Const;
    std::string name;   // Var / Const
    long null_id = 0;   // Null

    static Arg var(std::string n) { return {Kind::Var, std::move(n), 0}; }
    static Arg constant(std::string n) { return {Kind::Const, std::move(n), 0}; }
    static Arg null(long id) { return {Kind::Null, {}, id}; }

    bool is_var() const { return kind == Kind::Var; }
    bool is_const() const { return kind == Kind::Const; }
    bool is_null() const { return kind == Kind::Null; }

    std::string render() const;
    auto operator<=>(const Arg&) const = default;
};

struct Atom {
    std::string rel;
    std::vector<Arg> args;

    bool ground() const;
    std::string render() const;
    auto operator<=>(const Atom&) const = default;
};

std::set<std::string> vars(const Atom& a);
std::set<std::string> vars(const std::vector<Atom>& atoms);

/// A database instance represented as its set of facts (ground atoms over
/// constants and labeled nulls).
using Instance = std::set<Atom>;

std::string render(const Instance& i);
std::set<Arg> domain(const Instance& i);

/// A TGD (body -> exists y . head) or an EGD (body -> x = y).
struct Constraint {
    enum class Kind { Tgd, Egd };

    Kind kind = Kind::Tgd;
    std::vector<Atom> body;
    std::vector<Atom> head;                  // TGD only
    std::vector<std::string> existentials;   // TGD only
    std::string eq_left, eq_right;           // EGD only

    bool is_tgd() const { return kind == Kind::Tgd; }
    bool is_egd() const { return kind == Kind::Egd; }

    std::set<std::string> body_vars() const { return vars(body); }
    std::set<std::string> universal_vars() const;

    /// Checks the well-formedness conditions: nonempty head, every universal
    /// head variable occurs in the body, EGD equated variables occur in the
    /// body. Throws ParseError when violated.
    void validate() const;
    /// Like validate() but reports instead of throwing.
    std::optional<std::string> check() const;

    std::string render() const;
    auto operator<=>(const Constraint&) const = default;
};

using Sigma = std::vector<Constraint>;

std::set<std::string> constants_of(const Sigma& sigma);

/// Parsed constraint file: a `const a, b;` declaration section followed by
/// one constraint per line.
Sigma parse_constraints(std::string_view text);
std::string render(const Sigma& sigma);

/// A conjunctive query ans(head) <- body. Head entries are variables or
/// constants; every head variable must occur in the body.
struct CQ {
    std::vector<Arg> head;
    std::vector<Atom> body;

    void validate() const;
    std::string render() const;
    auto operator<=>(const CQ&) const = default;
};

CQ parse_cq(std::string_view text);

/// A homomorphism assigns values to variables and labeled nulls; constants
/// map to themselves.
using Homomorphism = std::map<Arg, Arg>;

Arg apply_hom(const Homomorphism& h, const Arg& a);
Atom apply_hom(const Homomorphism& h, const Atom& a);

/// Finds a homomorphism from `src` into `dst` extending `seed`, or nullopt.
/// Variables and labeled nulls of `src` map freely; constants are fixed.
std::optional<Homomorphism> find_homomorphism(const std::vector<Atom>& src, const Instance& dst,
                                              const Homomorphism& seed = {});

std::optional<Homomorphism> homomorphism_exists(const std::vector<Atom>& src,
                                                const std::vector<Atom>& dst);

/// Enumerates homomorphisms from src into dst in a deterministic
/// (lexicographic) order; stops early when the callback returns false.
void for_each_homomorphism(const std::vector<Atom>& src, const Instance& dst,
                           const Homomorphism& seed,
                           const std::function<bool(const Homomorphism&)>& cb);

/// True if the two instances are homomorphically equivalent (a homomorphism
/// in each direction, constants fixed, nulls free).
bool homomorphically_equivalent(const Instance& a, const Instance& b);

}  // namespace sparqlopt
