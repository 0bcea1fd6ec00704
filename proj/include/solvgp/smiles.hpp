#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "solvgp/molgraph.hpp"

namespace solvgp {

// SMILES front end, restricted to the chemistry the pipeline supports:
// organic-subset atoms {C,N,O,P,S,F,Cl,Br,I} and aromatic {c,n,o,s},
// bracket atoms with charge and hydrogen count, bonds {- = # :}, branches,
// ring closures 1-9 and %nn. No stereochemistry, isotopes, wildcards, or
// disconnected components.

enum class TokenKind : std::uint8_t {
    AtomOrganic,
    AtomBracket,
    Bond,
    BranchOpen,
    BranchClose,
    RingDigit,
    RingTwoDigit,
};

struct SmilesToken {
    TokenKind kind;
    std::size_t begin = 0;  // [begin, end) span of the input
    std::size_t end = 0;

    // Atom payload
    std::string element;
    bool aromatic = false;
    int charge = 0;
    int explicit_h = 0;  // bracket atoms only; absent H spec means 0

    char bond_symbol = 0;  // '-' '=' '#' ':'
    int ring_id = 0;
};

std::vector<SmilesToken> tokenize(std::string_view smiles);

// Concatenation of the token spans; reproduces the input byte for byte.
std::string render(const std::vector<SmilesToken>& tokens,
                   std::string_view smiles);

enum class BondSym : std::uint8_t { Implicit, Single, Double, Triple, Aromatic };

struct RawAtom {
    std::string element;
    bool aromatic = false;
    int charge = 0;
    int explicit_h = 0;
    bool bracket = false;
};

struct RawBond {
    int i = 0;
    int j = 0;
    BondSym sym = BondSym::Implicit;
};

// Connectivity as written: atoms in input order, bonds with branch stack and
// ring closures resolved.
struct RawMolecule {
    std::vector<RawAtom> atoms;
    std::vector<RawBond> bonds;
};

RawMolecule parse(const std::vector<SmilesToken>& tokens);

// Chemical perception: implicit hydrogens, aromaticity, ring membership,
// hybridization, conjugation, bond orders and tabulated bond lengths.
MolecularGraph perceive(const RawMolecule& raw, const RadiiTable& radii,
                        std::string source_id = {});

// tokenize + parse + perceive in one step.
MolecularGraph graph_from_smiles(std::string_view smiles,
                                 const RadiiTable& radii,
                                 std::string source_id = {});

}  // namespace solvgp
