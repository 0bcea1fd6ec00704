#include "solvgp/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "solvgp/errors.hpp"

namespace solvgp {

namespace {

bool is_organic_upper(char c) {
    return c == 'C' || c == 'N' || c == 'O' || c == 'P' || c == 'S' ||
           c == 'F' || c == 'I' || c == 'B';  // B only as the Br digraph
}

bool is_aromatic_lower(char c) {
    return c == 'c' || c == 'n' || c == 'o' || c == 's';
}

[[noreturn]] void bad_char(char c, std::size_t pos) {
    raise("IllegalCharacter", std::string("unexpected '") + c + "' at position " +
                                  std::to_string(pos));
}

void check_supported(const std::string& symbol, std::size_t pos) {
    Element e;
    if (!element_from_symbol(symbol, e))
        raise("UnsupportedElement",
              "element '" + symbol + "' at position " + std::to_string(pos) +
                  " is outside the supported set C,H,O,N,P,S,F,Cl,Br,I");
}

// Bracket atom body: element, then hydrogen count and charge in either order.
SmilesToken parse_bracket(std::string_view s, std::size_t open,
                          std::size_t close) {
    SmilesToken tok;
    tok.kind = TokenKind::AtomBracket;
    tok.begin = open;
    tok.end = close + 1;

    std::size_t i = open + 1;
    if (i >= close) raise("MalformedBracket", "empty bracket atom");

    char c = s[i];
    if (std::isupper(static_cast<unsigned char>(c))) {
        tok.element = c;
        ++i;
        if (i < close && std::islower(static_cast<unsigned char>(s[i])) &&
            s[i] != 'c' && s[i] != 'n' && s[i] != 'o' && s[i] != 's') {
            // Two-letter symbol (Cl, Br); a following aromatic letter would be
            // a separate atom, which brackets do not allow.
            tok.element += s[i];
            ++i;
        }
    } else if (is_aromatic_lower(c)) {
        tok.element = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        tok.aromatic = true;
        ++i;
    } else {
        raise("MalformedBracket", std::string("bracket atom starts with '") + c +
                                      "' at position " + std::to_string(i));
    }
    check_supported(tok.element, open + 1);

    bool saw_h = false;
    bool saw_charge = false;
    while (i < close) {
        c = s[i];
        if (c == 'H') {
            if (saw_h) raise("MalformedBracket", "repeated hydrogen count");
            saw_h = true;
            ++i;
            int count = 1;
            if (i < close && std::isdigit(static_cast<unsigned char>(s[i]))) {
                count = s[i] - '0';
                ++i;
            }
            if (count > 4)
                raise("MalformedBracket", "hydrogen count exceeds 4");
            tok.explicit_h = count;
        } else if (c == '+' || c == '-') {
            if (saw_charge) raise("MalformedBracket", "repeated charge");
            saw_charge = true;
            const int sign = c == '+' ? 1 : -1;
            int magnitude = 1;
            ++i;
            if (i < close && std::isdigit(static_cast<unsigned char>(s[i]))) {
                magnitude = s[i] - '0';
                ++i;
            } else {
                while (i < close && s[i] == c) {
                    ++magnitude;
                    ++i;
                }
            }
            tok.charge = sign * magnitude;
        } else {
            raise("MalformedBracket", std::string("unexpected '") + c +
                                          "' in bracket at position " +
                                          std::to_string(i));
        }
    }
    return tok;
}

}  // namespace

std::vector<SmilesToken> tokenize(std::string_view smiles) {
    if (smiles.empty()) raise("EmptyInput", "empty SMILES string");
    std::vector<SmilesToken> tokens;

    std::size_t i = 0;
    const std::size_t n = smiles.size();
    while (i < n) {
        const char c = smiles[i];
        SmilesToken tok;
        tok.begin = i;

        if (static_cast<unsigned char>(c) > 127) bad_char(c, i);

        if (c == '[') {
            const std::size_t close = smiles.find(']', i);
            if (close == std::string_view::npos)
                raise("MalformedBracket", "unterminated bracket atom at position " +
                                              std::to_string(i));
            tokens.push_back(parse_bracket(smiles, i, close));
            i = close + 1;
            continue;
        }
        if (is_organic_upper(c)) {
            tok.kind = TokenKind::AtomOrganic;
            tok.element = c;
            if ((c == 'C' && i + 1 < n && smiles[i + 1] == 'l') ||
                (c == 'B' && i + 1 < n && smiles[i + 1] == 'r')) {
                tok.element += smiles[i + 1];
                ++i;
            }
            check_supported(tok.element, tok.begin);
            tok.end = i + 1;
            tokens.push_back(tok);
            ++i;
            continue;
        }
        if (is_aromatic_lower(c)) {
            tok.kind = TokenKind::AtomOrganic;
            tok.element = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            tok.aromatic = true;
            tok.end = i + 1;
            tokens.push_back(tok);
            ++i;
            continue;
        }
        if (c == '-' || c == '=' || c == '#' || c == ':') {
            tok.kind = TokenKind::Bond;
            tok.bond_symbol = c;
            tok.end = i + 1;
            tokens.push_back(tok);
            ++i;
            continue;
        }
        if (c == '(') {
            tok.kind = TokenKind::BranchOpen;
            tok.end = i + 1;
            tokens.push_back(tok);
            ++i;
            continue;
        }
        if (c == ')') {
            tok.kind = TokenKind::BranchClose;
            tok.end = i + 1;
            tokens.push_back(tok);
            ++i;
            continue;
        }
        if (c >= '1' && c <= '9') {
            tok.kind = TokenKind::RingDigit;
            tok.ring_id = c - '0';
            tok.end = i + 1;
            tokens.push_back(tok);
            ++i;
            continue;
        }
        if (c == '%') {
            if (i + 2 >= n || !std::isdigit(static_cast<unsigned char>(smiles[i + 1])) ||
                !std::isdigit(static_cast<unsigned char>(smiles[i + 2])))
                raise("IllegalCharacter",
                      "'%' must be followed by two digits at position " +
                          std::to_string(i));
            tok.kind = TokenKind::RingTwoDigit;
            tok.ring_id = (smiles[i + 1] - '0') * 10 + (smiles[i + 2] - '0');
            tok.end = i + 3;
            tokens.push_back(tok);
            i += 3;
            continue;
        }
        bad_char(c, i);
    }
    return tokens;
}

std::string render(const std::vector<SmilesToken>& tokens,
                   std::string_view smiles) {
    std::string out;
    for (const auto& t : tokens)
        out.append(smiles.substr(t.begin, t.end - t.begin));
    return out;
}

namespace {

BondSym bond_from_symbol(char c) {
    switch (c) {
        case '-': return BondSym::Single;
        case '=': return BondSym::Double;
        case '#': return BondSym::Triple;
        case ':': return BondSym::Aromatic;
        default: raise("IllegalCharacter", std::string("bond symbol '") + c + "'");
    }
}

struct OpenRing {
    int atom;
    BondSym sym;
    bool has_sym;
};

}  // namespace

RawMolecule parse(const std::vector<SmilesToken>& tokens) {
    RawMolecule mol;
    std::vector<int> branch_stack;
    std::set<std::pair<int, int>> bonded;
    std::map<int, OpenRing> open_rings;
    int prev = -1;
    BondSym pending = BondSym::Implicit;
    bool has_pending = false;

    auto add_bond = [&](int i, int j, BondSym sym) {
        if (i == j) raise("InvalidRingClosure", "ring bond closes on its own atom");
        auto key = std::minmax(i, j);
        if (!bonded.insert({key.first, key.second}).second)
            raise("InvalidRingClosure", "duplicate bond between atoms " +
                                            std::to_string(i) + " and " +
                                            std::to_string(j));
        mol.bonds.push_back({i, j, sym});
    };

    for (const auto& tok : tokens) {
        switch (tok.kind) {
            case TokenKind::AtomOrganic:
            case TokenKind::AtomBracket: {
                const int idx = static_cast<int>(mol.atoms.size());
                mol.atoms.push_back({tok.element, tok.aromatic, tok.charge,
                                     tok.explicit_h,
                                     tok.kind == TokenKind::AtomBracket});
                if (prev >= 0)
                    add_bond(prev, idx, has_pending ? pending : BondSym::Implicit);
                else if (has_pending)
                    raise("DanglingBond", "bond symbol with no preceding atom");
                prev = idx;
                has_pending = false;
                break;
            }
            case TokenKind::Bond: {
                if (has_pending)
                    raise("DanglingBond", "two bond symbols in a row");
                if (prev < 0)
                    raise("DanglingBond", "bond symbol before any atom");
                pending = bond_from_symbol(tok.bond_symbol);
                has_pending = true;
                break;
            }
            case TokenKind::BranchOpen: {
                if (prev < 0)
                    raise("UnbalancedParentheses", "branch opens before any atom");
                if (has_pending)
                    raise("DanglingBond", "bond symbol before '('");
                branch_stack.push_back(prev);
                break;
            }
            case TokenKind::BranchClose: {
                if (branch_stack.empty())
                    raise("UnbalancedParentheses", "')' without matching '('");
                if (has_pending)
                    raise("DanglingBond", "bond symbol before ')'");
                prev = branch_stack.back();
                branch_stack.pop_back();
                break;
            }
            case TokenKind::RingDigit:
            case TokenKind::RingTwoDigit: {
                if (prev < 0)
                    raise("InvalidRingClosure", "ring closure before any atom");
                auto it = open_rings.find(tok.ring_id);
                if (it == open_rings.end()) {
                    open_rings[tok.ring_id] = {prev, pending, has_pending};
                } else {
                    const OpenRing open = it->second;
                    open_rings.erase(it);
                    BondSym sym = BondSym::Implicit;
                    if (open.has_sym && has_pending) {
                        if (open.sym != pending)
                            raise("ConflictingRingBondOrder",
                                  "ring " + std::to_string(tok.ring_id) +
                                      " closed with conflicting bond symbols");
                        sym = open.sym;
                    } else if (open.has_sym) {
                        sym = open.sym;
                    } else if (has_pending) {
                        sym = pending;
                    }
                    add_bond(open.atom, prev, sym);
                }
                has_pending = false;
                break;
            }
        }
    }

    if (!branch_stack.empty())
        raise("UnbalancedParentheses", "unclosed '('");
    if (!open_rings.empty())
        raise("UnclosedRingBond",
              "ring bond " + std::to_string(open_rings.begin()->first) +
                  " opened but never closed");
    if (has_pending) raise("DanglingBond", "trailing bond symbol");
    if (mol.atoms.empty()) raise("EmptyInput", "no atoms in SMILES");
    return mol;
}

namespace {

// Non-bridge edges lie on a cycle. Iterative DFS lowpoint computation.
std::vector<char> ring_edges(int n, const std::vector<RawBond>& bonds) {
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, bond)
    for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
        adj[bonds[b].i].push_back({bonds[b].j, b});
        adj[bonds[b].j].push_back({bonds[b].i, b});
    }

    std::vector<char> in_ring(bonds.size(), 0);
    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;

    struct Frame {
        int v;
        int parent_edge;
        std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<Frame> stack = {{root, -1, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < adj[f.v].size()) {
                auto [to, b] = adj[f.v][f.next++];
                if (b == f.parent_edge) continue;
                if (disc[to] >= 0) {
                    low[f.v] = std::min(low[f.v], disc[to]);
                    in_ring[b] = 1;  // back edge closes a cycle
                } else {
                    disc[to] = low[to] = timer++;
                    stack.push_back({to, b, 0});
                }
            } else {
                const int v = f.v;
                const int pe = f.parent_edge;
                stack.pop_back();
                if (!stack.empty()) {
                    int u = stack.back().v;
                    low[u] = std::min(low[u], low[v]);
                    if (low[v] > disc[u]) {
                        // bridge: stays 0
                    } else {
                        in_ring[pe] = 1;
                    }
                }
            }
        }
    }
    return in_ring;
}

struct ValenceInfo {
    std::vector<int> valences;  // ascending
};

const ValenceInfo& valences_for(Element e) {
    static const ValenceInfo c{{4}}, n{{3}}, o{{2}}, p{{3, 5}}, s{{2, 4, 6}},
        halogen{{1}}, h{{1}};
    switch (e) {
        case Element::C: return c;
        case Element::N: return n;
        case Element::O: return o;
        case Element::P: return p;
        case Element::S: return s;
        case Element::H: return h;
        default: return halogen;
    }
}

}  // namespace

MolecularGraph perceive(const RawMolecule& raw, const RadiiTable& radii,
                        std::string source_id) {
    // Fold explicit [H] atoms into the bonded heavy atom's hydrogen count.
    std::vector<int> remap(raw.atoms.size(), -1);
    std::vector<RawAtom> atoms;
    std::vector<RawBond> bonds;

    std::vector<int> h_bond_count(raw.atoms.size(), 0);
    for (const auto& b : raw.bonds) {
        if (raw.atoms[b.i].element == "H") ++h_bond_count[b.i];
        if (raw.atoms[b.j].element == "H") ++h_bond_count[b.j];
    }
    for (std::size_t a = 0; a < raw.atoms.size(); ++a) {
        const RawAtom& atom = raw.atoms[a];
        if (atom.element == "H") {
            if (atom.charge != 0 || atom.explicit_h != 0 || h_bond_count[a] != 1)
                raise("UnsupportedElement",
                      "explicit hydrogen must be neutral with exactly one bond");
            continue;
        }
        remap[a] = static_cast<int>(atoms.size());
        atoms.push_back(atom);
    }
    if (atoms.empty()) raise("EmptyInput", "molecule has no heavy atoms");

    std::vector<int> extra_h(atoms.size(), 0);
    for (const auto& b : raw.bonds) {
        const bool hi = raw.atoms[b.i].element == "H";
        const bool hj = raw.atoms[b.j].element == "H";
        if (hi && hj)
            raise("UnsupportedElement", "hydrogen bonded to hydrogen");
        if (hi || hj) {
            if (b.sym != BondSym::Implicit && b.sym != BondSym::Single)
                raise("UnsupportedElement", "explicit hydrogen with non-single bond");
            ++extra_h[remap[hi ? b.j : b.i]];
            continue;
        }
        bonds.push_back({remap[b.i], remap[b.j], b.sym});
    }

    const int n = static_cast<int>(atoms.size());
    const std::vector<char> in_ring = ring_edges(n, bonds);

    // Bond orders. An implicit bond between two aromatic atoms is aromatic
    // when it lies on a ring, single otherwise (biphenyl-style links).
    std::vector<double> order(bonds.size());
    std::vector<char> bond_aromatic(bonds.size(), 0);
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        switch (bonds[b].sym) {
            case BondSym::Single: order[b] = 1.0; break;
            case BondSym::Double: order[b] = 2.0; break;
            case BondSym::Triple: order[b] = 3.0; break;
            case BondSym::Aromatic:
                if (!in_ring[b])
                    raise("AromaticBondOutsideRing",
                          "':' bond does not lie on a ring");
                order[b] = 1.5;
                bond_aromatic[b] = 1;
                break;
            case BondSym::Implicit: {
                const bool both_aromatic =
                    atoms[bonds[b].i].aromatic && atoms[bonds[b].j].aromatic;
                if (both_aromatic && in_ring[b]) {
                    order[b] = 1.5;
                    bond_aromatic[b] = 1;
                } else {
                    order[b] = 1.0;
                }
                break;
            }
        }
    }

    std::vector<std::vector<int>> incident(n);
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        incident[bonds[b].i].push_back(static_cast<int>(b));
        incident[bonds[b].j].push_back(static_cast<int>(b));
    }

    std::vector<VertexLabel> vertices(n);
    for (int a = 0; a < n; ++a) {
        const RawAtom& atom = atoms[a];
        VertexLabel& v = vertices[a];
        if (!element_from_symbol(atom.element, v.element))
            raise("UnsupportedElement", "element '" + atom.element + "'");
        v.charge = static_cast<std::int8_t>(atom.charge);
        v.aromatic = atom.aromatic;

        double bond_sum = 0.0;
        int doubles = 0, triples = 0;
        for (int b : incident[a]) {
            bond_sum += order[b];
            if (order[b] == 2.0) ++doubles;
            if (order[b] == 3.0) ++triples;
        }

        // Folded explicit hydrogens consume valence like any other neighbor
        // and come back as part of the hydrogen count.
        int hydrogens;
        if (atom.bracket) {
            hydrogens = atom.explicit_h + extra_h[a];
        } else if (atom.aromatic) {
            // Aromatic bonds count one connection each; the pi system absorbs
            // the remaining valence. Plain n/o/s never carry implicit H.
            int conn = extra_h[a];
            for (int b : incident[a])
                conn += bond_aromatic[b] ? 1 : static_cast<int>(order[b]);
            const int cap = v.element == Element::C   ? 4
                            : v.element == Element::N ? 3
                                                      : 2;
            if (conn > cap)
                raise("ValenceExceeded",
                      "aromatic " + atom.element + " with bond sum " +
                          std::to_string(conn));
            hydrogens = (v.element == Element::C ? std::max(0, 3 - conn) : 0) +
                        extra_h[a];
        } else {
            const int ibsum =
                static_cast<int>(std::floor(bond_sum + 1e-9)) + extra_h[a];
            const auto& val = valences_for(v.element);
            int chosen = -1;
            for (int cand : val.valences) {
                if (cand >= ibsum) {
                    chosen = cand;
                    break;
                }
            }
            if (chosen < 0)
                raise("ValenceExceeded",
                      atom.element + " with bond-order sum " +
                          std::to_string(ibsum) + " exceeds its valence");
            hydrogens = chosen - ibsum + extra_h[a];
        }
        if (hydrogens > 4)
            raise("ValenceExceeded", "perceived hydrogen count exceeds 4");
        v.hydrogens = static_cast<std::uint8_t>(hydrogens);

        if (triples >= 1 || doubles >= 2)
            v.hybridization = Hybridization::Sp;
        else if (v.aromatic || doubles == 1)
            v.hybridization = Hybridization::Sp2;
        else
            v.hybridization = Hybridization::Sp3;
    }

    // Conjugation. A bond is conjugated when aromatic, when a multiple bond
    // shares an atom with another multiple/aromatic bond, or when a single
    // bond joins two atoms that each carry a multiple/aromatic bond.
    std::vector<char> carries_multiple(n, 0);
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        if (order[b] >= 2.0 || bond_aromatic[b]) {
            carries_multiple[bonds[b].i] = 1;
            carries_multiple[bonds[b].j] = 1;
        }
    }
    auto adjacent_multiple = [&](std::size_t b) {
        for (int endpoint : {bonds[b].i, bonds[b].j}) {
            for (int other : incident[endpoint]) {
                if (other == static_cast<int>(b)) continue;
                if (order[other] >= 2.0 || bond_aromatic[other]) return true;
            }
        }
        return false;
    };

    std::vector<MolecularGraph::Edge> edges(bonds.size());
    std::vector<char> vertex_conjugated(n, 0);
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        bool conj = false;
        if (bond_aromatic[b]) {
            conj = true;
        } else if (order[b] >= 2.0) {
            conj = adjacent_multiple(b);
        } else {
            conj = carries_multiple[bonds[b].i] && carries_multiple[bonds[b].j];
        }

        MolecularGraph::Edge& e = edges[b];
        e.i = bonds[b].i;
        e.j = bonds[b].j;
        e.label.order = order[b];
        e.label.aromatic = bond_aromatic[b] != 0;
        e.label.conjugated = conj;
        e.label.ring = in_ring[b] != 0;
        e.sigma = radii.radius(vertices[e.i].element) +
                  radii.radius(vertices[e.j].element);
        e.label.length = radii.order_factor(order[b]) * e.sigma;
        if (conj) {
            vertex_conjugated[e.i] = 1;
            vertex_conjugated[e.j] = 1;
        }
    }
    for (int a = 0; a < n; ++a)
        vertices[a].conjugated = vertex_conjugated[a] != 0;

    return MolecularGraph(std::move(vertices), std::move(edges),
                          std::move(source_id));
}

MolecularGraph graph_from_smiles(std::string_view smiles,
                                 const RadiiTable& radii,
                                 std::string source_id) {
    const auto tokens = tokenize(smiles);
    const auto raw = parse(tokens);
    return perceive(raw, radii, std::move(source_id));
}

}  // namespace solvgp
