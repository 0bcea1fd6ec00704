#!/usr/bin/env python3
"""Generate data/solvation_588.csv, the bundled demonstration dataset.

588 neutral organic molecules over C,H,O,N,P,S,F,Cl,Br,I, written as
achiral SMILES within the grammar the parser accepts (no stereo markers,
no isotopes, no disconnected fragments).

The `target` column is NOT experimental data. Each value is a synthetic
hydration-free-energy-style number in kcal/mol from a group-contribution
surrogate:

    target = 1.55
           + 0.17 * (sp3 carbons) - 0.05 * (aromatic carbons)
           + sum over functional groups of a fixed per-group contribution
           + noise(smiles)

where noise is a deterministic hash-derived term in [-0.3, +0.3] that
stands in for measurement scatter. The map is graph-local by construction,
which makes the dataset a meaningful end-to-end regression benchmark at
the scale of a small public solvation corpus. To benchmark against real
measurements instead, export any dataset to the same `id,smiles,target`
columns and point the CLI at it.

Usage: python3 tools/make_synthetic_solvation_csv.py > data/solvation_588.csv
"""

import hashlib
import sys

BASE = 1.55
PER_SP3_C = 0.17
PER_AROM_C = -0.05

GROUPS = {
    "oh": -6.0,          # hydroxyl
    "ether": -2.1,
    "aldehyde": -3.2,
    "ketone": -3.6,
    "acid": -6.6,
    "ester": -3.4,
    "amine1": -4.5,
    "amine2": -4.0,
    "amine3": -3.4,
    "amide": -8.5,
    "nitrile": -3.9,
    "nitro": -3.9,
    "thiol": -1.3,
    "sulfide": -1.5,
    "disulfide": -1.9,
    "f": -0.2,
    "cl": -0.5,
    "br": -0.9,
    "i": -1.1,
    "arom_ring": -1.0,   # per aromatic ring
    "ali_ring": -0.2,    # per aliphatic ring
    "pyridine_n": -3.4,
    "furan_o": -1.2,
    "thiophene_s": -0.8,
    "pyrrole_nh": -4.7,
    "phosphate": -8.0,
    "alkene": -0.3,
    "alkyne": -0.6,
}


def noise(smiles: str) -> float:
    h = int(hashlib.sha1(smiles.encode()).hexdigest()[:8], 16)
    return (h / 0xFFFFFFFF - 0.5) * 0.6


def record_id(smiles: str) -> str:
    return hashlib.sha1(smiles.encode()).hexdigest()[:12]


def target(smiles: str, sp3c: int, aromc: int, groups: dict) -> float:
    t = BASE + PER_SP3_C * sp3c + PER_AROM_C * aromc
    for name, count in groups.items():
        t += GROUPS[name] * count
    return round(t + noise(smiles), 4)


MOLS = []  # (smiles, sp3_carbons, aromatic_carbons, {group: count})


def add(smiles, sp3c, aromc, **groups):
    MOLS.append((smiles, sp3c, aromc, groups))


def chain(n):
    return "C" * n


# --- alkanes, branched alkanes, cycloalkanes ---------------------------------
for n in range(1, 11):
    add(chain(n), n, 0)
for n in range(4, 11):
    add("CC(C)" + chain(n - 3), n, 0)                 # 2-methyl
for n in range(5, 9):
    add("CC(C)(C)" + chain(n - 4), n, 0)              # 2,2-dimethyl
for n in range(6, 9):
    add("CCC(CC)" + chain(n - 5), n, 0)               # 3-ethyl
for n in range(3, 9):
    add("C1" + chain(n - 2) + "C1", n, 0, ali_ring=1)  # cycloalkanes
for n in range(3, 7):
    add("CC1" + chain(n - 2) + "C1", n + 1, 0, ali_ring=1)

# --- alkenes, dienes, alkynes -------------------------------------------------
for n in range(2, 9):
    add("C=C" + chain(n - 2), n, 0, alkene=1)
for n in range(4, 9):
    add("CC=C" + chain(n - 3), n, 0, alkene=1)
add("C=CC=C", 4, 0, alkene=2)
add("C=CCC=C", 5, 0, alkene=2)
add("CC=CC=C", 5, 0, alkene=2)
for n in range(2, 8):
    add("C#C" + chain(n - 2), n, 0, alkyne=1)

# --- alcohols, diols, ethers --------------------------------------------------
for n in range(1, 11):
    add(chain(n) + "O", n, 0, oh=1)
for n in range(3, 9):
    add("CC(O)" + chain(n - 2), n, 0, oh=1)           # 2-ols
for n in range(4, 7):
    add("CC(C)(O)" + chain(n - 3), n, 0, oh=1)        # tertiary
add("OCCO", 2, 0, oh=2)
add("OCCCO", 3, 0, oh=2)
add("OCCCCO", 4, 0, oh=2)
add("OCC(O)CO", 3, 0, oh=3)
for a in range(1, 5):
    for b in range(1, 4):
        if (a, b) in ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 3)):
            add(chain(a) + "O" + chain(b), a + b, 0, ether=1)
add("C1CCOC1", 4, 0, ether=1, ali_ring=1)             # tetrahydrofuran
add("C1CCOCC1", 5, 0, ether=1, ali_ring=1)            # tetrahydropyran
add("C1COCCO1", 4, 0, ether=2, ali_ring=1)            # dioxane
add("COCCOC", 4, 0, ether=2)
add("COCCO", 3, 0, ether=1, oh=1)

# --- aldehydes, ketones -------------------------------------------------------
for n in range(1, 9):
    add(chain(n) + "C=O", n, 0, aldehyde=1)
for a in range(1, 5):
    for b in range(1, 4):
        if a >= b and (a, b) != (4, 3):
            add(chain(a) + "C(=O)" + chain(b), a + b, 0, ketone=1)
add("CC(=O)CC(C)C", 5, 0, ketone=1)
add("C1CCC(=O)CC1", 5, 0, ketone=1, ali_ring=1)       # cyclohexanone

# --- acids, esters ------------------------------------------------------------
for n in range(1, 9):
    add(chain(n) + "C(=O)O", n, 0, acid=1)
for a in range(1, 5):
    for b in range(1, 5):
        if a + b <= 7:
            add(chain(a) + "C(=O)O" + chain(b), a + b, 0, ester=1)
add("COC(=O)OC", 2, 0, ester=2)

# --- amines, amides, nitriles, nitro ------------------------------------------
for n in range(1, 9):
    add(chain(n) + "N", n, 0, amine1=1)
for a in range(1, 5):
    for b in range(1, 3):
        if a >= b:
            add(chain(a) + "N" + chain(b), a + b, 0, amine2=1)
add("CN(C)C", 3, 0, amine3=1)
add("CCN(CC)CC", 6, 0, amine3=1)
add("CN(C)CC", 4, 0, amine3=1)
add("NCCN", 2, 0, amine1=2)
add("NCCCN", 3, 0, amine1=2)
add("CC(=O)N", 2, 0, amide=1)
add("CC(=O)NC", 3, 0, amide=1)
add("CCC(=O)N", 3, 0, amide=1)
add("CC(=O)N(C)C", 4, 0, amide=1)
add("CCC(=O)NC", 4, 0, amide=1)
for n in range(1, 7):
    add(chain(n) + "C#N", n, 0, nitrile=1)
for n in range(1, 5):
    add(chain(n) + "[N+](=O)[O-]", n, 0, nitro=1)

# --- sulfur and phosphorus ----------------------------------------------------
for n in range(1, 6):
    add(chain(n) + "S", n, 0, thiol=1)
for a in range(1, 4):
    for b in range(1, 3):
        if a >= b:
            add(chain(a) + "S" + chain(b), a + b, 0, sulfide=1)
add("CSSC", 2, 0, disulfide=1)
add("CCSSCC", 4, 0, disulfide=1)
add("COP(=O)(OC)OC", 3, 0, phosphate=1, ether=3)
add("CCOP(=O)(OCC)OCC", 6, 0, phosphate=1, ether=3)

# --- halogenated aliphatics ---------------------------------------------------
for sym, tag in (("F", "f"), ("Cl", "cl"), ("Br", "br"), ("I", "i")):
    for n in range(1, 7):
        add(chain(n) + sym, n, 0, **{tag: 1})
add("ClCCl", 1, 0, cl=2)
add("ClC(Cl)Cl", 1, 0, cl=3)
add("ClC(Cl)(Cl)Cl", 1, 0, cl=4)
add("ClCCCl", 2, 0, cl=2)
add("FC(F)F", 1, 0, f=3)
add("FC(F)(F)C", 2, 0, f=3)
add("BrCCBr", 2, 0, br=2)
add("ClCCBr", 2, 0, cl=1, br=1)
add("FCCO", 2, 0, f=1, oh=1)
add("ClCCO", 2, 0, cl=1, oh=1)
add("BrCCO", 2, 0, br=1, oh=1)
add("ClCC(=O)O", 2, 0, cl=1, acid=1)
add("FC(F)(F)C(=O)O", 2, 0, f=3, acid=1)

# --- benzene derivatives ------------------------------------------------------
SUBS = {
    "C": (1, {}), "CC": (2, {}), "CCC": (3, {}), "C(C)C": (3, {}),
    "O": (0, {"oh": 1}), "OC": (1, {"ether": 1}),
    "N": (0, {"amine1": 1}), "NC": (1, {"amine2": 1}),
    "F": (0, {"f": 1}), "Cl": (0, {"cl": 1}), "Br": (0, {"br": 1}),
    "I": (0, {"i": 1}), "C#N": (0, {"nitrile": 1}),
    "[N+](=O)[O-]": (0, {"nitro": 1}), "C=O": (0, {"aldehyde": 1}),
    "C(C)=O": (1, {"ketone": 1}), "C(=O)O": (0, {"acid": 1}),
    "C(=O)OC": (1, {"ester": 1}), "OC(C)=O": (1, {"ester": 1}),
    "S": (0, {"thiol": 1}), "SC": (1, {"sulfide": 1}),
    "CO": (1, {"oh": 1}), "CC=O": (1, {"aldehyde": 1}),
    "C=C": (0, {"alkene": 1}),
}

add("c1ccccc1", 0, 6, arom_ring=1)


def merge(*dicts):
    out = {}
    for d in dicts:
        for k, v in d.items():
            out[k] = out.get(k, 0) + v
    return out


for frag, (sp3, groups) in SUBS.items():
    add(f"c1ccc({frag})cc1", sp3, 6, **merge({"arom_ring": 1}, groups))

PAIR_SUBS = ["C", "O", "Cl", "Br", "N", "OC", "[N+](=O)[O-]", "F", "C(=O)O", "C=O"]
for i, x in enumerate(PAIR_SUBS):
    for y in PAIR_SUBS[i:]:
        gx, gy = SUBS[x][1], SUBS[y][1]
        sp3 = SUBS[x][0] + SUBS[y][0]
        for template in (f"c1cc({x})ccc1{y}",      # para
                         f"c1cc({x})cc({y})c1",    # meta
                         f"c1ccc({x})c({y})c1"):   # ortho
            add(template, sp3, 6, **merge({"arom_ring": 1}, gx, gy))

# trisubstituted and bulkier aromatics
add("Cc1cc(C)cc(C)c1", 3, 6, arom_ring=1)             # mesitylene
add("Cc1ccc(C)c(C)c1", 3, 6, arom_ring=1)
add("Oc1cc(Cl)cc(Cl)c1", 0, 6, arom_ring=1, oh=1, cl=2)
add("Clc1cc(Cl)c(Cl)cc1", 0, 6, arom_ring=1, cl=3)
add("Cc1ccc(O)cc1C", 2, 6, arom_ring=1, oh=1)
add("CCc1ccccc1CC", 4, 6, arom_ring=1)
add("CCCCc1ccccc1", 4, 6, arom_ring=1)
add("CCCCCCc1ccccc1", 6, 6, arom_ring=1)
add("CC(C)c1ccc(C)cc1", 4, 6, arom_ring=1)
add("COc1ccc(C=O)cc1", 1, 6, arom_ring=1, ether=1, aldehyde=1)
add("COc1ccc(CC=C)cc1", 3, 6, arom_ring=1, ether=1, alkene=1)
add("CCOC(=O)c1ccccc1", 3, 6, arom_ring=1, ester=1)
add("CC(=O)Nc1ccccc1", 2, 6, arom_ring=1, amide=1)
add("CN(C)c1ccccc1", 2, 6, arom_ring=1, amine3=1)
add("OCc1ccccc1", 1, 6, arom_ring=1, oh=1)
add("OCCc1ccccc1", 2, 6, arom_ring=1, oh=1)
add("NCc1ccccc1", 1, 6, arom_ring=1, amine1=1)
add("ClCc1ccccc1", 1, 6, arom_ring=1, cl=1)
add("CCOC(=O)c1ccccc1C(=O)OCC", 6, 6, arom_ring=1, ester=2)
add("COC(=O)c1ccccc1C(=O)OC", 4, 6, arom_ring=1, ester=2)
add("CCCCOC(=O)c1ccccc1", 5, 6, arom_ring=1, ester=1)

# --- fused and hetero aromatics -----------------------------------------------
add("c1ccc2ccccc2c1", 0, 10, arom_ring=2)             # naphthalene
add("Cc1ccc2ccccc2c1", 1, 10, arom_ring=2)
add("Oc1ccc2ccccc2c1", 0, 10, arom_ring=2, oh=1)
add("c1ccc2cc3ccccc3cc2c1", 0, 14, arom_ring=3)       # anthracene
add("C1Cc2ccccc2C1", 3, 6, arom_ring=1, ali_ring=1)   # indane
add("C1CCc2ccccc2C1", 4, 6, arom_ring=1, ali_ring=1)  # tetralin

add("c1ccncc1", 0, 5, arom_ring=1, pyridine_n=1)
add("Cc1ccncc1", 1, 5, arom_ring=1, pyridine_n=1)
add("Cc1ccccn1", 1, 5, arom_ring=1, pyridine_n=1)
add("Cc1ccccn1", 1, 5, arom_ring=1, pyridine_n=1)
add("CCc1ccncc1", 2, 5, arom_ring=1, pyridine_n=1)
add("c1ccc2ncccc2c1", 0, 9, arom_ring=2, pyridine_n=1)  # quinoline
add("c1cnccn1", 0, 4, arom_ring=1, pyridine_n=2)        # pyrazine
add("c1ccoc1", 0, 4, arom_ring=1, furan_o=1)
add("Cc1ccoc1", 1, 4, arom_ring=1, furan_o=1)
add("Cc1ccco1", 1, 4, arom_ring=1, furan_o=1)
add("c1ccsc1", 0, 4, arom_ring=1, thiophene_s=1)
add("Cc1cccs1", 1, 4, arom_ring=1, thiophene_s=1)
add("c1cc[nH]c1", 0, 4, arom_ring=1, pyrrole_nh=1)
add("Cc1ccc[nH]1", 1, 4, arom_ring=1, pyrrole_nh=1)
add("c1cnc[nH]1", 0, 3, arom_ring=1, pyrrole_nh=1, pyridine_n=1)  # imidazole

# --- substituted heteroaromatics -----------------------------------------------
HETERO_FRAGS = ["C", "CC", "CO", "C=O", "C(C)=O", "C(=O)O", "C(=O)OC", "C#N",
                "Cl", "Br"]
for frag in HETERO_FRAGS:
    sp3, groups = SUBS[frag]
    add(f"c1cc({frag})ccn1", sp3, 5,
        **merge({"arom_ring": 1, "pyridine_n": 1}, groups))
    add(f"c1cc({frag})oc1", sp3, 4,
        **merge({"arom_ring": 1, "furan_o": 1}, groups))
    add(f"c1cc({frag})sc1", sp3, 4,
        **merge({"arom_ring": 1, "thiophene_s": 1}, groups))
    add(f"c1cc({frag})[nH]c1", sp3, 4,
        **merge({"arom_ring": 1, "pyrrole_nh": 1}, groups))
for frag in HETERO_FRAGS[:8]:
    sp3, groups = SUBS[frag]
    add(f"c1ccc2cc({frag})ccc2c1", sp3, 10,
        **merge({"arom_ring": 2}, groups))

# --- wider aliphatic series -----------------------------------------------------
for n in (9, 10):
    add(chain(n) + "C=O", n, 0, aldehyde=1)
for n in range(4, 9):
    add("CCC(O)" + chain(n - 3), n, 0, oh=1)          # 3-ols
for a in range(1, 6):
    for b in range(1, a + 1):
        if (a, b) not in ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 3)):
            add(chain(a) + "O" + chain(b), a + b, 0, ether=1)
for a in range(4, 6):
    for b in range(1, 5):
        if a >= b and a + b <= 9 and not (a <= 4 and b <= 3):
            add(chain(a) + "C(=O)" + chain(b), a + b, 0, ketone=1)
for a in range(1, 6):
    for b in range(1, 6):
        if 7 < a + b <= 9:
            add(chain(a) + "C(=O)O" + chain(b), a + b, 0, ester=1)
for a in range(4, 6):
    for b in range(1, 4):
        add(chain(a) + "N" + chain(b), a + b, 0, amine2=1)
for sym, tag in (("F", "f"), ("Cl", "cl"), ("Br", "br"), ("I", "i")):
    for n in (7, 8):
        add(chain(n) + sym, n, 0, **{tag: 1})
for n in (7, 8):
    add(chain(n) + "C#N", n, 0, nitrile=1)
    add(chain(n) + "S", n, 0, thiol=1)
for n in (5, 6):
    add(chain(n) + "[N+](=O)[O-]", n, 0, nitro=1)
    add("OCC" + chain(n) + "O", n + 2, 0, oh=2)
for n in range(9, 12):
    add(chain(n) + "O", n, 0, oh=1)
    add(chain(n) + "C(=O)O", n, 0, acid=1)
for n in (9, 10, 11, 12):
    add(chain(n), n, 0)
add("CC(C)CC(C)(C)C", 8, 0)
add("CCC(C)(C)CC", 7, 0)
add("CCCC(CC)CC", 8, 0)
add("CC(C)CC(C)C", 7, 0)
add("C1CCCCCC1", 7, 0, ali_ring=1)
add("C1CCCCCCC1", 8, 0, ali_ring=1)
add("CC1CCCCC1C", 8, 0, ali_ring=1)
add("CCC1CCCCC1", 8, 0, ali_ring=1)
add("C1CCC(O)CC1", 6, 0, oh=1, ali_ring=1)
add("C1CCC(N)CC1", 6, 0, amine1=1, ali_ring=1)
add("CC1CCC(C)CC1", 8, 0, ali_ring=1)
add("C1CCC(CC1)C(=O)O", 6, 0, acid=1, ali_ring=1)

# --- multifunctional aliphatics to round out the pool -------------------------
add("CC(O)CO", 3, 0, oh=2)
add("CCC(O)CC", 5, 0, oh=1)
add("CC(C)CO", 4, 0, oh=1)
add("CC(C)CCO", 5, 0, oh=1)
add("CCCCCCCCO", 8, 0, oh=1)
add("CCCCCC(O)C", 7, 0, oh=1)
add("CCOCCO", 4, 0, ether=1, oh=1)
add("COCCOC", 4, 0, ether=2)
add("CC(=O)CO", 3, 0, ketone=1, oh=1)
add("CC(=O)CC(C)=O", 5, 0, ketone=2)
add("OCC=O", 2, 0, oh=1, aldehyde=1)
add("CC(O)C(=O)O", 3, 0, oh=1, acid=1)
add("OCC(=O)O", 2, 0, oh=1, acid=1)
add("CC(=O)OCCO", 4, 0, ester=1, oh=1)
add("NCCO", 2, 0, amine1=1, oh=1)
add("CNCCO", 3, 0, amine2=1, oh=1)
add("NCCCO", 3, 0, amine1=1, oh=1)
add("NCC(=O)O", 2, 0, amine1=1, acid=1)
add("CSCCO", 3, 0, sulfide=1, oh=1)
add("CSCC=O", 3, 0, sulfide=1, aldehyde=1)
add("N#CCO", 1, 0, nitrile=1, oh=1)
add("N#CCC#N", 2, 0, nitrile=2)
add("ClCCOCCCl", 4, 0, cl=2, ether=1)
add("ClCC=C", 3, 0, cl=1, alkene=1)
add("BrCC=C", 3, 0, br=1, alkene=1)
add("C=CCO", 3, 0, alkene=1, oh=1)
add("C=CCCO", 4, 0, alkene=1, oh=1)
add("C#CCO", 3, 0, alkyne=1, oh=1)
add("CC=CC=O", 4, 0, alkene=1, aldehyde=1)
add("CC=CC(=O)O", 4, 0, alkene=1, acid=1)
add("COC=O", 2, 0, ester=1)
add("CCOC=O", 3, 0, ester=1)
add("CCCOC=O", 4, 0, ester=1)
add("CN(C)C=O", 3, 0, amide=1)
add("CCN(C)C=O", 4, 0, amide=1)
add("O=CN", 1, 0, amide=1)
add("O=CNC", 2, 0, amide=1)

# ------------------------------------------------------------------------------


def main():
    seen = set()
    rows = []
    for smiles, sp3c, aromc, groups in MOLS:
        if smiles in seen:
            continue
        seen.add(smiles)
        rows.append((record_id(smiles), smiles,
                     target(smiles, sp3c, aromc, groups)))
    if len(rows) < 588:
        sys.exit(f"pool too small: {len(rows)} < 588")
    rows = rows[:588]
    ids = {r[0] for r in rows}
    if len(ids) != 588:
        sys.exit("id collision")
    out = sys.stdout
    out.write("id,smiles,target\n")
    for rid, smiles, t in rows:
        out.write(f"{rid},{smiles},{t}\n")


if __name__ == "__main__":
    main()
