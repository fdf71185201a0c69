"""Decode random strings over the default 21-token alphabet with the reference
SELFIES 1.0.2 decoder and record the resulting SMILES.

    pip install selfies==1.0.2
    python make_selfies_oracle.py ../data/selfies_oracle.tsv

Phosphorus is constrained to 5 bonds to match the toolkit's valence table.
"""
import random
import sys

import selfies as sf

ALPHABET = [
    "[C]", "[=C]", "[#C]", "[O]", "[=O]", "[N]", "[=N]", "[#N]", "[F]", "[S]",
    "[=S]", "[P]", "[Cl]", "[Br]", "[Branch1_1]", "[Branch1_2]", "[Branch1_3]",
    "[Branch2_1]", "[Branch2_2]", "[Ring1]", "[Ring2]",
]


def main(out):
    constraints = sf.get_semantic_constraints()
    constraints["P"] = 5
    sf.set_semantic_constraints(constraints)
    rng = random.Random(7)
    rows = []
    hand = ["[C][C]", "[C][=O]", "[F][F][F]", "[C][C][C][C][C][C][Ring1][Branch1_2]"]
    for s in hand:
        rows.append((s, sf.decoder(s)))
    while len(rows) < 2000:
        n = rng.randint(1, 81)
        s = "".join(rng.choice(ALPHABET) for _ in range(n))
        smi = sf.decoder(s)
        if smi is None or smi == "":
            continue
        rows.append((s, smi))
    with open(out, "w") as fh:
        fh.write("# selfies\tsmiles (reference decoder 1.0.2, P max 5 bonds)\n")
        for s, smi in rows:
            fh.write(f"{s}\t{smi}\n")


if __name__ == "__main__":
    main(sys.argv[1])
