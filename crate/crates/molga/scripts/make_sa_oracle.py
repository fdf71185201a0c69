"""Add the `sa_score_corpus_table` column to descriptor_oracle.tsv.

Recomputes the SA score with RDKit primitives, but with fragment scores
rebuilt from corpus_250k.smi instead of the stock ChEMBL table, so it is
directly comparable with `molga fragdb` output built from that corpus.

    python make_sa_oracle.py corpus_250k.smi ../data/descriptor_oracle.tsv
"""
import math
import sys
from collections import Counter

from rdkit import Chem, RDLogger
from rdkit.Chem import rdFingerprintGenerator, rdMolDescriptors

RDLogger.DisableLog("rdApp.*")
GEN = rdFingerprintGenerator.GetMorganGenerator(radius=2)


def fragment_scores(corpus):
    cnt = Counter()
    with open(corpus) as fh:
        for line in fh:
            m = Chem.MolFromSmiles(line.split()[0])
            if m is None:
                continue
            cnt.update(GEN.GetSparseCountFingerprint(m).GetNonzeroElements())
    items = sorted(cnt.items(), key=lambda kv: -kv[1])
    total = sum(v for _, v in items)
    running, n80 = 0, 0
    for i, (_, v) in enumerate(items):
        running += v
        if running < 0.8 * total:
            n80 = i
    scores = {k: round(math.log10(v / n80), 4) for k, v in items}
    return scores, min(scores.values()) - 1


def sa(m, scores, floor):
    fp = GEN.GetSparseCountFingerprint(m).GetNonzeroElements()
    s1 = sum(scores.get(k, floor) * v for k, v in fp.items()) / sum(fp.values())
    n = m.GetNumAtoms()
    nb = rdMolDescriptors.CalcNumBridgeheadAtoms(m)
    ns = rdMolDescriptors.CalcNumSpiroAtoms(m)
    macro = any(len(r) > 8 for r in m.GetRingInfo().AtomRings())
    s2 = -(n**1.005 - n) - math.log10(ns + 1) - math.log10(nb + 1)
    if macro:
        s2 -= math.log10(2)
    s3 = 0.5 * math.log(n / len(fp)) if n > len(fp) else 0.0
    x = 11 - (s1 + s2 + s3 + 5) / 6.5 * 9
    if x > 8:
        x = 8 + math.log(x - 8)
    return min(max(x, 1.0), 10.0)


def main(corpus, oracle):
    scores, floor = fragment_scores(corpus)
    with open(oracle) as fh:
        rows = [l.rstrip("\n").split("\t")[:3] for l in fh if not l.startswith("#")]
    with open(oracle, "w") as fh:
        fh.write("# smiles\tcrippen_logp\tsa_score\tsa_score_corpus_table\n")
        for r in rows:
            x = sa(Chem.MolFromSmiles(r[0]), scores, floor)
            fh.write("\t".join(r + [f"{x:.4f}"]) + "\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
