"""Build the bundled dataset fixture and the descriptor oracle table.

Requires RDKit (with Contrib/SA_Score) and the MOSES train split
(`train.csv.gz`, shipped inside the `molsets` wheel), a ZINC-derived corpus.

    python make_fixtures.py train.csv.gz ../data

Outputs
  zinc_fixture.smi      1000 SMILES drawn with random.Random(20210401)
  corpus_250k.smi       250000 SMILES (same draw, superset) used to build the
                        fragment table with `molga fragdb` (not shipped)
  descriptor_oracle.tsv first 100 fixture molecules with RDKit Crippen logP
                        and SA score
"""
import gzip
import os
import random
import sys

from rdkit import Chem, RDConfig, RDLogger
from rdkit.Chem import Crippen

sys.path.append(os.path.join(RDConfig.RDContribDir, "SA_Score"))
import sascorer  # noqa: E402

RDLogger.DisableLog("rdApp.*")


def main(train, out):
    with gzip.open(train, "rt") as fh:
        lines = [l.strip() for l in fh.read().split("\n")[1:] if l.strip()]
    rng = random.Random(20210401)
    sample = rng.sample(lines, 250000)
    with open(os.path.join(out, "corpus_250k.smi"), "w") as fh:
        fh.write("\n".join(sample) + "\n")
    fixture = sample[:1000]
    with open(os.path.join(out, "zinc_fixture.smi"), "w") as fh:
        fh.write("\n".join(fixture) + "\n")
    with open(os.path.join(out, "descriptor_oracle.tsv"), "w") as fh:
        fh.write("# smiles\tcrippen_logp\tsa_score\n")
        for smi in fixture[:100]:
            m = Chem.MolFromSmiles(smi)
            fh.write(f"{smi}\t{Crippen.MolLogP(m):.4f}\t{sascorer.calculateScore(m):.4f}\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
