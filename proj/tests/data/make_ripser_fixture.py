# Regenerates ripser_bits.txt / ripser_hamming.ldm / ripser_barcode.json.
# Needs numpy and ripser; run once, outputs are committed.
import json
import numpy as np
from ripser import ripser

rng = np.random.default_rng(20240611)
bits = rng.integers(0, 2, size=(10, 14))
# keep rows distinct so the Hamming matrix has no zero off-diagonal entries
while len({tuple(r) for r in bits}) < 10:
    bits = rng.integers(0, 2, size=(10, 14))

d = (bits[:, None, :] != bits[None, :, :]).sum(axis=2).astype(float)

with open("ripser_bits.txt", "w") as f:
    for r in bits:
        f.write("".join(str(int(b)) for b in r) + "\n")
with open("ripser_hamming.ldm", "w") as f:
    for i in range(1, 10):
        f.write(",".join(str(int(d[i, j])) for j in range(i)) + "\n")

dgms = ripser(d, distance_matrix=True, maxdim=1)["dgms"]
out = []
for dim, dgm in enumerate(dgms):
    bars = sorted((float(b), float(e)) for b, e in dgm if b != e)
    out.append({"dim": dim, "bars": [[b, None if np.isinf(e) else e] for b, e in bars]})
with open("ripser_barcode.json", "w") as f:
    json.dump(out, f)
    f.write("\n")
