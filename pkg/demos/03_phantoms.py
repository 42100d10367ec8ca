"""Phantom maps from ind-complexes, and the sequence that does not split.

Run with ``python demos/03_phantoms.py``.
"""
import random

from phantomlab.padic import SumFamily, pinf_witness, w_certificate
from phantomlab.phantom import (
    composite_stagewise_check,
    moore_tower,
    nonsplit_certificate,
    phantom_em,
    phantom_group,
    random_phantom_pair,
)
from phantomlab.towers import prufer_tower

# The ind-system of Moore complexes for Z/p^k has phantoms into the sum of Z/p^k, and only in degree -1.
B = SumFamily(2)
print("phantoms from the Moore tower:", phantom_group(moore_tower(2), B).pext_result.status)
for k in (-2, -1, 0):
    print(f"  degree {k}: zero={phantom_em(k, prufer_tower(2), B).is_zero}")

# The witness behind it: an element of p^inf of the Ext-completion, torsion-free through p^10.
w = pinf_witness(B, 10, precision=40)
print("witness nonzero:", w.nonzero, "| p^k w nonzero for k <= 10:", all(w.scaled_nonzero.values()))
print("certificate:", w_certificate(B, 10, precision=40).claims)

# Composites of phantoms vanish; the checker also builds the splitting of the spliced extension.
f, g = random_phantom_pair(random.Random(5))
c = composite_stagewise_check(f, g, truncation=20)
print(f"composite with {c.g_kind}: all stages null={c.all_null}, certificate ok={c.ok}")

# The sum of Z into the product of Z: the image of (2^k) is 2^j-divisible modulo finite support for every j,
# yet no single preimage exists, so the sequence does not split.
cert = nonsplit_certificate(30, 40)
print("non-split certificate valid:", cert.valid, "| obstruction at index", cert.obstruction["i"])
