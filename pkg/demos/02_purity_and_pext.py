"""Pure extensions, lim^1 and PExt of the Prufer group.

Run with ``python demos/02_purity_and_pext.py``.
"""
import random

from phantomlab.fgab import FgGroup
from phantomlab.homalg import ext_class, ext_group, realize_extension
from phantomlab.padic import SumFamily
from phantomlab.purity import METHODS, pure_check, random_ses
from phantomlab.towers import lim_and_lim1, multiplication_tower, pext_ind, prufer_tower

# Z/2 -> Z/4 -> Z/2 is not pure; every method finds a witness that can be rechecked.
s = realize_extension(ext_group(FgGroup.cyclic(2), FgGroup.cyclic(2)).element([1]))
for m in METHODS:
    v = pure_check(s, m)
    print(f"{m:>14}: pure={v.pure} witness={v.witness}")

# Over finitely generated groups purity is the same as splitting.
rng = random.Random(1)
agree = 0
for _ in range(50):
    s = random_ses(rng)
    agree += all(pure_check(s, m).pure == ext_class(s).is_zero() for m in METHODS)
print(f"methods agree with splitting on {agree}/50 random sequences")

# lim^1 of Z <-p- Z <-p- ... is Z_p / Z, with a p-adic witness that is not an integer.
r = lim_and_lim1(multiplication_tower(3), precision=20)
print("lim^1 of the 3-tower:", r.lim1_description, "| witness", r.witness["rational"])

# PExt of the Prufer group: zero into Z^r and Z/p^m, nonzero into the sum of Z/p^k.
T = prufer_tower(2)
for B in (FgGroup.free(2), FgGroup.cyclic(8), SumFamily(2)):
    rep = pext_ind(T, B)
    print(f"PExt(Z/2^inf, {B}): {rep.status}")
