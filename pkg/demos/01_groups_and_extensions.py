"""Finitely generated abelian groups, Hom and Ext, and extensions you can hold.

Run with ``python demos/01_groups_and_extensions.py``.
"""
from phantomlab.fgab import FgGroup, GroupMap, ShortExact, presentation
from phantomlab.homalg import baer_sum_sequences, ext_class, ext_group, hom_group, realize_extension, six_term

# A group from generators and relations: x, y with 2x = 0 and 4x + 6y = 0.
G = presentation([[2, 4], [0, 6]], 2).group
print("generated by x, y with 2x = 0, 4x + 6y = 0:", G)

# Hom and Ext split over cyclic pieces; the answers come back in invariant-factor form.
A, B = FgGroup(1, (4,)), FgGroup(0, (2, 6))
print(f"Hom({A}, {B}) =", hom_group(A, B).group)
print(f"Ext({A}, {B}) =", ext_group(A, B).group)

# Ext(Z/4, Z/4) is cyclic of order 4. Each class is an honest extension.
E = ext_group(FgGroup.cyclic(4), FgGroup.cyclic(4))
for u in E.classes():
    s = realize_extension(u)
    print(f"  class {u.value.coords}: 0 -> Z/4 -> {s.middle} -> Z/4 -> 0")

# The Baer sum of two sequences, built from middle groups alone, lands on the sum of the classes.
g = E.element([1])
s = baer_sum_sequences(realize_extension(g), realize_extension(g))
print("Baer sum of the generator with itself has class", ext_class(s).value.coords,
      "and middle group", s.middle)

# The six-term sequence for 0 -> Z --2--> Z -> Z/2 -> 0 and n = 2.
Z = FgGroup.free(1)
st = six_term(ShortExact(GroupMap.multiplication(Z, 2), GroupMap(Z, FgGroup.cyclic(2), [[1]])), 2)
print("groups:", ", ".join(str(x) for x in st.groups), "| exact:", st.is_exact)
