"""Day convolution and left Kan extension on tiny categories."""

import itertools

from qsem.presheaflab import (
    all_presheaves,
    day_tensor,
    discrete_monoid,
    finset01,
    is_iso,
    lan,
    pointwise_product,
    strict_monoidal_examples,
    yoneda,
)

# Over Z/3 viewed discretely, Day convolution is convolution of set sizes.
z3 = discrete_monoid(3)
f = next(p for p in all_presheaves(z3.cat, 2) if p.sizes() == {0: 1, 1: 2, 2: 0})
g = next(p for p in all_presheaves(z3.cat, 2) if p.sizes() == {0: 0, 1: 1, 2: 1})
print("f:", f.sizes(), " g:", g.sizes(), " f*g:", day_tensor(z3, f, g).sizes())

# Representables multiply like their objects.
for a, b in itertools.product(z3.cat.objects, repeat=2):
    assert is_iso(day_tensor(z3, yoneda(z3.cat, a), yoneda(z3.cat, b)), yoneda(z3.cat, (a + b) % 3))
print("y(a) * y(b) = y(a + b) on Z/3")

# With a cartesian tensor the convolution is just the pointwise product.
m = finset01()
ps = list(all_presheaves(m.cat, 2))
same = all(is_iso(day_tensor(m, p, q), pointwise_product(p, q)) for p in ps for q in ps)
print(f"cartesian base, {len(ps)} presheaves: Day = pointwise for all pairs: {same}")

# Extending along a strict monoidal functor preserves the tensor.
src, dst, phi = strict_monoidal_examples()[0]
ok = all(
    is_iso(lan(phi, day_tensor(src, p, q)), day_tensor(dst, lan(phi, p), lan(phi, q)))
    for p in all_presheaves(src.cat, 1) for q in all_presheaves(src.cat, 1)
)
print("lan along", src.cat.name, "->", dst.cat.name, "is strong monoidal:", ok)
