"""
Transversals of polygons in rational coordinates
================================================

A line crossing every side line of an n-gon cuts each side in a ratio; the
product of the n ratios is exactly 1.  Everything here is exact.
"""

from ineqcert.generate import gen_polygon_and_transversal, instance_rng
from ineqcert.menelaus import Line, Polygon, diagonal_cuts, transversal_points

square = Polygon(((0, 0), (4, 0), (4, 4), (0, 4)))
d = Line(1, -2, -2)  # x - 2y = 2
tv = transversal_points(square, d)
for M, r in zip(tv.points, tv.ratios):
    print(f"point ({M.x}, {M.y})  ratio {r}")
print("product:", tv.product)

# %%
# Cutting along a diagonal gives a triangle and a smaller polygon, each of
# which satisfies the same identity.

for step in diagonal_cuts(square, d):
    print(f"cut at ({step.cut_point.x}, {step.cut_point.y})", "| triangle", step.triangle_product,
          "| remainder", step.remainder_product)

# %%
# Random configurations: the product stays exactly 1 for every size.

for n in (3, 5, 8, 12):
    products = {transversal_points(*gen_polygon_and_transversal(n, instance_rng(0, i))).product
                for i in range(100)}
    print(f"n = {n:2d}: distinct products over 100 configurations = {products}")
