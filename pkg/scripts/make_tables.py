"""Print the superreduced / kernel table, the Q_i and the correction densities."""

from treewalks.density import standard_densities
from treewalks.exactalg.poly import format_poly
from treewalks.gf import extract_S_xi, kernel_gf, superreduced_gf
from treewalks.moments import compute_Vi

XI_MAX = 5

S = superreduced_gf(XI_MAX)
print("xi | S_xi(z) | K_xi(u, 1, z)")
for xi in range(XI_MAX + 1):
    print(f"{xi} | {format_poly(extract_S_xi(S, xi).coeffs, 'z')} | {kernel_gf(xi).to_text()}")
print()
for i in range(6):
    print(f"Q_{i}(x) = {compute_Vi(i).Q}")
print()
for i, d in enumerate(standard_densities()):
    print(f"f_{i}: ({format_poly(d.P.to_poly().coeffs, 'z')}) sqrt(4 - z^2) / (2 pi)")
