"""Torsion factor of the (0;2,3,7) triangle orbisurface in the family of
2N-dimensional representations.

The definition (a sum over elliptic conjugacy classes) and the closed form
built from (nu^2 - 6 nu r + 6 r^2 - 1)/3 agree for every N.  C/2N tends to
chi (2 zeta'(-1) - log sqrt 2pi); N times the deviation stays bounded and
repeats with period 42 = lcm(2, 3, 7).

    python3 demos/demo_torsion.py
"""
from orbizeta import zetafactors as zf
from orbizeta.orbifold import OrbifoldSignature


def main():
    sig = OrbifoldSignature(0, (2, 3, 7))
    limit = zf.torsion_limit(sig)
    print(f"chi = {sig.chi}, limit of C/2N = {limit:.12f}\n")
    print("    N   definition          closed form         N (C/2N - limit)")
    for n in (1, 2, 3, 6, 7, 12, 21, 41, 42, 43, 84, 126, 200):
        c = zf.torsion_factor(sig, zf.yamaguchi_rep(sig, n))
        cf = zf.yamaguchi_torsion_closed_form(sig, n)
        print(f"  {n:3d}  {c: .12e} {cf: .12e}  {n * (c / (2 * n) - limit): .9f}")
    dev = [n * (zf.yamaguchi_torsion_closed_form(sig, n) / (2 * n) - limit) for n in range(1, 2001)]
    print(f"\nmax N|deviation| for N <= 2000: {max(map(abs, dev)):.9f}")
    print(f"period check, N = 5 vs 47 vs 89: {dev[4]:.12f} {dev[46]:.12f} {dev[88]:.12f}")


if __name__ == "__main__":
    main()
