"""Writes the germ fixture corpus to fixtures/germs/."""
import json
import pathlib
from fractions import Fraction as F

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "germs"

def s(x):
    x = F(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

def ident(d):
    return [[1 if i == j else 0 for j in range(d)] for i in range(d)]

def germ(n, nbar, pi, sigma_bar, fan, rays):
    return {
        "N": [[s(x) for x in row] for row in n],
        "Nbar": [[s(x) for x in row] for row in nbar],
        "pi": pi,
        "sigma_bar": [[s(x) for x in row] for row in sigma_bar],
        "fan": fan,
        "rays": [{"e": [s(x) for x in e], "a": s(a)} for e, a in rays],
    }

def affine(n, rays):
    d = len(n)
    return germ(n, n, ident(d), [e for e, _ in rays], [list(range(len(rays)))], rays)

def over_point(d, fan, rays):
    return germ(ident(d), [], [], [], fan, rays)

def quotient_basis(d, gen):
    # Basis of Z^d + Z*gen when gen has a unit-denominator-free first entry 1/m with m coprime handling:
    # the generator replaces the first standard vector, which it generates back when gcd(num, m) = 1.
    return [list(gen)] + [[1 if i == j else 0 for j in range(d)] for i in range(1, d)]

def weighted_blowup(w, a_e, a_axes=None):
    d = len(w)
    a_axes = a_axes or [1] * d
    axes = [([1 if i == j else 0 for j in range(d)], a_axes[i]) for i in range(d)]
    rays = axes + [(list(w), a_e)]
    fan = [[k for k in range(d) if k != i] + [d] for i in range(d)]
    return germ(ident(d), ident(d), ident(d), [e for e, _ in axes], fan, rays)

def p1_times_affine(d, a0=1, ainf=1, coeffs=None):
    # Fiber coordinate first; base is the remaining d-1 coordinates.
    coeffs = coeffs or [1] * (d - 1)
    e = lambda i: [1 if j == i else 0 for j in range(d)]
    neg = [-1] + [0] * (d - 1)
    rays = [(e(0), a0), (neg, ainf)] + [(e(i), coeffs[i - 1]) for i in range(1, d)]
    base = list(range(2, d + 1))
    fan = [[0] + base, [1] + base]
    pi = [e(i) for i in range(1, d)]
    return germ(ident(d), ident(d - 1), pi, ident(d - 1), fan, rays)

CORPUS = {
    "a1_half": affine(ident(1), [([1], F(1, 2))]),
    "a1_smooth": affine(ident(1), [([1], 1)]),
    "a2_smooth": affine(ident(2), [([1, 0], 1), ([0, 1], 1)]),
    "a2_half_half": affine(ident(2), [([1, 0], F(1, 2)), ([0, 1], F(1, 2))]),
    "a2_zero_ray": affine(ident(2), [([1, 0], 1), ([0, 1], 0)]),
    "quot_1_2_11": affine(quotient_basis(2, [F(1, 2), F(1, 2)]), [([1, 0], 1), ([0, 1], 1)]),
    "quot_1_3_11": affine(quotient_basis(2, [F(1, 3), F(1, 3)]), [([1, 0], 1), ([0, 1], 1)]),
    "quot_1_3_12": affine(quotient_basis(2, [F(1, 3), F(2, 3)]), [([1, 0], 1), ([0, 1], 1)]),
    "quot_1_5_12": affine(quotient_basis(2, [F(1, 5), F(2, 5)]), [([1, 0], 1), ([0, 1], 1)]),
    "quot_1_4_11_half": affine(quotient_basis(2, [F(1, 4), F(1, 4)]), [([1, 0], F(1, 2)), ([0, 1], 1)]),
    "quot_1_2_111": affine(quotient_basis(3, [F(1, 2), F(1, 2), F(1, 2)]),
                           [([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]),
    "quot_1_3_111": affine(quotient_basis(3, [F(1, 3), F(1, 3), F(1, 3)]),
                           [([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]),
    "quot_1_2_1111": affine(quotient_basis(4, [F(1, 2)] * 4),
                            [([1 if i == j else 0 for j in range(4)], 1) for i in range(4)]),
    "a3_mixed": affine(ident(3), [([1, 0, 0], 1), ([0, 1, 0], F(1, 2)), ([0, 0, 1], F(2, 3))]),
    "a4_smooth": affine(ident(4), [([1 if i == j else 0 for j in range(4)], 1) for i in range(4)]),
    "square_cone": affine(ident(3), [([0, 0, 1], 1), ([1, 0, 1], 1), ([0, 1, 1], 1), ([1, 1, 1], 1)]),
    "square_cone_half": affine(ident(3), [([0, 0, 1], F(1, 2)), ([1, 0, 1], F(1, 2)),
                                          ([0, 1, 1], F(1, 2)), ([1, 1, 1], F(1, 2))]),
    "p1_point_half": over_point(1, [[0], [1]], [([1], F(1, 2)), ([-1], F(1, 2))]),
    "p1_point_smooth": over_point(1, [[0], [1]], [([1], 1), ([-1], 1)]),
    "p1_point_third": over_point(1, [[0], [1]], [([1], F(2, 3)), ([-1], F(2, 3))]),
    "p2_point": over_point(2, [[0, 1], [1, 2], [0, 2]], [([1, 0], 1), ([0, 1], 1), ([-1, -1], 1)]),
    "p1_a1": p1_times_affine(2),
    "p1_a1_half_fiber": p1_times_affine(2, a0=F(1, 2), ainf=F(1, 2)),
    "p1_a2": p1_times_affine(3),
    "p1_a3": p1_times_affine(4),
    "p1_a1_sheared": germ(ident(2), ident(1), [[0, 1]], [[1]], [[0, 2], [1, 2]],
                          [([1, 0], 1), ([-1, 0], 1), ([1, 1], 1)]),
    "wblowup_12": weighted_blowup([1, 2], 1),
    "wblowup_23_half": weighted_blowup([2, 3], F(1, 2)),
    "wblowup_13": weighted_blowup([1, 3], 1, [F(1, 2), 1]),
    "wblowup_112": weighted_blowup([1, 1, 2], 1),
}

def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, g in sorted(CORPUS.items()):
        (OUT / f"{name}.json").write_text(json.dumps(g, indent=None) + "\n")
    print(f"wrote {len(CORPUS)} germs to {OUT}")

if __name__ == "__main__":
    main()
