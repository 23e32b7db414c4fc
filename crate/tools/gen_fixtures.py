#!/usr/bin/env python3
"""Generate the vendored curve fixtures.

Each hauptmodul is an eta quotient expanded with exact integer arithmetic; the
covering map to the j-line is checked against E4^3/Delta before a file is
written.
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

import sympy as sp

T = sp.symbols("t")


def euler(prec, step=1):
    c = [0] * prec
    c[0] = 1
    n = 1
    while n * step < prec:
        for i in range(prec - 1, n * step - 1, -1):
            c[i] -= c[i - n * step]
        n += 1
    return c


def mul(a, b, prec):
    c = [0] * prec
    for i, x in enumerate(a[:prec]):
        if x:
            for j, y in enumerate(b[: prec - i]):
                c[i + j] += x * y
    return c


def inv(a, prec):
    b = [Fraction(0)] * prec
    b[0] = Fraction(1, a[0])
    for n in range(1, prec):
        s = sum(a[k] * b[n - k] for k in range(1, min(n, len(a) - 1) + 1))
        b[n] = -s / a[0]
    return b


def power(a, e, prec):
    r = [1] + [0] * (prec - 1)
    for _ in range(e):
        r = mul(r, a, prec)
    return r


def eta_quotient(step_num, step_den, e, prec):
    return mul(power(euler(prec, step_num), e, prec), inv(power(euler(prec, step_den), e, prec), prec), prec)


def j_series(prec):
    sig3 = [0] + [sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, prec)]
    e4 = [1] + [240 * sig3[n] for n in range(1, prec)]
    return mul(power(e4, 3, prec), inv(power(euler(prec), 24, prec), prec), prec)


def check_j(coeffs, valuation, width, pi, terms):
    x = sp.symbols("x")
    h = sum(sp.Rational(c) * x ** (valuation + i) for i, c in enumerate(coeffs))
    num, den = sp.fraction(sp.together(pi))
    expr = num.subs(T, h) / den.subs(T, h)
    got = sp.series(expr, x, 0, terms * width).removeO()
    j = j_series(terms + 2)
    want = sum(sp.Integer(j[i]) * x ** ((i - 1) * width) for i in range(terms + 1))
    diff = sp.expand(got - want)
    assert diff == 0, f"j mismatch: {diff}"


def frac(c):
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def poly_coeffs(expr):
    p = sp.Poly(sp.expand(expr), T)
    coeffs = list(reversed(p.all_coeffs()))
    return [[frac(sp.Rational(c))] for c in coeffs]


def ratfunc_json(pi, conductor):
    num, den = sp.fraction(sp.cancel(sp.together(pi)))
    lc = sp.Poly(den, T).LC()
    num, den = sp.expand(num / lc), sp.expand(den / lc)
    degree = sp.totient(conductor) if conductor > 2 else 1

    def pad(cs):
        return [c + ["0/1"] * (degree - 1) for c in cs]

    return {"conductor": conductor, "num": pad(poly_coeffs(num)), "den": pad(poly_coeffs(den))}


def series_json(coeffs, valuation, width, conductor):
    degree = sp.totient(conductor) if conductor > 2 else 1
    return {
        "conductor": conductor,
        "width": width,
        "valuation": valuation,
        "coeffs": [[frac(c)] + ["0/1"] * (degree - 1) for c in coeffs],
        "precision": valuation + len(coeffs),
    }


def build():
    prec = 24
    fixtures = []

    def gamma0(label, level, e, pi, note):
        h = eta_quotient(1, level, e, prec)
        check_j(h[:16], -1, 1, pi, 5)
        p = sp.factorint(level)
        (prime, n), = p.items()
        fixtures.append({
            "label": label,
            "p": int(prime),
            "n": int(n),
            "pi_gamma": ratfunc_json(pi, level),
            "hauptmodul": series_json(h, -1, 1, level),
            "provenance": note,
        })

    gamma0("2B0", 2, 24, (T + 256) ** 3 / T**2,
           "Gamma0(2); hauptmodul (eta(q)/eta(q^2))^24 expanded by tools/gen_fixtures.py")
    gamma0("3B0", 3, 12, (T + 27) * (T + 243) ** 3 / T**3,
           "Gamma0(3); hauptmodul (eta(q)/eta(q^3))^12 expanded by tools/gen_fixtures.py")
    gamma0("4B0", 4, 8, (T**2 + 256 * T + 4096) ** 3 / (T**4 * (T + 16)),
           "Gamma0(4); hauptmodul (eta(q)/eta(q^4))^8 expanded by tools/gen_fixtures.py")
    gamma0("5B0", 5, 6, (T**2 + 250 * T + 3125) ** 3 / T**5,
           "Gamma0(5); hauptmodul (eta(q)/eta(q^5))^6 expanded by tools/gen_fixtures.py")
    gamma0("7B0", 7, 4, (T**2 + 13 * T + 49) * (T**2 + 245 * T + 2401) ** 3 / T**7,
           "Gamma0(7); hauptmodul (eta(q)/eta(q^7))^4 expanded by tools/gen_fixtures.py")

    # Gamma(2): lambda = 16 eta(q/2)^8 eta(2q)^16 / eta(q)^24 in x = q^(1/2).
    w = 2
    n_terms = 2 * prec
    a = power(euler(n_terms), 8, n_terms)                # eta(q/2)^8 / x^(1/3) in x
    b = power(euler(n_terms, 4), 16, n_terms)            # eta(2q)^16 in x
    c = inv(power(euler(n_terms, 2), 24, n_terms), n_terms)
    lam = [16 * v for v in mul(mul(a, b, n_terms), c, n_terms)]
    pi_l = 256 * (T**2 - T + 1) ** 3 / (T**2 * (T - 1) ** 2)
    check_j(lam[:20], 1, w, pi_l, 5)
    fixtures.append({
        "label": "2C0",
        "p": 2,
        "n": 1,
        "pi_gamma": ratfunc_json(pi_l, 2),
        "hauptmodul": series_json(lam, 1, w, 2),
        "provenance": "Gamma(2); Legendre lambda 16 eta(q/2)^8 eta(2q)^16/eta(q)^24 expanded by tools/gen_fixtures.py",
    })

    # Gamma(3): X = 1 + eta(q/3)^3/(3 eta(3q)^3) in x = q^(1/3).
    w = 3
    n_terms = 3 * prec
    g = mul(power(euler(n_terms), 3, n_terms), inv(power(euler(n_terms, 9), 3, n_terms), n_terms), n_terms)
    hx = [Fraction(v, 3) for v in g]
    hx[1] += 1
    pi_3 = 27 * T**3 * (T**3 + 8) ** 3 / (T**3 - 1) ** 3
    check_j(hx[:24], -1, w, pi_3, 5)
    fixtures.append({
        "label": "3D0",
        "p": 3,
        "n": 1,
        "pi_gamma": ratfunc_json(pi_3, 3),
        "hauptmodul": series_json(hx, -1, w, 3),
        "provenance": "Gamma(3); hauptmodul 1 + eta(q/3)^3/(3 eta(3q)^3) expanded by tools/gen_fixtures.py",
    })
    return fixtures


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    for fx in build():
        path = out / f"{fx['label']}.json"
        path.write_text(json.dumps(fx, indent=1) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
