"""Emit Taylor coefficients (in z = 2p - 1) of the Riemann-Siegel
correction functions C_0..C_4 as a Rust const table."""
import mpmath as mp

mp.mp.dps = 80
TERMS = 90


def psi(p):
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def series_cos(a, b, n):
    # Taylor coefficients of cos(a*h^2 + b)... computed via exp series on h^2
    out = [mp.mpf(0)] * n
    for j in range(0, n // 2 + 1):
        if 2 * j >= n:
            break
        # d^j/dy^j cos(y) at y=b  -> cos(b + j*pi/2)
        out[2 * j] = mp.cos(b + j * mp.pi / 2) * a**j / mp.factorial(j)
    return out


def series_div(num, den):
    n = len(num)
    q = [mp.mpf(0)] * n
    for i in range(n):
        s = num[i] - sum(q[j] * den[i - j] for j in range(i))
        q[i] = s / den[0]
    return q


# psi(1/2 + h) = -cos(2 pi h^2 - 5 pi / 8) / cos(2 pi h)
num = series_cos(2 * mp.pi, -5 * mp.pi / 8, TERMS)
den = [mp.mpf(0)] * TERMS
for j in range(0, TERMS, 2):
    den[j] = (-1) ** (j // 2) * (2 * mp.pi) ** j / mp.factorial(j)
base = [-v for v in series_div(num, den)]


def deriv(c, m):
    # coefficients (in h) of the m-th derivative of the series c
    out = []
    for n in range(len(c) - m):
        f = mp.mpf(1)
        for j in range(m):
            f *= n + m - j
        out.append(c[n + m] * f)
    return out


def comb(*terms):
    n = min(len(c) for _, c in terms)
    return [sum(s * c[i] for s, c in terms) for i in range(n)]


pi = mp.pi
c0 = base
c1 = comb((-1 / (96 * pi**2), deriv(base, 3)))
c2 = comb((1 / (64 * pi**2), deriv(base, 2)), (1 / (18432 * pi**4), deriv(base, 6)))
c3 = comb(
    (-1 / (64 * pi**2), deriv(base, 1)),
    (-1 / (3840 * pi**4), deriv(base, 5)),
    (-1 / (5308416 * pi**6), deriv(base, 9)),
)
c4 = comb(
    (1 / (128 * pi**2), base),
    (19 / (24576 * pi**4), deriv(base, 4)),
    (11 / (5898240 * pi**6), deriv(base, 8)),
    (1 / (2038431744 * pi**8), deriv(base, 12)),
)

print("// Generated by tools/gen_rs_coeffs.py; do not edit by hand.")
print("// Taylor coefficients in z = 2p - 1 of the Riemann-Siegel corrections C_0..C_4.")
for k, c in enumerate([c0, c1, c2, c3, c4]):
    zc = [c[n] / mp.mpf(2) ** n for n in range(len(c))]
    # drop negligible tail
    last = max(i for i, v in enumerate(zc) if abs(v) > mp.mpf("1e-24"))
    zc = zc[: last + 1]
    print(f"pub(crate) const C{k}: [f64; {len(zc)}] = [")
    for v in zc:
        print(f"    {mp.nstr(v, 20, min_fixed=-1, max_fixed=-1)},")
    print("];")
