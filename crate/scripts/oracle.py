#!/usr/bin/env python3
"""Big-float reference values for the golden test files.

Every Poisson series is summed by brute force from i = 0 at 50 significant
digits until the terms past the mode drop below 1e-60 of the running sum.
Derivatives that have no simple series form are taken with mpmath's
numerical differentiation at the same working precision.

Usage: python3 scripts/oracle.py   (writes crates/core/tests/data/*.csv)
"""

import csv
import os

from mpmath import mp, mpf, exp, log, loggamma, pi, sqrt, expm1, diff, e

mp.dps = 50
CUT = mpf(10) ** -60

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "crates", "core", "tests", "data")


def log_pmf(i, lam):
    return i * log(lam) - lam - loggamma(i + 1)


def poisson_sum(lam, f):
    """Sum f(i, log p_i) over i >= 0."""
    lam = mpf(lam)
    total = mpf(0)
    i = 0
    while True:
        t = f(i, log_pmf(i, lam))
        total += t
        if i > lam and abs(t) < CUT * abs(total):
            return total
        i += 1


def psi(a, lam):
    a = mpf(a)
    return poisson_sum(lam, lambda i, lp: exp(a * lp))


def log_psi(a, lam):
    return log(psi(a, lam))


def shannon(lam):
    return -poisson_sum(lam, lambda i, lp: exp(lp) * lp)


def renyi(a, lam):
    return log_psi(a, lam) / (1 - mpf(a))


def gen_renyi1(a, lam):
    a = mpf(a)
    num = poisson_sum(lam, lambda i, lp: exp(a * lp) * lp)
    return -num / psi(a, lam)


def gen_renyi2(a, b, lam):
    return (log_psi(a, lam) - log_psi(b, lam)) / (mpf(b) - mpf(a))


def tsallis(a, lam):
    return (psi(a, lam) - 1) / (1 - mpf(a))


def sharma_mittal(a, b, lam):
    a, b = mpf(a), mpf(b)
    return (psi(a, lam) ** ((1 - b) / (1 - a)) - 1) / (1 - b)


def ml(a, x):
    a, x = mpf(a), mpf(x)
    total = mpf(0)
    k = 0
    peak = x ** (1 / a) / a
    while True:
        t = exp(k * log(x) - loggamma(a * k + 1)) if k > 0 else mpf(1)
        total += t
        if k > peak + 2 and t < CUT * total:
            return total
        k += 1


def log_ml(a, x):
    return log(ml(a, x))


def factorial_moments(a):
    a = mpf(a)
    s0 = s1 = mpf(0)
    i = 0
    while True:
        w = exp(-a * loggamma(i + 1))
        s0 += w
        s1 += i * w
        if i > 2 and w < CUT * s0:
            return s0, s1
        i += 1


def rho(a):
    s0, s1 = factorial_moments(a)
    return mpf(a) * (s1 / s0 - 1)


def rho_prime(a):
    return diff(rho, mpf(a))


def dpsi_dalpha(a, lam):
    a = mpf(a)
    return poisson_sum(lam, lambda i, lp: exp(a * lp) * lp)


def dpsi_dlambda(a, lam):
    a, lam = mpf(a), mpf(lam)
    return poisson_sum(lam, lambda i, lp: a * exp(a * lp) * (i / lam - 1))


def d2_logpsi(a, lam):
    return diff(lambda x, y: log_psi(x, y), (mpf(a), mpf(lam)), (1, 1))


# Bound and asymptote closed forms.

GAMMA_STAR = exp(-(pi / e) * (exp(mpf(1) / 6) - 1))


def h_corr(lam):
    lam = mpf(lam)
    return log(1 + 1 / max(lam - 1, mpf(1))) / 2 - 1 / (12 * lam + 1)


def upper_renyi(a, lam, g):
    a, lam, g = mpf(a), mpf(lam), mpf(g)
    common = log(pi / (-e * log(g))) / 2
    if a < 1:
        x = (a * lam / g) ** a
        return ((log_ml(a, x) - a * lam) / (1 - a) + common + a * log(a) / (2 * (1 - a))
                + 1 / (12 * a * (1 - a)) + log(1 - a) / 2)
    x = (a * g * lam) ** a
    return ((a * lam - log_ml(a, x)) / (a - 1) + common - a * log(a) / (2 * (a - 1))
            + a / (12 * (a - 1)) + log(a - 1) / 2)


def tsallis_lower(a, lam):
    a, lam = mpf(a), mpf(lam)
    h = h_corr(lam)
    power = (2 * pi * lam) ** ((1 - a) / 2)
    if a < 1:
        return (power * exp(-h) - 1) / (1 - a)
    return (1 - power * exp((a - 1) * h)) / (a - 1)


# Acceptance golden file: 40 cases, orders and intensities from
# {0.1, 0.5, 0.9, 1.1, 2, 5} x {0.5, 1, 2, 10, 100}.
ACCEPTANCE = [
    ("psi", 0.1, None, 0.5),
    ("psi", 0.5, None, 1),
    ("psi", 0.9, None, 2),
    ("psi", 1.1, None, 10),
    ("psi", 2, None, 100),
    ("psi", 5, None, 10),
    ("shannon", None, None, 0.5),
    ("shannon", None, None, 1),
    ("shannon", None, None, 2),
    ("shannon", None, None, 10),
    ("shannon", None, None, 100),
    ("renyi", 0.1, None, 100),
    ("renyi", 0.5, None, 2),
    ("renyi", 2, None, 10),
    ("renyi", 5, None, 0.5),
    ("gen_renyi1", 0.1, None, 1),
    ("gen_renyi1", 0.5, None, 10),
    ("gen_renyi1", 0.9, None, 0.5),
    ("gen_renyi1", 2, None, 2),
    ("gen_renyi1", 5, None, 100),
    ("gen_renyi2", 0.1, 0.5, 10),
    ("gen_renyi2", 0.9, 1.1, 2),
    ("gen_renyi2", 2, 5, 100),
    ("gen_renyi2", 5, 0.1, 1),
    ("tsallis", 0.1, None, 10),
    ("tsallis", 0.5, None, 100),
    ("tsallis", 1.1, None, 2),
    ("tsallis", 2, None, 1),
    ("tsallis", 5, None, 0.5),
    ("sharma_mittal", 0.5, 2, 10),
    ("sharma_mittal", 2, 0.5, 1),
    ("sharma_mittal", 0.1, 0.9, 100),
    ("sharma_mittal", 1.1, 5, 2),
    ("ml", 0.5, None, 1),
    ("ml", 0.9, None, 10),
    ("ml", 2, None, 10),
    ("ml", 5, None, 2),
    ("rho", 0.1, None, None),
    ("rho", 0.5, None, None),
    ("rho", 2, None, None),
]

# Further reference values used by the integration tests.
EXAMPLES = [
    ("shannon", None, None, 10),
    ("shannon", None, None, 50),
    ("shannon", None, None, 400),
    ("renyi", 2, None, 50),
    ("gen_renyi2", 0.5, 2, 100),
    ("tsallis", 0.5, None, 200),
    ("psi", 0.5, None, 200),
    ("ml", 0.5, None, 3),
    ("log_ml", 0.1, None, 2),
    ("log_ml", 0.5, None, 10),
    ("rho", 1, None, None),
    ("rho_prime", 0.05, None, None),
    ("rho_prime", 0.3, None, None),
    ("rho_prime", 0.5, None, None),
    ("dpsi_dalpha", 0.5, None, 3),
    ("dpsi_dlambda", 2, None, 7.5),
    ("d2_logpsi", 0.1, None, 1),
    ("d2_logpsi", 3, None, 12),
    ("upper_bound_renyi", 2, 0.9, 5),
    ("upper_bound_renyi", 0.5, 0.95, 3),
    ("tsallis_lower_bound", 0.5, None, 4),
    ("tsallis_lower_bound", 2, None, 10),
    ("gamma_star", None, None, None),
]

DERIVATIVE_OPS = {"gen_renyi1", "rho_prime", "dpsi_dalpha", "dpsi_dlambda", "d2_logpsi"}


def evaluate(op, a, b, lam):
    if op == "psi":
        return psi(a, lam)
    if op == "shannon":
        return shannon(lam)
    if op == "renyi":
        return renyi(a, lam)
    if op == "gen_renyi1":
        return gen_renyi1(a, lam)
    if op == "gen_renyi2":
        return gen_renyi2(a, b, lam)
    if op == "tsallis":
        return tsallis(a, lam)
    if op == "sharma_mittal":
        return sharma_mittal(a, b, lam)
    if op == "ml":
        return ml(a, lam)
    if op == "log_ml":
        return log_ml(a, lam)
    if op == "rho":
        return rho(a)
    if op == "rho_prime":
        return rho_prime(a)
    if op == "dpsi_dalpha":
        return dpsi_dalpha(a, lam)
    if op == "dpsi_dlambda":
        return dpsi_dlambda(a, lam)
    if op == "d2_logpsi":
        return d2_logpsi(a, lam)
    if op == "upper_bound_renyi":
        return upper_renyi(a, lam, b)
    if op == "tsallis_lower_bound":
        return tsallis_lower(a, lam)
    if op == "gamma_star":
        return GAMMA_STAR
    raise ValueError(op)


def fmt(x):
    return "" if x is None else repr(float(x)) if not isinstance(x, int) else str(x)


def write(name, cases):
    path = os.path.join(DATA, name)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["op", "alpha", "beta", "lambda", "value", "precision"])
        for op, a, b, lam in cases:
            v = evaluate(op, a, b, lam)
            tol = "1e-8" if op in DERIVATIVE_OPS else "1e-10"
            w.writerow([op, fmt(a), fmt(b), fmt(lam), mp.nstr(v, 25, strip_zeros=False), tol])
    print(f"wrote {len(cases)} rows to {os.path.normpath(path)}")


if __name__ == "__main__":
    os.makedirs(DATA, exist_ok=True)
    write("acceptance_golden.csv", ACCEPTANCE)
    write("examples_golden.csv", EXAMPLES)
