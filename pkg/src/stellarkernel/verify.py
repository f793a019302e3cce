"""Self-check suites comparing closed forms against independent references.

Each suite returns a dict ``{check_name: {"passed": bool, "detail": str}}``.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import quad

from . import closedforms as cf
from .engine import inner_product, kernel
from .exceptions import TruncationWarning
from .mlkit.datasets import DatasetSpec, make_annular
from .mlkit.kernels import KernelSpec, gram
from .oracle import (
    CatState,
    infinite_rank_bound_check,
    radial_fourier_quadrature,
    sb_inner_fock,
    sb_inner_quadrature,
)
from .stellar import encode_cat_truncated, encode_displaced_fock, encode_qudit, random_stellar

SUITES = ("closed-form", "oracle", "invariants", "bounds")


def _check(passed: bool, detail: str) -> dict:
    return {"passed": bool(passed), "detail": detail}


def _close(u, v, rel=1e-8, floor=1e-8, abs_small=1e-12) -> bool:
    scale = max(abs(u), abs(v))
    return abs(u - v) <= (abs_small if scale < floor else rel * scale)


def random_pair_at(rng, s2):
    """Two points in the unit box neighbourhood with squared distance ``s2``."""
    x1 = rng.uniform(-1, 1, 2)
    th = rng.uniform(0, 2 * np.pi)
    return x1, x1 + math.sqrt(s2) * np.array([math.cos(th), math.sin(th)])


def three_way_agreement(rng, n_max=8, samples=50):
    worst = 0.0
    for n in range(n_max + 1):
        for s2 in rng.uniform(0, 64, samples):
            x1, x2 = random_pair_at(rng, s2)
            s2 = float(np.sum((x2 - x1) ** 2))
            vals = (
                abs(cf.displaced_fock_inner(x1, x2, n)) ** 2,
                cf.displaced_fock_kernel_laguerre(s2, n),
                cf.table_reference_kernel(s2, n),
            )
            for u, v in ((vals[0], vals[1]), (vals[0], vals[2]), (vals[1], vals[2])):
                if not _close(u, v):
                    return False, f"n={n} s2={s2}: {u} vs {v}"
                worst = max(worst, abs(u - v))
    return True, f"max abs deviation {worst:.3g}"


def radial_integral(n: int) -> float:
    """``2 pi int_0^inf k(r^2) r dr`` by adaptive quadrature."""
    val, _ = quad(
        lambda r: cf.displaced_fock_kernel_laguerre(r * r, n) * r, 0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=400
    )
    return 2 * math.pi * val


def suite_closed_form(quick: bool = False, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    ok, detail = three_way_agreement(rng, samples=10 if quick else 50)
    out["three_way_agreement"] = _check(ok, detail)
    exact = all(cf.kernel_integral(n) == math.pi for n in range(21))
    out["kernel_integral_exact"] = _check(exact, "pi for n <= 20")
    dev = max(abs(radial_integral(n) - math.pi) for n in range(7))
    out["kernel_integral_quadrature"] = _check(dev <= 1e-6, f"max deviation {dev:.3g}")
    worst = 0.0
    for n in range(7):
        for w in rng.uniform(0, 8, 5 if quick else 20):
            ref = radial_fourier_quadrature(lambda u, n=n: cf.displaced_fock_kernel_laguerre(u, n), w)
            worst = max(worst, abs(cf.fourier_radial(n, w) - ref))
    out["fourier_vs_quadrature"] = _check(worst <= 1e-8, f"max deviation {worst:.3g}")
    counts = [len(cf.kernel_zeros(n)) for n in range(9)]
    out["zero_counts"] = _check(counts == list(range(9)), f"counts {counts}")
    return out


def suite_oracle(quick: bool = False, seed: int = 1) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    worst = 0.0
    for _ in range(20 if quick else 200):
        f = random_stellar(rng, 1, int(rng.integers(0, 4)))
        g = random_stellar(rng, 1, int(rng.integers(0, 4)))
        ref = sb_inner_quadrature(f, g)
        worst = max(worst, abs(inner_product(f, g) - ref) / max(1.0, abs(ref)))
    out["engine_vs_quadrature_m1"] = _check(worst <= 1e-7, f"max scaled deviation {worst:.3g}")
    worst = 0.0
    for _ in range(5 if quick else 50):
        f, g = random_stellar(rng, 2, 2), random_stellar(rng, 2, 2)
        ref = sb_inner_fock(f, g)
        worst = max(worst, abs(inner_product(f, g) - ref) / max(1.0, abs(ref)))
    out["engine_vs_fock_m2"] = _check(worst <= 1e-6, f"max scaled deviation {worst:.3g}")
    worst = 0.0
    for _ in range(10 if quick else 50):
        f = random_stellar(rng, 1, int(rng.integers(0, 4)))
        g = random_stellar(rng, 1, int(rng.integers(0, 4)))
        worst = max(worst, abs(inner_product(f, g) - inner_product(g, f).conjugate()) / max(1, abs(inner_product(f, g))))
    out["hermitian_symmetry"] = _check(worst <= 1e-10, f"max deviation {worst:.3g}")
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(1, 7))
        a1 = rng.normal(size=d) + 1j * rng.normal(size=d)
        a2 = rng.normal(size=d) + 1j * rng.normal(size=d)
        a1, a2 = a1 / np.linalg.norm(a1), a2 / np.linalg.norm(a2)
        direct = abs(np.vdot(a1, a2)) ** 2
        worst = max(worst, abs(kernel(encode_qudit(a1), encode_qudit(a2)) - direct))
    out["qudit_reduction"] = _check(worst <= 1e-9, f"max deviation {worst:.3g}")
    return out


def suite_invariants(quick: bool = False, seed: int = 2) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    worst = 0.0
    for n in range(9 if not quick else 4):
        for _ in range(3):
            x1, x2, h = rng.uniform(-1.5, 1.5, (3, 2))
            worst = max(worst, cf.translation_rotation_check(x1, x2, h, rng.uniform(0, 2 * np.pi), n))
    out["translation_rotation"] = _check(worst <= 1e-9, f"max deviation {worst:.3g}")
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(0, 5))
        x1, x2 = rng.uniform(-1.5, 1.5, (2, 2))
        s2 = float(np.sum((x1 - x2) ** 2))
        y1, y2 = random_pair_at(rng, s2)
        k1 = kernel(encode_displaced_fock(x1, n), encode_displaced_fock(x2, n))
        k2 = kernel(encode_displaced_fock(y1, n), encode_displaced_fock(y2, n))
        worst = max(worst, abs(k1 - k2))
    out["radiality"] = _check(worst <= 1e-9, f"max deviation {worst:.3g}")
    u = np.linspace(0, 200, 20001)
    top = max(float(np.max(cf.displaced_fock_kernel_laguerre(u, n))) for n in range(21))
    low = min(float(np.min(cf.displaced_fock_kernel_laguerre(u, n))) for n in range(21))
    out["kernel_range"] = _check(low >= 0 and top <= 1 + 1e-12, f"range [{low:.3g}, {top:.15g}]")
    worst = -np.inf
    # bandwidth 0.5 keeps cat displacements inside the supported |alpha| <= 4
    specs = (
        KernelSpec("displaced-fock", n=2, bandwidth=0.5),
        KernelSpec("qudit", d=4, bandwidth=0.5),
        KernelSpec("cat", n=6, bandwidth=0.5),
    )
    for k in range(3 if quick else 20):
        data = make_annular(DatasetSpec(variant=1 + k % 3, n_per_set=8, seed=100 + k))
        pts = data.points[rng.choice(len(data), size=20, replace=False)]
        for spec in specs:
            lam = gram(pts, spec).min_eigenvalue()
            worst = max(worst, -lam)
    out["gram_psd"] = _check(worst <= 1e-8, f"most negative eigenvalue {-worst:.3g}")
    pts = rng.uniform(-2, 2, (12, 2))
    c = 1.7
    g1 = gram(pts, KernelSpec(n=3, bandwidth=c)).values
    g2 = gram(c * pts, KernelSpec(n=3, bandwidth=1.0)).values
    dev = float(np.max(np.abs(g1 - g2)))
    out["bandwidth_identity"] = _check(dev <= 1e-12, f"max deviation {dev:.3g}")
    return out


def cat_scenario(rng):
    """Random pair of cat states and their truncations."""
    parity = ("even", "odd")
    states, approx, eps = [], [], []
    for _ in range(2):
        a = complex(*rng.uniform(-2, 2, 2))
        p = parity[int(rng.integers(2))]
        N = int(rng.integers(2, 13))
        F, e = encode_cat_truncated(a, N, p)
        states.append(CatState(a, p))
        approx.append(F)
        eps.append(e)
    return states, approx, eps


def cat_truncation_sweep(alpha=2.0, other=2.0j, ranks=range(2, 13)):
    gaps = []
    for N in ranks:
        F1, e1 = encode_cat_truncated(alpha, N)
        F2, e2 = encode_cat_truncated(other, N)
        lhs, _, _ = infinite_rank_bound_check(CatState(alpha), CatState(other), F1, F2, e1, e2)
        gaps.append(lhs)
    return gaps


def suite_bounds(quick: bool = False, seed: int = 3) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    violations, worst = 0, 0.0
    for _ in range(40 if quick else 200):
        (p1, p2), (F1, F2), (e1, e2) = cat_scenario(rng)
        lhs, rhs, holds = infinite_rank_bound_check(p1, p2, F1, F2, e1, e2)
        violations += not holds
        worst = max(worst, lhs / rhs if rhs else 0.0)
    out["kernel_closeness_bound"] = _check(violations == 0, f"{violations} violations, max lhs/rhs {worst:.3g}")
    gaps = cat_truncation_sweep()
    mono = all(b <= a for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 1e-4
    out["gap_monotone"] = _check(mono, "gaps " + ", ".join(f"{g:.3g}" for g in gaps))
    return out


_RUNNERS = {
    "closed-form": suite_closed_form,
    "oracle": suite_oracle,
    "invariants": suite_invariants,
    "bounds": suite_bounds,
}


def run_suite(name: str, quick: bool = False) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        checks = _RUNNERS[name](quick=quick)
    return {"suite": name, "passed": all(c["passed"] for c in checks.values()), "checks": checks}
