"""Exact and multi-modular verification of catalog identities."""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import gmpy2
from sympy.ntheory import nthroot_mod, primefactors

from .coeffring import format_coords
from .exprlang import IdentityEntry, eval_exact, load_catalog
from .generators import registry_for
from .qseries import EXACT, ModDomain
from .report import Report, summarize

DEFAULT_MIN_DEPTH = 50
DEFAULT_MARGIN = 8


class PrimeGenerationFailure(RuntimeError):
    pass


def index_mu(N: int) -> Fraction:
    """N^3 * prod over primes p | N of (1 - 1/p^2); mu(1) = 1."""
    mu = Fraction(N ** 3)
    for p in primefactors(N):
        mu *= 1 - Fraction(1, p * p)
    return mu


def sturm_depth(N: int, w) -> Fraction:
    """q-exponent bound ceil(w) * mu(N) / (12 N) for weight w on Gamma(N)."""
    if N < 1:
        raise ValueError("level must be positive")
    w = Fraction(w)
    if w <= 0:
        raise ValueError("weight must be positive")
    return math.ceil(w) * index_mu(N) / (12 * N)


@dataclass(frozen=True)
class Config:
    min_depth: Fraction = Fraction(DEFAULT_MIN_DEPTH)
    margin: Fraction = Fraction(DEFAULT_MARGIN)
    depth: Optional[Fraction] = None  # forces a depth floor beyond the policy
    mode: str = "exact"  # exact | multimodular
    primes: int = 3
    seed: int = 0
    jobs: int = 1
    samples: int = 16
    transform_tol: Optional[float] = None
    zero_tol: Optional[float] = None

    @classmethod
    def from_env(cls, **overrides) -> Config:
        env = os.environ.get("EISEN_DEPTH")
        base = cls(min_depth=Fraction(env)) if env else cls()
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(base, **clean)


def target_depth(entry: IdentityEntry, config: Config) -> Fraction:
    d = max(sturm_depth(entry.level, entry.weight) + config.margin, config.min_depth)
    if entry.depth is not None:
        d = max(d, entry.depth)
    if config.depth is not None:
        d = max(d, config.depth)
    return d


def verify_exact(entry: IdentityEntry, config: Config = Config(), registry=None) -> Report:
    if entry.kind != "exact-zero":
        raise ValueError(f"{entry.id} is not an exact-zero entry")
    start = time.perf_counter()
    depth = target_depth(entry, config)
    reg = registry or registry_for(EXACT)
    try:
        s = eval_exact(entry.expr, depth, reg)
        ok, witness = s.is_zero_to(depth)
    except Exception as exc:  # contained per entry
        return Report(entry.id, "error", "exact", depth, message=f"{type(exc).__name__}: {exc}",
                      ms=(time.perf_counter() - start) * 1000)
    ms = (time.perf_counter() - start) * 1000
    if ok:
        return Report(entry.id, "pass", "exact", depth, ms=ms)
    e, v = witness
    return Report(entry.id, "fail", "exact", depth, e, f"{v} {format_coords(v)}", ms=ms)


# ---------------------------------------------------------------------------
# multi-modular mode


def _is_good_prime(p: int) -> bool:
    return p % 24 == 1 and gmpy2.is_prime(p, 40) and pow(4, (p - 1) // 3, p) == 1


def _order24_root(p: int, rng: random.Random) -> int:
    for _ in range(200):
        z = pow(rng.randrange(2, p - 1), (p - 1) // 24, p)
        if pow(z, 12, p) != 1 and pow(z, 8, p) != 1:
            return z
    raise PrimeGenerationFailure(f"no element of order 24 found mod {p}")


def make_domains(count: int, seed: int, bits: int = 62, max_tries: int = 200000) -> list[ModDomain]:
    """``count`` random primes p = 1 mod 24 with 4 a cube, as residue domains."""
    rng = random.Random(f"eisenfact-primes-{seed}")
    out: list[ModDomain] = []
    seen = set()
    for _ in range(max_tries):
        if len(out) == count:
            return out
        p = rng.getrandbits(bits) | (1 << (bits - 1))
        p -= (p - 1) % 24
        if p in seen or not _is_good_prime(p):
            continue
        seen.add(p)
        z = _order24_root(p, rng)
        y = min(nthroot_mod(4, 3, p, all_roots=True))
        out.append(ModDomain(p, z, y))
    raise PrimeGenerationFailure(f"found only {len(out)} of {count} primes")


_DOMAIN_CACHE: dict[tuple[int, int], list[ModDomain]] = {}


def _domains(config: Config) -> list[ModDomain]:
    key = (config.primes, config.seed)
    if key not in _DOMAIN_CACHE:
        _DOMAIN_CACHE[key] = make_domains(config.primes, config.seed)
    return _DOMAIN_CACHE[key]


def verify_multimodular(entry: IdentityEntry, config: Config = Config()) -> Report:
    if entry.kind != "exact-zero":
        raise ValueError(f"{entry.id} is not an exact-zero entry")
    start = time.perf_counter()
    depth = target_depth(entry, config)
    try:
        domains = _domains(config)
    except PrimeGenerationFailure as exc:
        return Report(entry.id, "error", "multimodular", depth, message=str(exc))
    mode = "multimodular(" + ",".join(str(d.p) for d in domains) + ")"
    best = None
    try:
        for dom in domains:
            s = eval_exact(entry.expr, depth, registry_for(dom))
            ok, witness = s.is_zero_to(depth)
            if not ok and (best is None or witness[0] < best[0]):
                best = (witness[0], dom.format(witness[1]))
    except Exception as exc:
        return Report(entry.id, "error", mode, depth, message=f"{type(exc).__name__}: {exc}",
                      ms=(time.perf_counter() - start) * 1000)
    ms = (time.perf_counter() - start) * 1000
    if best is None:
        return Report(entry.id, "pass", mode, depth, ms=ms, message="probabilistic")
    return Report(entry.id, "fail", mode, depth, best[0], best[1], ms=ms)


# ---------------------------------------------------------------------------
# catalogs


def verify_entry(entry: IdentityEntry, config: Config = Config()) -> Report:
    from . import numeric

    if entry.kind == "exact-zero":
        if config.mode == "multimodular":
            return verify_multimodular(entry, config)
        return verify_exact(entry, config)
    reg = registry_for(EXACT)
    if entry.kind == "numeric-transform":
        return numeric.check_transform(entry, reg, seed=config.seed, samples=config.samples,
                                       tol=config.transform_tol)
    return numeric.check_zero(entry, reg, tol=config.zero_tol)


def run_entries(entries, config: Config = Config()) -> tuple[list[Report], dict]:
    entries = list(entries)
    if config.jobs > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(lambda e: verify_entry(e, config), entries))
    else:
        reports = [verify_entry(e, config) for e in entries]
    reports.sort(key=lambda r: r.id)
    return reports, summarize(reports)


def run_catalog(path, config: Config = Config()) -> tuple[list[Report], dict]:
    """Verify every entry of a catalog file; file-level parse errors propagate."""
    return run_entries(load_catalog(path), config)
