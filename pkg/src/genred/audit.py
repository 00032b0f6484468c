"""Invariant suite behind ``genred audit``: a deterministic pass/fail table."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import forcing, games
from .freegroup import count_words, enum_words
from .growth import GrowthFunction, iterate, validate_growth
from .hatcode import decode_hat, encode_hat
from .manifest import RunManifest
from .strings import code, decode_code, strings_up_to
from .vm import library_index


@dataclass(frozen=True)
class AuditRow:
    name: str
    passed: bool
    detail: str


def _code_roundtrip(g: GrowthFunction, max_len: int = 10) -> tuple[bool, str]:
    bad = 0
    total = 0
    for r in strings_up_to(max_len):
        total += 1
        if decode_code(code(r, g), g) != r:
            bad += 1
        back = decode_code(r, g)
        if back is not None and code(back, g) != r:
            bad += 1
    return bad == 0, f"{total} strings, {bad} failures"


def _hat_roundtrip(g: GrowthFunction) -> tuple[bool, str]:
    bad = total = 0
    for depth in range(3):
        for path in enum_paths(depth):
            for r in strings_up_to(3):
                total += 1
                dec = decode_hat(encode_hat(path, r, g), g)
                if dec is None or (dec.path, dec.payload) != (path, r):
                    bad += 1
    return bad == 0, f"{total} (path, payload) pairs, {bad} failures"


def enum_paths(depth: int) -> list[str]:
    out = [""]
    for _ in range(depth):
        out = [p + c for p in out for c in "aAbB"]
    return out


def _counting() -> tuple[bool, str]:
    ok = all(len(enum_words(l)) == count_words(l) == 2 * 3 ** l - 1 <= 4 ** (l + 1) for l in range(7))
    return ok, "lengths 0..6"


def _growth_bound(g: GrowthFunction) -> tuple[bool, str]:
    if g.name != "n^2":
        return True, f"skipped for {g.name}"
    ok = all(iterate(g, i, 2) == 2 ** (2 ** i) for i in range(6))
    return ok, "i = 0..5"


def _toy_meet(seed: int) -> tuple[bool, str]:
    p = forcing.Condition.build(2, {"0": {"01"}})
    n_ok = 0
    names = ["accept", "reject", "echo", "co-echo", "loop"]
    for name in names:
        p_star, _ = forcing.meet_diagonalization(p, "01", "10", 0, library_index(name),
                                                  mode=forcing.UNCHECKED, force_n=8)
        w = forcing.verify_meet(p_star, forcing.default_extension("01", p_star.height),
                                forcing.default_extension("10", p_star.height))
        coh = forcing.audit_coherence(p_star, seed=seed)
        if w.disagrees and coh.ok and forcing.extends(p_star, p):
            n_ok += 1
    return n_ok == len(names), f"{n_ok}/{len(names)} machines"


def _determinacy(seed: int, count: int = 50) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    swapped = 0
    for _ in range(count):
        q = games.ClopenPayoff.random(3, rng)
        if games.solve_clopen(q)[0] != games.role_switched_winner(q.complement()):
            swapped += 1
    return swapped == count, f"{swapped}/{count} complements swap the winner"


def _combination(seed: int) -> tuple[bool, str]:
    sigmas = [games.random_strategy(seed * 7 + i) for i in range(2)]
    combined = games.combine_strategies(sigmas)
    opp = games.random_strategy(seed + 99, "II")
    out = games.play(combined, opp, 4).outcome
    ok = all(out.get("0" * m) is False for m in range(1, 5))
    for i, sigma in enumerate(sigmas):
        y = games.project(out, i, 4 - (i + 1))
        own = games.star(sigma, y, 4 - (i + 1))
        ok = ok and own == y
    return ok, "2 strategies, horizon 4"


def run_audit(manifest: RunManifest) -> list[AuditRow]:
    g = manifest.g
    seed = manifest.seed
    rows = []
    report = validate_growth(g, 64)
    detail = "ok" if report.passed else f"first failure at n = {report.first_failure}"
    rows.append(AuditRow(f"growth {g.name}", report.passed, detail))
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("code round-trip", lambda: _code_roundtrip(g)),
        ("hat round-trip", lambda: _hat_roundtrip(g)),
        ("word counting", _counting),
        ("growth iterates", lambda: _growth_bound(g)),
        ("toy meet + coherence", lambda: _toy_meet(seed)),
        ("clopen determinacy", lambda: _determinacy(seed)),
        ("strategy combination", lambda: _combination(seed)),
    ]
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append(AuditRow(name, ok, detail))
    return rows


def format_audit(rows: list[AuditRow]) -> str:
    width = max(len(r.name) for r in rows)
    lines = ["audit v1"]
    lines.extend(f"{r.name.ljust(width)}  {'pass' if r.passed else 'FAIL'}  {r.detail}" for r in rows)
    return "\n".join(lines) + "\n"
