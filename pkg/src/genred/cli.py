"""Command-line driver: ``genred {hat,vm,force,game,audit} ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Optional, Sequence

import numpy as np

from . import forcing, games
from .audit import format_audit, run_audit
from .freegroup import render_word
from .growth import growth_by_name
from .hatcode import FTable, decode_hat, encode_hat, eval_hat
from .manifest import ManifestError, RunManifest, load_manifest, parse_manifest
from .strings import ALL_OUT, PartialLanguage, parse_token, render
from .vm import (
    LIBRARY,
    Budgets,
    Program,
    decode_summary,
    index_of_program,
    program_of_index,
    resolve_machine,
    run,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    # write then rename so readers never see a half-written file
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _point_from_file(path: str) -> str:
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return parse_token(line)
    raise UsageError(f"{path} holds no point prefix")


# hat ---------------------------------------------------------------------

def cmd_hat(args) -> int:
    g = growth_by_name(args.g)
    if args.action == "decode":
        dec = decode_hat(parse_token(args.string), g)
        if dec is None:
            print("undecodable")
        else:
            print(f"path {render_word(dec.path)}\npayload {render(dec.payload)}")
    elif args.action == "encode":
        path = "" if args.path == "-" else args.path
        if path.strip("aAbB"):
            raise UsageError("path must be a sequence of generators a, A, b, B (or -)")
        print(render(encode_hat(path, parse_token(args.payload), g)))
    else:
        table = FTable.from_text(_read(args.f_table))
        x = _point_from_file(args.point)
        v = eval_hat(table, x, parse_token(args.string), g)
        print("undecided" if v is None else v)
    return 0


# vm ----------------------------------------------------------------------

def cmd_vm(args) -> int:
    if args.action == "decode":
        print(decode_summary(int(args.index)), end="")
        return 0
    if args.action == "encode":
        print(index_of_program(Program.from_asm(_read(args.asm))))
        return 0
    prog = Program.from_asm(_read(args.asm)) if args.asm else program_of_index(resolve_machine(args.machine))
    oracle = PartialLanguage.from_text(_read(args.oracle)) if args.oracle else ALL_OUT
    res = run(prog, parse_token(args.input), oracle, Budgets(args.time, args.space))
    print(f"verdict {res.verdict}\nsteps {res.steps_used}\nspace {res.max_space}\n"
          f"queries {len(res.queries)}\nloop-detected {str(res.loop_detected).lower()}")
    return 0


# force -------------------------------------------------------------------

def _parse_base(text: str) -> dict[str, set[str]]:
    """``prefix:s1,s2;prefix:s3`` with ``e`` for the empty string."""
    out: dict[str, set[str]] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        prefix, sep, strs = part.partition(":")
        if not sep:
            raise UsageError(f"base entry {part!r} lacks ':'")
        out.setdefault(parse_token(prefix.strip()), set()).update(
            parse_token(t.strip()) for t in strs.split(",") if t.strip())
    return out


def _start_condition(m: RunManifest) -> forcing.Condition:
    height = m.get_int("height", 1 if m.mode == "sound" else 2)
    return forcing.Condition.build(height, _parse_base(m.get("base", " ")), m.g)


def meet_and_verify(m: RunManifest, out_dir: Optional[str] = None) -> list[str]:
    """Meet and verify every machine of the manifest's battery; returns failure lines."""
    p = _start_condition(m)
    r, s, k = m.get("r"), m.get("s"), m.get_int("k")
    force_n = m.get_int("n") if "n" in m.params else None
    force_i = m.get_int("i") if "i" in m.params else None
    failures = []
    for token in m.get_list("machines", "accept,reject,echo"):
        e = resolve_machine(token)
        label = f"(r={r}, s={s}, k={k}, e={token})"
        try:
            p_star, report = forcing.meet_diagonalization(p, r, s, k, e, m.g, m.mode, force_n, force_i)
            w = forcing.verify_meet(p_star, forcing.default_extension(r, p_star.height),
                                    forcing.default_extension(s, p_star.height))
        except forcing.PreconditionError as exc:
            raise forcing.PreconditionError(f"{label}: {exc}") from None
        except (AssertionError, ValueError) as exc:
            failures.append(f"FAIL {label}: {exc}")
            print(failures[-1])
            continue
        print(f"ok {label} n={report.chosen_n} i={report.chosen_i} |S|={report.S_size} "
              f"verdict={w.verdict} hat={w.hat_bit}")
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            stem = os.path.join(out_dir, token.replace("/", "_"))
            _write(stem + ".condition", p_star.to_text())
            _write(stem + ".report", report.to_text())
            _write(stem + ".witness", w.to_text())
    return failures


def _parse_schedule(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    for entry in text.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        parts = entry.split("/")
        if len(parts) != 4:
            raise UsageError(f"schedule entry {entry!r} is not r/s/k/machine")
        out.append((parse_token(parts[0]), parse_token(parts[1]), int(parts[2]), resolve_machine(parts[3])))
    return out


def cmd_force(args) -> int:
    if args.action == "meet":
        failures = meet_and_verify(load_manifest(args.manifest), args.out)
        return 1 if failures else 0
    if args.action == "verify":
        p = forcing.Condition.from_text(_read(args.condition))
        if not p.diagonal:
            raise UsageError("condition has no diagonal layer to verify")
        anchor = p.diagonal[-1].anchor
        s_star = forcing.parse_prefix(args.s_star) if args.s_star else forcing.default_extension(anchor, p.height)
        r_star = forcing.parse_prefix(args.r_star)
        try:
            w = forcing.verify_meet(p, r_star, s_star)
        except AssertionError as exc:
            print(f"FAIL {exc}")
            return 1
        print(w.to_text(), end="")
        return 0
    if args.action == "generic":
        m = load_manifest(args.manifest)
        force_n = m.get_int("n") if "n" in m.params else None
        result = forcing.generic_run(_parse_schedule(m.get("schedule")), m.g, m.mode, force_n)
        print(f"chain-length {len(result.chain)}")
        for p, rep in zip(result.chain[1:], result.reports):
            print(f"height {p.height} n={rep.chosen_n} e={rep.e}")
        for idx, why in result.skipped:
            print(f"skipped {idx} {why}")
        return 1 if result.skipped else 0
    p = forcing.Condition.from_text(_read(args.condition))
    rep = forcing.audit_coherence(p, args.pairs, args.seed)
    print(rep.to_text(), end="")
    return 0 if rep.ok else 1


# game --------------------------------------------------------------------

def _payoff(args) -> games.ClopenPayoff:
    if args.payoff:
        return games.ClopenPayoff.from_text(_read(args.payoff))
    kind, _, arg = (args.predicate or "").partition(":")
    if kind == "contains":
        s = parse_token(arg)
        return games.ClopenPayoff.from_predicate(args.horizon, lambda x: bool(x.get(s)))
    if kind == "omits":
        s = parse_token(arg)
        return games.ClopenPayoff.from_predicate(args.horizon, lambda x: not x.get(s))
    if kind == "random":
        return games.ClopenPayoff.random(args.horizon, np.random.default_rng(int(arg or 0)))
    raise UsageError("give --payoff FILE or --predicate contains:S | omits:S | random:SEED")


def _strategy(token: str, player: str, payoff: Optional[games.ClopenPayoff]) -> games.Strategy:
    name, _, arg = token.partition(":")
    if name == "always-in":
        return games.always_in(player)
    if name == "always-out":
        return games.always_out(player)
    if name == "random":
        return games.random_strategy(int(arg or 0), player)
    if name == "pspace" and player == "I":
        return games.pspace_completion_strategy(int(arg) if arg else None)
    if name == "solver":
        if payoff is None:
            raise UsageError("the solver strategy needs a payoff")
        winner, sigma = games.solve_clopen(payoff)
        if winner != player:
            raise UsageError(f"player {player} has no winning strategy for this payoff")
        return sigma
    raise UsageError(f"unknown strategy {token!r} for player {player}")


def cmd_game(args) -> int:
    if args.action == "play":
        payoff = _payoff(args) if (args.payoff or args.predicate) else None
        t = games.play(_strategy(args.i, "I", payoff), _strategy(args.ii, "II", payoff), args.horizon)
        print(t.to_text(), end="")
        if payoff is not None:
            print(f"winner {'I' if payoff.wins(t.outcome) else 'II'}")
        return 0
    if args.action == "solve":
        payoff = _payoff(args)
        winner, _ = games.solve_clopen(payoff)
        print(f"winner {winner}\nrole-switched-complement-winner "
              f"{games.role_switched_winner(payoff.complement())}")
        if args.write:
            _write(args.write, payoff.to_text())
        return 0
    if args.action == "combine":
        sigmas = [games.random_strategy(args.seed * 1000 + i) for i in range(args.count)]
        combined = games.combine_strategies(sigmas)
        out = games.play(combined, games.random_strategy(args.seed, "II"), args.horizon).outcome
        ok = True
        for i, sigma in enumerate(sigmas):
            h = args.horizon - (i + 1)
            if h < 0:
                break
            y = games.project(out, i, h)
            same = games.star(sigma, y, h) == y
            ok &= same
            print(f"game {i} horizon {h} projection {'matches' if same else 'DIFFERS'}")
        return 0 if ok else 1
    if args.action == "pspace-demo":
        sigma = games.pspace_completion_strategy()
        t = games.play(sigma, games.random_strategy(args.seed, "II"), args.horizon)
        print(t.to_text(), end="")
        bad = 0
        total = 0
        for s, v in t.outcome.items():
            if s[:1] == "0":
                total += 1
                view = t.outcome.restrict(len(s) - 1)
                bad += games.pspace_bit(s[1:], view, len(s)) != int(v)
        print(f"recheck {total - bad}/{total}")
        return 0 if bad == 0 else 1
    z = games.random_language(random.Random(args.seed), args.L)
    w = games.complement_symmetric(z, args.L)
    print(f"anchor {render(w.anchor)}\nmany-one-checked {w.many_one_checked}\n"
          f"swap-checked {w.swap_checked}\nfailures {len(w.failures)}")
    for f in w.failures:
        print(f"failure {f}")
    return 0 if w.ok else 1


def cmd_audit(args) -> int:
    m = load_manifest(args.manifest) if args.manifest else parse_manifest("command = audit\n")
    rows = run_audit(m)
    print(format_audit(rows), end="")
    return 0 if all(r.passed for r in rows) else 1


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genred", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="group", required=True)

    hat = sub.add_parser("hat", help="coding map")
    hs = hat.add_subparsers(dest="action", required=True)
    for name in ("decode", "encode", "eval"):
        p = hs.add_parser(name)
        p.add_argument("--g", default="n^2", help="growth function name")
        if name == "decode":
            p.add_argument("string")
        elif name == "encode":
            p.add_argument("path", help="generators, e.g. aB, or - for none")
            p.add_argument("payload")
        else:
            p.add_argument("--f-table", required=True)
            p.add_argument("--point", required=True, help="file holding the point prefix")
            p.add_argument("--string", required=True)
    hat.set_defaults(fn=cmd_hat)

    vm = sub.add_parser("vm", help="oracle machine simulator")
    vs = vm.add_subparsers(dest="action", required=True)
    p = vs.add_parser("run")
    p.add_argument("machine", help=f"index or library name ({', '.join(LIBRARY)})")
    p.add_argument("input")
    p.add_argument("--asm", help="run an assembly file instead")
    p.add_argument("--oracle", help="oracle language file (default: empty oracle)")
    p.add_argument("--time", type=int, default=10_000)
    p.add_argument("--space", type=int, default=1_000)
    p = vs.add_parser("decode")
    p.add_argument("index")
    p = vs.add_parser("encode")
    p.add_argument("asm")
    vm.set_defaults(fn=cmd_vm)

    force = sub.add_parser("force", help="forcing conditions")
    fs = force.add_subparsers(dest="action", required=True)
    p = fs.add_parser("meet")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", help="directory for condition, report and witness files")
    p = fs.add_parser("verify")
    p.add_argument("--condition", required=True)
    p.add_argument("--r-star", required=True, help="bits, or bits+F^count")
    p.add_argument("--s-star", help="default: the anchor padded with zeros")
    p = fs.add_parser("generic")
    p.add_argument("--manifest", required=True)
    p = fs.add_parser("audit-coherence")
    p.add_argument("--condition", required=True)
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    force.set_defaults(fn=cmd_force)

    game = sub.add_parser("game", help="string games")
    gs = game.add_subparsers(dest="action", required=True)
    for name in ("play", "solve"):
        p = gs.add_parser(name)
        p.add_argument("--payoff", help="payoff table file")
        p.add_argument("--predicate", help="contains:S, omits:S or random:SEED")
        p.add_argument("--horizon", type=int, default=3)
        if name == "play":
            p.add_argument("--i", default="always-out")
            p.add_argument("--ii", default="always-out")
        else:
            p.add_argument("--write", help="save the payoff table")
    p = gs.add_parser("combine")
    p.add_argument("--count", type=int, default=2)
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p = gs.add_parser("pspace-demo")
    p.add_argument("--horizon", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p = gs.add_parser("complement-demo")
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    game.set_defaults(fn=cmd_game)

    audit = sub.add_parser("audit", help="invariant suite")
    audit.add_argument("--manifest")
    audit.set_defaults(fn=cmd_audit)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ManifestError, forcing.PreconditionError) as exc:
        print(f"genred: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"genred: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
