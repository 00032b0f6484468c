"""Deterministic oracle machine with exact time and space accounting.

Model: read-only input tape, one work tape, a write-only query buffer and a
one-symbol flag register holding the last bit read or the last oracle answer
(0, 1 or blank).  Every instruction costs one step.  Space is the work-tape
extent plus the current query-buffer length, so a machine with space budget
n can never submit a query longer than n.

The bit-exact index encoding is documented in ``docs/encoding.md``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .growth import GrowthFunction, iterate
from .strings import LanguageView

ACCEPT = "accept"
REJECT = "reject"
TIME_EXCEEDED = "time-exceeded"
SPACE_EXCEEDED = "space-exceeded"
ORACLE_UNDECIDED = "oracle-undecided"

BLANK = 2

# mnemonic -> (opcode bits, takes a jump target)
OPCODES: dict[str, tuple[str, bool]] = {
    "ACCEPT": ("0", False),
    "REJECT": ("10000", False),
    "READ": ("10001", False),
    "RIGHT": ("10010", False),
    "LEFT": ("10011", False),
    "QAPP0": ("10100", False),
    "QAPP1": ("10101", False),
    "QUERY": ("10110", False),
    "WRITE0": ("10111", False),
    "WRITE1": ("11000", False),
    "WREAD": ("11001", False),
    "WRIGHT": ("11010", False),
    "WLEFT": ("11011", False),
    "JMP": ("11100", True),
    "JZ": ("11101", True),
    "JONE": ("11110", True),
    "JBLANK": ("11111", True),
}
_BY_CODE = {bits: op for op, (bits, _) in OPCODES.items()}
_OPNUM = {op: i for i, op in enumerate(OPCODES)}


class OracleUndecided(Exception):
    """A machine queried a string the oracle view leaves undecided."""


@dataclass(frozen=True)
class Budgets:
    time: int
    space: int

    def __post_init__(self):
        if self.time < 0 or self.space < 0:
            raise ValueError("budgets must be non-negative")


@dataclass(frozen=True)
class RunResult:
    verdict: str
    steps_used: int
    max_space: int
    queries: tuple[str, ...] = ()
    loop_detected: bool = False

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT

    def bit(self) -> int:
        """Accept is 1; every other verdict counts as not accepted."""
        return 1 if self.verdict == ACCEPT else 0


@dataclass(frozen=True)
class Program:
    instructions: tuple[tuple[str, Optional[int]], ...]
    _compiled: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.instructions:
            raise ValueError("empty program")
        n = len(self.instructions)
        for pc, (op, arg) in enumerate(self.instructions):
            if op not in OPCODES:
                raise ValueError(f"unknown instruction {op!r} at {pc}")
            if OPCODES[op][1]:
                if arg is None or not 0 <= arg < n:
                    raise ValueError(f"branch target out of range at {pc}: {arg}")
            elif arg is not None:
                raise ValueError(f"{op} takes no argument (at {pc})")
        ops = tuple(_OPNUM[op] for op, _ in self.instructions)
        args = tuple(-1 if a is None else a for _, a in self.instructions)
        object.__setattr__(self, "_compiled", (ops, args))

    def __len__(self) -> int:
        return len(self.instructions)

    def to_asm(self) -> str:
        return "".join(op + ("" if arg is None else f" {arg}") + "\n" for op, arg in self.instructions)

    @classmethod
    def from_asm(cls, text: str) -> Program:
        instrs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            op = parts[0].upper()
            if op not in OPCODES:
                raise ValueError(f"line {lineno}: unknown mnemonic {parts[0]!r}")
            if OPCODES[op][1]:
                if len(parts) != 2:
                    raise ValueError(f"line {lineno}: {op} needs one target")
                instrs.append((op, int(parts[1])))
            else:
                if len(parts) != 1:
                    raise ValueError(f"line {lineno}: {op} takes no operand")
                instrs.append((op, None))
        return cls(tuple(instrs))


def gamma_code(v: int) -> str:
    """Elias gamma code of v >= 1."""
    if v < 1:
        raise ValueError("gamma code needs v >= 1")
    b = bin(v)[2:]
    return "0" * (len(b) - 1) + b


def gamma_decode(bits: str, pos: int = 0) -> Optional[tuple[int, int]]:
    """Decode a gamma code starting at pos; returns (value, next pos) or None."""
    z = pos
    while z < len(bits) and bits[z] == "0":
        z += 1
    width = z - pos + 1
    if z + width > len(bits):
        return None
    return int(bits[z:z + width], 2), z + width


def program_bits(p: Program) -> str:
    out = []
    for op, arg in p.instructions:
        out.append(OPCODES[op][0])
        if arg is not None:
            out.append(gamma_code(arg + 1))
    return "".join(out)


def program_of_bits(bits: str) -> Program:
    instrs: list[tuple[str, Optional[int]]] = []
    pos = 0
    truncated = False
    while pos < len(bits):
        end = pos + 1
        while bits[pos:end] not in _BY_CODE and end <= len(bits) and end - pos < 5:
            end += 1
        op = _BY_CODE.get(bits[pos:end])
        if op is None:
            truncated = True
            break
        pos = end
        if OPCODES[op][1]:
            dec = gamma_decode(bits, pos)
            if dec is None:
                truncated = True
                break
            target, pos = dec[0] - 1, dec[1]
            instrs.append((op, target))
        else:
            instrs.append((op, None))
    if truncated or not instrs:
        instrs.append(("REJECT", None))
    n = len(instrs)
    return Program(tuple((op, None if a is None else a % n) for op, a in instrs))


def program_of_index(e: int) -> Program:
    """Decode e; the leading 1 of e's binary expansion is a sentinel."""
    if e < 0:
        raise ValueError("index must be non-negative")
    bits = bin(e)[3:] if e >= 1 else ""
    return program_of_bits(bits)


def index_of_program(p: Program) -> int:
    return int("1" + program_bits(p), 2)


def run(p: Program, input: str, oracle: LanguageView, b: Budgets) -> RunResult:
    """Simulate p on input relative to oracle within budgets."""
    ops, args = p._compiled
    n_instr = len(ops)
    inp = [int(c) for c in input]
    in_len = len(inp)
    time_budget, space_budget = b.time, b.space

    pc = ihead = whead = 0
    work = bytearray()
    extent = 0
    buf: list[str] = []
    flag = BLANK
    steps = 0
    max_space = 0
    queries: list[str] = []

    # Brent-style cycle check on full configurations between queries
    snap_at = 1
    snap = None
    queries_at_snap = 0

    while True:
        if pc >= n_instr:
            return RunResult(REJECT, steps, max_space, tuple(queries))
        if steps == snap_at:
            snap = (pc, ihead, whead, extent, flag, len(buf), bytes(work), "".join(buf))
            queries_at_snap = len(queries)
            snap_at *= 2
        elif (snap is not None and pc == snap[0] and ihead == snap[1] and whead == snap[2]
              and extent == snap[3] and flag == snap[4] and len(buf) == snap[5]
              and len(queries) == queries_at_snap):
            # cheap fields first; the tape and buffer copies are only made on a near-match
            if bytes(work) == snap[6] and "".join(buf) == snap[7]:
                return RunResult(TIME_EXCEEDED, time_budget, max_space, tuple(queries), True)
        if steps >= time_budget:
            return RunResult(TIME_EXCEEDED, steps, max_space, tuple(queries))
        op = ops[pc]
        steps += 1
        pc += 1
        if op == 0:  # ACCEPT
            return RunResult(ACCEPT, steps, max_space, tuple(queries))
        elif op == 1:  # REJECT
            return RunResult(REJECT, steps, max_space, tuple(queries))
        elif op == 2:  # READ
            flag = inp[ihead] if ihead < in_len else BLANK
            continue
        elif op == 3:  # RIGHT; the cell after the input is a wall
            if ihead < in_len:
                ihead += 1
            continue
        elif op == 4:  # LEFT
            if ihead > 0:
                ihead -= 1
            continue
        elif op == 5 or op == 6:  # QAPP0 / QAPP1
            buf.append("0" if op == 5 else "1")
        elif op == 7:  # QUERY
            q = "".join(buf)
            if len(q) > space_budget:
                return RunResult(SPACE_EXCEEDED, steps, max_space, tuple(queries))
            ans = oracle.get(q)
            if ans is None:
                return RunResult(ORACLE_UNDECIDED, steps, max_space, tuple(queries) + (q,))
            queries.append(q)
            flag = 1 if ans else 0
            buf.clear()
            continue
        elif op == 8 or op == 9:  # WRITE0 / WRITE1
            while len(work) <= whead:
                work.append(BLANK)
            work[whead] = op - 8
            if whead + 1 > extent:
                extent = whead + 1
        elif op == 10:  # WREAD
            flag = work[whead] if whead < len(work) else BLANK
            if whead + 1 > extent:
                extent = whead + 1
        elif op == 11:  # WRIGHT
            whead += 1
            if whead + 1 > extent:
                extent = whead + 1
        elif op == 12:  # WLEFT
            if whead > 0:
                whead -= 1
            if whead + 1 > extent:
                extent = whead + 1
        elif op == 13:  # JMP
            pc = args[pc - 1]
            continue
        elif op == 14:  # JZ
            if flag == 0:
                pc = args[pc - 1]
            continue
        elif op == 15:  # JONE
            if flag == 1:
                pc = args[pc - 1]
            continue
        else:  # JBLANK
            if flag == BLANK:
                pc = args[pc - 1]
            continue
        used = extent + len(buf)
        if used > max_space:
            max_space = used
            if used > space_budget:
                return RunResult(SPACE_EXCEEDED, steps, max_space, tuple(queries))


def falsifies_reduction(e: int, source: LanguageView, target: LanguageView, t: str,
                        g: GrowthFunction, k: int) -> bool:
    """Does program e, run relative to source, disagree with target at t?

    Budgets are g^k(|t|) for both time and space; any non-accepting verdict
    counts as "t not accepted".
    """
    want = target.get(t)
    if want is None:
        raise ValueError("target must decide t")
    bound = iterate(g, k, len(t))
    res = run(program_of_index(e), t, source, Budgets(bound, bound))
    if res.verdict == ORACLE_UNDECIDED:
        raise OracleUndecided(f"source view undecided at {res.queries[-1]!r}")
    return res.bit() != int(want)


class _SubroutineOracle:
    """Answers each query by running an inner machine; tallies its cost."""

    def __init__(self, inner: Program, oracle: LanguageView, budgets: Budgets):
        self.inner = inner
        self.oracle = oracle
        self.budgets = budgets
        self.cost = 0
        self.peak_space = 0

    def get(self, q: str) -> Optional[bool]:
        res = run(self.inner, q, self.oracle, self.budgets)
        if res.verdict == ORACLE_UNDECIDED:
            return None
        # copying q onto the inner input tape, then returning the answer
        self.cost += len(q) + res.steps_used + 1
        self.peak_space = max(self.peak_space, len(q) + res.max_space)
        return res.accepted


def run_composed(outer: Program, inner: Program, input: str, oracle: LanguageView,
                 outer_budgets: Budgets, inner_budgets: Budgets) -> RunResult:
    """Run outer with each of its queries answered by inner relative to oracle."""
    sub = _SubroutineOracle(inner, oracle, inner_budgets)
    res = run(outer, input, sub, outer_budgets)
    return RunResult(res.verdict, res.steps_used + sub.cost,
                     max(res.max_space, sub.peak_space), res.queries, res.loop_detected)


LIBRARY_ASM = {
    "accept": "ACCEPT\n",
    "reject": "REJECT\n",
    "loop": "JMP 0\n",
    # accept iff the input itself is in the oracle
    "echo": """\
READ
JZ 6
JONE 8
QUERY
JONE 11
REJECT
QAPP0
JMP 9
QAPP1
RIGHT
JMP 0
ACCEPT
""",
    # accept iff the input is non-empty and starts with 1
    "first-bit": """\
READ
JONE 3
REJECT
ACCEPT
""",
    # accept iff the oracle contains the empty string
    "query-empty": """\
QUERY
JONE 3
REJECT
ACCEPT
""",
    # accept iff the oracle contains 000
    "query-000": """\
QAPP0
QAPP0
QAPP0
QUERY
JONE 6
REJECT
ACCEPT
""",
    # accept iff the oracle does not contain the input (complemented echo)
    "co-echo": """\
READ
JZ 6
JONE 8
QUERY
JONE 11
ACCEPT
QAPP0
JMP 9
QAPP1
RIGHT
JMP 0
REJECT
""",
    # accept iff the input has even length
    "even-length": """\
READ
JBLANK 6
RIGHT
READ
JBLANK 7
JMP 8
ACCEPT
REJECT
RIGHT
JMP 0
""",
    # scan to the end of the input, then reject
    "scan-reject": """\
READ
JBLANK 4
RIGHT
JMP 0
REJECT
""",
    # write the input onto the work tape, then accept
    "copy-accept": """\
READ
JBLANK 9
JZ 5
WRITE1
JMP 6
WRITE0
WRIGHT
RIGHT
JMP 0
ACCEPT
""",
    # accept iff the oracle contains 0 followed by the input
    "query-shifted": """\
QAPP0
READ
JZ 7
JONE 9
QUERY
JONE 13
REJECT
QAPP0
JMP 10
QAPP1
RIGHT
READ
JMP 2
ACCEPT
""",
}

LIBRARY: dict[str, Program] = {name: Program.from_asm(text) for name, text in LIBRARY_ASM.items()}


def library_index(name: str) -> int:
    return index_of_program(LIBRARY[name])


def resolve_machine(token: str) -> int:
    """Machine token: a library name or a decimal index."""
    if token in LIBRARY:
        return library_index(token)
    try:
        e = int(token)
    except ValueError:
        raise ValueError(f"unknown machine {token!r}; library: {', '.join(LIBRARY)}") from None
    if e < 0:
        raise ValueError("machine index must be non-negative")
    return e


def decode_summary(e: int) -> str:
    return program_of_index(e).to_asm()


def battery(names: Sequence[str]) -> list[int]:
    return [resolve_machine(n) for n in names]
