"""Oriented link diagrams as combinatorial crossing data, braid closures,
cabling, and band-fused closures.

A crossing has four ports: 'ui'/'uo' where the under-strand enters/leaves and
'oi'/'oo' for the over-strand.  A diagram is the successor map from out-ports
to in-ports plus a count of crossing-free loops.  Printing uses
``X[a,b,c,d;s]`` with arc ids in the order (ui, oi, uo, oo) and the crossing
sign s.

Braid conventions: strands run downward, the first braid letter is at the
top, and a positive letter crosses the left strand over the right one, which
makes it a positive crossing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .words import BraidWord, PurityError, is_pure

Port = tuple[int, str]


@dataclass
class Diagram:
    signs: dict[int, int] = field(default_factory=dict)
    succ: dict[Port, Port] = field(default_factory=dict)
    free_loops: int = 0

    def copy(self) -> "Diagram":
        return Diagram(dict(self.signs), dict(self.succ), self.free_loops)

    def crossing_count(self) -> int:
        return len(self.signs)

    # -- traversal ---------------------------------------------------------

    def _next_visit(self, visit: tuple[int, str]) -> tuple[int, str]:
        cid, role = visit
        out = (cid, "uo" if role == "u" else "oo")
        nxt = self.succ[out]
        return (nxt[0], "u" if nxt[1] == "ui" else "o")

    def components(self) -> list[list[tuple[int, str]]]:
        """Visit sequences (crossing, role) of each closed component."""
        seen: set[tuple[int, str]] = set()
        out = []
        for cid in sorted(self.signs):
            for role in ("u", "o"):
                start = (cid, role)
                if start in seen:
                    continue
                comp = []
                v = start
                while v not in seen:
                    seen.add(v)
                    comp.append(v)
                    v = self._next_visit(v)
                out.append(comp)
        return out

    def component_count(self) -> int:
        return len(self.components()) + self.free_loops

    # -- canonical code ----------------------------------------------------

    def canonical_code(self) -> tuple:
        """Reconstructible code, canonical up to the start/ordering heuristic.

        Equal codes imply isomorphic diagrams, which is what memoization
        needs; the converse may fail for symmetric diagrams (harmless).
        """
        comps = self.components()
        keyed = []
        for comp in comps:
            shape = [(role, self.signs[cid]) for cid, role in comp]
            best = min(
                range(len(comp)),
                key=lambda s: [shape[(s + t) % len(comp)] for t in range(len(comp))],
            )
            rotated = comp[best:] + comp[:best]
            keyed.append((len(comp), [ (role, self.signs[cid]) for cid, role in rotated], rotated))
        keyed.sort(key=lambda kv: (kv[0], kv[1]))
        rename: dict[int, int] = {}
        code = [self.free_loops]
        for _, _, comp in keyed:
            part = []
            for cid, role in comp:
                if cid not in rename:
                    rename[cid] = len(rename)
                part.append((rename[cid], role, self.signs[cid]))
            code.append(tuple(part))
        return tuple(code)

    # -- surgery -----------------------------------------------------------

    def _preds(self) -> dict[Port, Port]:
        return {v: k for k, v in self.succ.items()}

    def smooth_crossing(self, cid: int) -> "Diagram":
        """Oriented smoothing: under-in continues to over-out and vice versa."""
        d = self.copy()
        d._splice_smooth(cid, {(cid, "ui"): (cid, "oo"), (cid, "oi"): (cid, "uo")})
        return d

    def remove_through(self, cid: int) -> "Diagram":
        """Remove a crossing keeping both through-paths (R1/R2 surgery)."""
        d = self.copy()
        d._splice_smooth(cid, {(cid, "ui"): (cid, "uo"), (cid, "oi"): (cid, "oo")})
        return d

    def _splice_smooth(self, cid: int, continue_to: dict[Port, Port]) -> None:
        preds = self._preds()

        def resolve(in_port: Port) -> Port | None:
            """Out-port (not on cid) that the strand entering at in_port reaches."""
            seen = 0
            port = in_port
            while True:
                out = continue_to[port]
                nxt = self.succ[out]
                if nxt[0] != cid:
                    return nxt
                port = nxt
                seen += 1
                if seen > 4:
                    return None  # fully internal loop

        handled: set[Port] = set()
        for in_port in list(continue_to):
            if in_port in handled:
                continue
            pred = preds[in_port]
            if pred[0] == cid:
                continue  # will be traversed from the outside entry
            dest = resolve(in_port)
            if dest is None:
                continue
            self.succ[pred] = dest
            handled.add(in_port)
        # any in-port never reached from outside belongs to a closed loop
        entered_outside = {
            p for p in continue_to if preds[p][0] != cid
        }
        loop_ports = [p for p in continue_to if p not in entered_outside]
        visited: set[Port] = set()
        for p in loop_ports:
            if p in visited:
                continue
            # follow the internal cycle
            port = p
            internal = True
            while True:
                visited.add(port)
                out = continue_to[port]
                nxt = self.succ[out]
                if nxt[0] != cid:
                    internal = False
                    break
                port = nxt
                if port == p:
                    break
            if internal and port == p:
                self.free_loops += 1
        for port in ((cid, "ui"), (cid, "oi"), (cid, "uo"), (cid, "oo")):
            self.succ.pop(port, None)
        del self.signs[cid]

    def switch_crossing(self, cid: int) -> "Diagram":
        """Exchange over- and under-strand (crossing change)."""
        d = self.copy()
        d.signs[cid] = -d.signs[cid]
        remap = {
            (cid, "ui"): (cid, "oi"),
            (cid, "oi"): (cid, "ui"),
            (cid, "uo"): (cid, "oo"),
            (cid, "oo"): (cid, "uo"),
        }
        new_succ = {}
        for k, v in d.succ.items():
            new_succ[remap.get(k, k)] = remap.get(v, v)
        d.succ = new_succ
        return d

    def mirror(self) -> "Diagram":
        """Switch every crossing."""
        d = self
        for cid in list(self.signs):
            d = d.switch_crossing(cid)
        return d

    # -- simplification ----------------------------------------------------

    def simplified(self) -> "Diagram":
        """Remove kinks (R1) and opposite-sign bigons (R2) until stable."""
        d = self.copy()
        changed = True
        while changed:
            changed = False
            for cid in list(d.signs):
                if cid not in d.signs:
                    continue
                if d.succ.get((cid, "uo")) == (cid, "oi") or d.succ.get((cid, "oo")) == (
                    cid,
                    "ui",
                ):
                    d = d.remove_through(cid)
                    changed = True
            if changed:
                continue
            preds = d._preds()
            for c1 in list(d.signs):
                if c1 not in d.signs:
                    continue
                c2o = d.succ.get((c1, "oo"))
                c2u = d.succ.get((c1, "uo"))
                if (
                    c2o is not None
                    and c2u is not None
                    and c2o[1] == "oi"
                    and c2u[1] == "ui"
                    and c2o[0] == c2u[0]
                    and c2o[0] != c1
                    and d.signs[c2o[0]] == -d.signs[c1]
                ):
                    c2 = c2o[0]
                    d = d.remove_through(c1)
                    d = d.remove_through(c2)
                    changed = True
                    break
        return d

    def __str__(self) -> str:
        arcs: dict[Port, int] = {}
        for n, (out, inp) in enumerate(sorted(self.succ.items())):
            arcs[out] = n
            arcs[inp] = n
        bits = []
        for cid in sorted(self.signs):
            a = arcs.get((cid, "ui"), -1)
            b = arcs.get((cid, "oi"), -1)
            c = arcs.get((cid, "uo"), -1)
            e = arcs.get((cid, "oo"), -1)
            s = "+" if self.signs[cid] > 0 else "-"
            bits.append(f"X[{a},{b},{c},{e};{s}]")
        if self.free_loops:
            bits.append(f"O^{self.free_loops}")
        return " ".join(bits) if bits else "O"


def braid_closure(b: BraidWord) -> Diagram:
    """Trace closure of a braid word; untouched strands become free loops."""
    d = Diagram()
    current: dict[int, Port | None] = {p: None for p in range(1, b.strands + 1)}
    first_in: dict[int, Port] = {}

    def attach(pos: int, in_port: Port) -> None:
        prev = current[pos]
        if prev is None:
            first_in[pos] = in_port
        else:
            d.succ[prev] = in_port

    for n, s in enumerate(b.letters):
        i = abs(s)
        d.signs[n] = 1 if s > 0 else -1
        if s > 0:
            attach(i, (n, "oi"))
            attach(i + 1, (n, "ui"))
            current[i] = (n, "uo")
            current[i + 1] = (n, "oo")
        else:
            attach(i, (n, "ui"))
            attach(i + 1, (n, "oi"))
            current[i] = (n, "oo")
            current[i + 1] = (n, "uo")
    for p in range(1, b.strands + 1):
        if current[p] is None:
            d.free_loops += 1
        else:
            d.succ[current[p]] = first_in[p]
    return d


@dataclass(frozen=True)
class CablePattern:
    """Index sequence with its multiplicities and duplicate-free sequence."""

    index: tuple[int, ...]
    strands: int

    def __post_init__(self) -> None:
        if any(not 1 <= i <= self.strands for i in self.index):
            raise ValueError(f"index entries must lie in 1..{self.strands}")

    @property
    def multiplicities(self) -> tuple[int, ...]:
        r = [0] * self.strands
        for i in self.index:
            r[i - 1] += 1
        return tuple(r)

    @property
    def length(self) -> int:
        return len(self.index)

    def duplicate_free(self) -> tuple[int, ...]:
        """The sequence D(I): each i replaced by its copies in order, numbered
        by the lexicographic order of (strand, copy)."""
        r = self.multiplicities
        offset = [0] * (self.strands + 1)
        for i in range(1, self.strands + 1):
            offset[i] = offset[i - 1] + r[i - 1]
        count = [0] * (self.strands + 1)
        out = []
        for i in self.index:
            count[i] += 1
            out.append(offset[i - 1] + count[i])
        return tuple(out)

    def subsequences(self) -> list[tuple[int, ...]]:
        """All nonempty subsequences of D(I), in the order inherited from it."""
        d = self.duplicate_free()
        out = []
        for mask in range(1, 1 << len(d)):
            out.append(tuple(d[t] for t in range(len(d)) if mask >> t & 1))
        return out


def cable_braid(b: BraidWord, mults: Iterable[int]) -> BraidWord:
    """Replace strand i of a pure braid by mults[i-1] parallel copies.

    Copies of a strand never cross each other, so the blackboard parallels
    are zero framed.  Strands with multiplicity zero are deleted.
    """
    if not is_pure(b):
        raise PurityError("cabling is defined here for pure braids only")
    r = list(mults)
    if len(r) != b.strands or any(x < 0 for x in r):
        raise ValueError("need one nonnegative multiplicity per strand")
    arr = list(range(1, b.strands + 1))  # strand id at each position
    letters: list[int] = []
    for s in b.letters:
        p = abs(s) - 1
        a_id, b_id = arr[p], arr[p + 1]
        ra, rb = r[a_id - 1], r[b_id - 1]
        u = sum(r[arr[t] - 1] for t in range(p))
        if ra and rb:
            for i in range(ra, 0, -1):
                for pos in range(u + i, u + i + rb):
                    letters.append(pos if s > 0 else -pos)
        arr[p], arr[p + 1] = arr[p + 1], arr[p]
    return BraidWord(sum(r), tuple(letters))


def cable(b: BraidWord, pattern: CablePattern) -> Diagram:
    """Closure of the cabled braid, components ordered lexicographically."""
    return braid_closure(cable_braid(b, pattern.multiplicities))


def delete_strands(b: BraidWord, keep: Iterable[int]) -> BraidWord:
    """Sub-braid on the kept strands (by starting position), renumbered."""
    keep_set = set(keep)
    arr = list(range(1, b.strands + 1))
    letters: list[int] = []
    for s in b.letters:
        p = abs(s) - 1
        a_id, b_id = arr[p], arr[p + 1]
        if a_id in keep_set and b_id in keep_set:
            new_pos = sum(1 for t in range(p) if arr[t] in keep_set) + 1
            letters.append(new_pos if s > 0 else -new_pos)
        arr[p], arr[p + 1] = arr[p + 1], arr[p]
    return BraidWord(len(keep_set), tuple(letters))


def permutation_braid(perm: dict[int, int], strands: int) -> BraidWord:
    """Positive braid whose strand starting at position p ends at perm[p]."""
    target = [perm.get(p, p) for p in range(1, strands + 1)]
    arr = list(range(strands))  # index of starting strand at each position
    letters: list[int] = []
    for pos in range(strands):
        want = next(i for i in range(pos, strands) if target[arr[i]] == pos + 1)
        for i in range(want, pos, -1):
            letters.append(i)
            arr[i - 1], arr[i] = arr[i], arr[i - 1]
    return BraidWord(strands, tuple(letters))


def fuse_closure(b: BraidWord, pattern: CablePattern, subseq: tuple[int, ...]) -> Diagram:
    """Knot obtained from the kept cable components, band-fused at the top.

    The fusion disk is realized by re-routing the trace closure: the top of
    the component of subseq[t] re-enters at the bottom of subseq[t+1]
    (cyclically), via a positive permutation braid inserted above the closure
    arcs.  The result is a single-component diagram.
    """
    if not subseq:
        raise ValueError("the subsequence must be nonempty")
    cab = cable_braid(b, pattern.multiplicities)
    keep = sorted(set(subseq))
    sub = delete_strands(cab, keep)
    pos = {c: keep.index(c) + 1 for c in keep}
    perm = {}
    for t, c in enumerate(subseq):
        nxt = subseq[(t + 1) % len(subseq)]
        perm[pos[c]] = pos[nxt]
    d = braid_closure(sub * permutation_braid(perm, len(keep)))
    if d.component_count() != 1:
        raise AssertionError("fused closure is not a knot")
    return d
