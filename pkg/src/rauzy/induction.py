"""Backward Rauzy-Veech induction on suspension data, the forward step it
inverts, orbit logs and the monitors run over them.

One backward step of top type (sum of ``tau`` negative) takes the last top
symbol ``w`` as winner, lets ``beta`` be the symbol right after ``w`` in the
bottom order, moves ``beta`` to the end of the bottom order and adds
``beta``'s length and suspension entry to ``w``'s.  The bottom type is the
mirror image.  Orbits are run by the integer kernel in ``rauzy.kernel``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernel
from .errors import OrbitStops, PrecisionExhausted
from .iet import BACKWARD, BOTTOM, FORWARD, TOP, PermutationPair, StepRecord, forward_move, forward_type
from .numeric import ONE, PRECISION_LADDER, SymbolicReal
from .suspension import Surface


def backward_type(surface: Surface) -> str:
    s = surface.basis.sign(surface.tau_sum())
    if s == 0:
        raise OrbitStops("the suspension entries sum to zero")
    return TOP if s < 0 else BOTTOM


def backward_winner(surface: Surface) -> str:
    kind = backward_type(surface)
    return surface.pair.top[-1] if kind == TOP else surface.pair.bottom[-1]


def backward_step(surface: Surface) -> tuple[Surface, StepRecord]:
    kind = backward_type(surface)
    top, bottom = list(surface.pair.top), list(surface.pair.bottom)
    if kind == TOP:
        w, loser = top[-1], bottom[-1]
        beta = bottom[bottom.index(w) + 1]
        bottom.remove(beta)
        bottom.append(beta)
    else:
        w, loser = bottom[-1], top[-1]
        beta = top[top.index(w) + 1]
        top.remove(beta)
        top.append(beta)
    lengths = dict(surface.lengths)
    tau = dict(surface.tau)
    lengths[w] = lengths[w] + lengths[beta]
    tau[w] = tau[w] + tau[beta]
    pair = PermutationPair(tuple(top), tuple(bottom), surface.alphabet)
    return surface.replace(pair, lengths, tau), StepRecord(BACKWARD, kind, w, loser)


def forward_step_suspension(surface: Surface) -> tuple[Surface, StepRecord]:
    """Forward step on ``(pi, lambda)`` with the same elementary matrix applied to ``tau``."""
    kind = forward_type(surface.pair, surface.lengths, surface.basis)
    pair, w, l = forward_move(surface.pair, kind)
    lengths = dict(surface.lengths)
    tau = dict(surface.tau)
    lengths[w] = lengths[w] - lengths[l]
    tau[w] = tau[w] - tau[l]
    return surface.replace(pair, lengths, tau), StepRecord(FORWARD, kind, w, l)


# --------------------------------------------------------------------------
# integer state
# --------------------------------------------------------------------------

class _IntegerState:
    """Lengths and suspension entries as integer coefficient vectors over a
    fixed basis list, all scaled by one common denominator."""

    def __init__(self, surface: Surface):
        self.alphabet = surface.alphabet
        self.index = {a: i for i, a in enumerate(self.alphabet)}
        used = set()
        for v in list(surface.lengths.values()) + list(surface.tau.values()):
            used.update(v.names())
        self.names = tuple(sorted(used, key=lambda k: (k != ONE, k))) or (ONE,)
        den = 1
        for v in list(surface.lengths.values()) + list(surface.tau.values()):
            for c in v._terms.values():
                den = den * c.denominator // math.gcd(den, c.denominator)
        self.den = den
        self.lam = [self._vec(surface.lengths[a]) for a in self.alphabet]
        self.tau = [self._vec(surface.tau[a]) for a in self.alphabet]
        self.top = [self.index[a] for a in surface.pair.top]
        self.bottom = [self.index[a] for a in surface.pair.bottom]
        d = len(self.alphabet)
        self.mat = [[int(i == j) for j in range(d)] for i in range(d)]
        self.total = [sum(col) for col in zip(*self.tau)]
        self.bounds = surface.basis.bounds_table(self.names)

    def _vec(self, x: SymbolicReal) -> list[int]:
        return [int(x.coeff(n) * self.den) for n in self.names]

    def value(self, vec) -> SymbolicReal:
        return SymbolicReal._raw(
            {n: Fraction(c, self.den) for n, c in zip(self.names, vec) if c}
        )

    def pair(self) -> PermutationPair:
        return PermutationPair(
            tuple(self.alphabet[i] for i in self.top),
            tuple(self.alphabet[i] for i in self.bottom),
            self.alphabet,
        )

    def surface(self, basis) -> Surface:
        return Surface(
            self.pair(),
            {a: self.value(self.lam[i]) for i, a in enumerate(self.alphabet)},
            {a: self.value(self.tau[i]) for i, a in enumerate(self.alphabet)},
            basis,
            check=False,
        )


# --------------------------------------------------------------------------
# orbit log
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Checkpoint:
    step: int
    pair: PermutationPair
    matrix: tuple  # rows in alphabet order
    lengths: dict
    tau: dict

    def min_entry(self) -> int:
        return min(min(r) for r in self.matrix)

    def is_positive(self) -> bool:
        return self.min_entry() > 0


@dataclass
class OrbitLog:
    initial: Surface
    final: Surface
    direction: str
    steps: list = field(default_factory=list)
    sum_tau_signs: list = field(default_factory=list)
    max_abs_tau: list = field(default_factory=list)
    checkpoints: list = field(default_factory=list)
    win_counts: dict = field(default_factory=dict)
    horizon: int = 0
    stopped_at: int | None = None

    @property
    def stop_reason(self) -> str:
        return "orbit_stops" if self.stopped_at is not None else "max_steps"

    @property
    def alphabet(self):
        return self.initial.alphabet

    @property
    def basis(self):
        return self.initial.basis

    def winners(self) -> list:
        return [s.winner for s in self.steps]

    def to_jsonl(self) -> str:
        """One JSON object per line: steps, then checkpoint objects, then a summary."""
        lines = []
        for n, rec in enumerate(self.steps, start=1):
            lines.append(json.dumps({
                "index": n,
                "direction": rec.direction,
                "kind": rec.kind,
                "winner": rec.winner,
                "loser": rec.loser,
                "sum_tau_sign": self.sum_tau_signs[n - 1],
            }))
        for cp in self.checkpoints:
            lines.append(json.dumps({
                "checkpoint": cp.step,
                "top": list(cp.pair.top),
                "bottom": list(cp.pair.bottom),
                "matrix": [list(r) for r in cp.matrix],
                "lambda": {a: cp.lengths[a].to_json() for a in self.alphabet},
                "tau": {a: cp.tau[a].to_json() for a in self.alphabet},
            }))
        lines.append(json.dumps({
            "summary": {
                "steps": len(self.steps),
                "horizon": self.horizon,
                "stop_reason": self.stop_reason,
                "stopped_at": self.stopped_at,
                "win_counts": {a: self.win_counts[a] for a in self.alphabet},
            }
        }))
        return "\n".join(lines) + "\n"


def _check_cocycle(state: _IntegerState, lam0, tau0, step):
    d = len(state.mat)
    m = len(state.names)
    for i in range(d):
        row = state.mat[i]
        for vec, ref in ((lam0, state.lam[i]), (tau0, state.tau[i])):
            got = [sum(row[j] * vec[j][k] for j in range(d)) for k in range(m)]
            if got != ref:
                raise AssertionError(f"cocycle identity broken at step {step}")


def backward_orbit(surface: Surface, max_steps: int, checkpoint_every: int = 1,
                   *, backend=None, track_max: bool = True) -> OrbitLog:
    """Iterate backward steps until ``max_steps`` or until the sum of the
    suspension entries vanishes.

    Checkpoints (including step 0 and the last step) store the accumulated
    matrix and are checked against ``lambda^-n = A^-n lambda`` and
    ``tau^-n = A^-n tau``.  ``backend`` picks a kernel module explicitly.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    if checkpoint_every < 1:
        raise ValueError("checkpoint_every must be positive")
    impl = backend or kernel
    state = _IntegerState(surface)
    alphabet = state.alphabet
    lam0 = [list(v) for v in state.lam]
    tau0 = [list(v) for v in state.tau]
    log = OrbitLog(initial=surface, final=surface, direction=BACKWARD, horizon=max_steps)
    log.win_counts = {a: 0 for a in alphabet}
    kinds = (TOP, BOTTOM)

    def checkpoint(n):
        _check_cocycle(state, lam0, tau0, n)
        snap = state.surface(surface.basis)
        log.checkpoints.append(Checkpoint(
            n, snap.pair, tuple(tuple(r) for r in state.mat), snap.lengths, snap.tau,
        ))

    if track_max:
        amax, asign = impl.max_abs_index(state.tau, state.bounds, PRECISION_LADDER)
        log.max_abs_tau.append(state.value([asign * c for c in state.tau[amax]]))
    checkpoint(0)
    done = 0
    stopped = False
    while done < max_steps and not stopped:
        chunk = min(checkpoint_every - done % checkpoint_every, max_steps - done)
        try:
            records, stopped = impl.backward_run(
                state.top, state.bottom, state.lam, state.tau, state.mat, state.total,
                state.bounds, PRECISION_LADDER, chunk, track_max,
            )
        except PrecisionExhausted as exc:
            raise PrecisionExhausted(exc.args[0], step=done + 1) from exc
        for kind, w, loser, s, amax, asign, row in records:
            log.steps.append(StepRecord(BACKWARD, kinds[kind], alphabet[w], alphabet[loser]))
            log.sum_tau_signs.append(s)
            log.win_counts[alphabet[w]] += 1
            if track_max:
                log.max_abs_tau.append(state.value([asign * c for c in row]))
        done += len(records)
        if records and (done % checkpoint_every == 0 or done == max_steps or stopped):
            checkpoint(done)
        elif stopped and log.checkpoints[-1].step != done:
            checkpoint(done)
    if stopped:
        log.sum_tau_signs.append(0)
        log.stopped_at = done + 1
    log.final = state.surface(surface.basis)
    return log


def forward_orbit(surface: Surface, max_steps: int, checkpoint_every: int = 1) -> OrbitLog:
    """Forward induction with exact symbolic arithmetic (no kernel).

    Stops early when the two last intervals have equal length.
    """
    alphabet = surface.alphabet
    idx = {a: i for i, a in enumerate(alphabet)}
    d = len(alphabet)
    mat = [[int(i == j) for j in range(d)] for i in range(d)]
    log = OrbitLog(initial=surface, final=surface, direction=FORWARD, horizon=max_steps)
    log.win_counts = {a: 0 for a in alphabet}
    current = surface

    def checkpoint(n):
        log.checkpoints.append(Checkpoint(
            n, current.pair, tuple(tuple(r) for r in mat), dict(current.lengths), dict(current.tau),
        ))

    checkpoint(0)
    for n in range(1, max_steps + 1):
        s = current.basis.compare(current.lengths[current.pair.top[-1]],
                                  current.lengths[current.pair.bottom[-1]])
        if s == 0:
            log.stopped_at = n
            log.sum_tau_signs.append(0)
            break
        current, rec = forward_step_suspension(current)
        w, l = idx[rec.winner], idx[rec.loser]
        mat[w] = [x - y for x, y in zip(mat[w], mat[l])]
        log.steps.append(rec)
        log.sum_tau_signs.append(s)
        log.win_counts[rec.winner] += 1
        if n % checkpoint_every == 0 or n == max_steps:
            checkpoint(n)
    if log.stopped_at is not None and log.checkpoints[-1].step != len(log.steps):
        checkpoint(len(log.steps))
    log.final = current
    return log


# --------------------------------------------------------------------------
# monitors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolWins:
    symbol: str
    wins: int
    first_win: int | None
    last_win: int | None


@dataclass(frozen=True)
class CompletenessReport:
    """Bounded-horizon evidence about infinite completeness.

    ``frozen`` lists symbols that did not win during the last half of the
    horizon.  This is evidence only; the underlying statement concerns the
    infinite orbit.
    """

    horizon: int
    threshold: int
    symbols: tuple
    threshold_step: int | None
    exceptional_symbol: str | None
    positivity_checkpoint: int | None
    positive_after_threshold: bool | None
    frozen: tuple
    complete_path_ends: tuple = ()
    complete_path_step: int | None = None
    positive_after_complete_paths: bool | None = None
    label: str = "bounded-horizon evidence"

    def by_symbol(self) -> dict:
        return {s.symbol: s for s in self.symbols}

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "horizon": self.horizon,
            "threshold": self.threshold,
            "symbols": {s.symbol: {"wins": s.wins, "first_win": s.first_win, "last_win": s.last_win}
                        for s in self.symbols},
            "threshold_step": self.threshold_step,
            "exceptional_symbol": self.exceptional_symbol,
            "positivity_checkpoint": self.positivity_checkpoint,
            "positive_after_threshold": self.positive_after_threshold,
            "frozen": list(self.frozen),
            "complete_path_ends": list(self.complete_path_ends),
            "complete_path_step": self.complete_path_step,
            "positive_after_complete_paths": self.positive_after_complete_paths,
        }


def completeness_report(log: OrbitLog, d: int | None = None) -> CompletenessReport:
    d = d or len(log.alphabet)
    threshold = 2 * d - 2
    horizon = len(log.steps)
    counts = {a: 0 for a in log.alphabet}
    first: dict = {}
    last: dict = {}
    threshold_step = None
    exceptional = None
    for n, rec in enumerate(log.steps, start=1):
        a = rec.winner
        counts[a] += 1
        first.setdefault(a, n)
        last[a] = n
        if threshold_step is None:
            short = [b for b in log.alphabet if counts[b] < threshold]
            if len(short) <= 1:
                threshold_step = n
                exceptional = short[0] if short else None
    symbols = tuple(SymbolWins(a, counts[a], first.get(a), last.get(a)) for a in log.alphabet)
    cp_step = positive = None
    if threshold_step is not None:
        later = [cp for cp in log.checkpoints if cp.step >= threshold_step]
        if later:
            cp_step = later[0].step
            positive = later[0].is_positive()
    # Greedy cut of the winner sequence into complete paths (every symbol
    # wins at least once); a concatenation of 2d-3 of them gives a positive
    # matrix, whatever the individual win counts are.
    ends = []
    seen: set = set()
    for n, rec in enumerate(log.steps, start=1):
        seen.add(rec.winner)
        if len(seen) == len(log.alphabet):
            ends.append(n)
            seen = set()
    cpath_step = cpath_positive = None
    need = max(2 * d - 3, 1)
    if len(ends) >= need:
        cpath_step = ends[need - 1]
        later = [cp for cp in log.checkpoints if cp.step >= cpath_step]
        if later:
            cpath_positive = later[0].is_positive()
    frozen = ()
    if horizon:
        tail = math.ceil(horizon / 2)
        start = horizon - tail + 1
        frozen = tuple(a for a in log.alphabet if last.get(a, 0) < start)
    return CompletenessReport(horizon, threshold, symbols, threshold_step, exceptional,
                              cp_step, positive, frozen, tuple(ends), cpath_step, cpath_positive)


@dataclass(frozen=True)
class TauDecay:
    series: tuple  # (step, max_a |tau_a|)
    running_min: tuple
    threshold: SymbolicReal | None
    first_below: int | None

    def decreased(self, basis) -> bool:
        """Whether the running minimum ever drops strictly below the initial value."""
        return bool(self.series) and basis.compare(self.running_min[-1], self.series[0][1]) < 0


def tau_decay_monitor(log: OrbitLog, threshold=None) -> TauDecay:
    basis = log.basis
    series = tuple(enumerate(log.max_abs_tau))
    running = []
    current = None
    for _, v in series:
        if current is None or basis.compare(v, current) < 0:
            current = v
        running.append(current)
    first_below = None
    if threshold is not None:
        threshold = SymbolicReal.coerce(threshold)
        for (n, _), r in zip(series, running):
            if basis.compare(r, threshold) < 0:
                first_below = n
                break
    return TauDecay(series, tuple(running), threshold, first_below)


def min_entries(log: OrbitLog) -> list[tuple[int, int]]:
    return [(cp.step, cp.min_entry()) for cp in log.checkpoints]


def format_matrix(rows) -> str:
    return "\n".join(" ".join(str(x) for x in r) for r in rows)


__all__ = [
    "backward_type", "backward_winner", "backward_step", "forward_step_suspension",
    "backward_orbit", "forward_orbit", "OrbitLog", "Checkpoint", "completeness_report",
    "CompletenessReport", "tau_decay_monitor", "TauDecay", "min_entries",
]
