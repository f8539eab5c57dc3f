"""Pure-Python hot loops.  ``_ckernel.pyx`` mirrors this file line for line.

State is kept in integer form: every length and suspension entry is a
vector of integer coefficients over a fixed list of basis symbols, all
scaled by one common positive denominator.  ``bounds(prec)`` returns the
fixed-point witness enclosures ``(lows, highs)`` for that basis list.
"""

from .errors import PrecisionExhausted

TOP = 0
BOTTOM = 1


def combination_sign(coeffs, bounds, ladder):
    for c in coeffs:
        if c:
            break
    else:
        return 0
    for prec in ladder:
        lows, highs = bounds(prec)
        lo = 0
        hi = 0
        for c, l, h in zip(coeffs, lows, highs):
            if c > 0:
                lo += c * l
                hi += c * h
            elif c < 0:
                lo += c * h
                hi += c * l
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    raise PrecisionExhausted("interval still straddles zero at maximum precision")


def max_abs_index(tau, bounds, ladder):
    """Index and sign of the entry of largest absolute value (first on ties)."""
    best = 0
    best_sign = combination_sign(tau[0], bounds, ladder)
    for i in range(1, len(tau)):
        s = combination_sign(tau[i], bounds, ladder)
        if s == 0:
            continue
        row = tau[i]
        ref = tau[best]
        diff = [s * row[j] - best_sign * ref[j] for j in range(len(row))]
        if combination_sign(diff, bounds, ladder) > 0:
            best = i
            best_sign = s
    return best, best_sign


def backward_run(top, bottom, lam, tau, mat, total, bounds, ladder, nsteps, track_max):
    """Apply up to ``nsteps`` backward steps in place.

    ``total`` is the running column sum of ``tau``.  Returns ``(records,
    stopped)``; each record is ``(kind, winner, loser, sum_sign, amax,
    amax_sign, amax_row)`` where the last three describe the largest
    ``|tau|`` entry after the step (``None`` when ``track_max`` is false).
    ``stopped`` is true when the sum vanished before all steps were done.
    """
    records = []
    m = len(total)
    for _ in range(nsteps):
        s = combination_sign(total, bounds, ladder)
        if s == 0:
            return records, True
        if s < 0:
            kind = TOP
            w = top[-1]
            j = bottom.index(w)
            beta = bottom[j + 1]
            loser = bottom[-1]
            del bottom[j + 1]
            bottom.append(beta)
        else:
            kind = BOTTOM
            w = bottom[-1]
            j = top.index(w)
            beta = top[j + 1]
            loser = top[-1]
            del top[j + 1]
            top.append(beta)
        lw = lam[w]
        lb = lam[beta]
        tw = tau[w]
        tb = tau[beta]
        for k in range(m):
            lw[k] += lb[k]
            tw[k] += tb[k]
            total[k] += tb[k]
        rw = mat[w]
        rb = mat[beta]
        for k in range(len(rw)):
            rw[k] += rb[k]
        if track_max:
            amax, asign = max_abs_index(tau, bounds, ladder)
            records.append((kind, w, loser, s, amax, asign, tuple(tau[amax])))
        else:
            records.append((kind, w, loser, s, None, None, None))
    return records, False
