# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twin of ``_pykernel``; the two must stay behaviourally identical."""

from .errors import PrecisionExhausted

cdef int TOP = 0
cdef int BOTTOM = 1


cpdef int combination_sign(list coeffs, object bounds, tuple ladder) except? -2:
    cdef Py_ssize_t j, m = len(coeffs)
    cdef object c, lo, hi
    cdef list lows, highs
    for j in range(m):
        if coeffs[j]:
            break
    else:
        return 0
    for prec in ladder:
        lows, highs = bounds(prec)
        lo = 0
        hi = 0
        for j in range(m):
            c = coeffs[j]
            if c > 0:
                lo += c * lows[j]
                hi += c * highs[j]
            elif c < 0:
                lo += c * highs[j]
                hi += c * lows[j]
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    raise PrecisionExhausted("interval still straddles zero at maximum precision")


cpdef tuple max_abs_index(list tau, object bounds, tuple ladder):
    cdef Py_ssize_t i, j, best = 0, d = len(tau)
    cdef int s, best_sign
    cdef list row, ref, diff
    best_sign = combination_sign(tau[0], bounds, ladder)
    for i in range(1, d):
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


def backward_run(list top, list bottom, list lam, list tau, list mat, list total,
                 object bounds, tuple ladder, Py_ssize_t nsteps, bint track_max):
    cdef list records = []
    cdef Py_ssize_t step, j, k, m = len(total), d = len(mat)
    cdef Py_ssize_t w, beta, loser, amax
    cdef int s, kind, asign
    cdef list lw, lb, tw, tb, rw, rb
    for step in range(nsteps):
        s = combination_sign(total, bounds, ladder)
        if s == 0:
            return records, True
        if s < 0:
            kind = TOP
            w = top[len(top) - 1]
            j = bottom.index(w)
            beta = bottom[j + 1]
            loser = bottom[len(bottom) - 1]
            del bottom[j + 1]
            bottom.append(beta)
        else:
            kind = BOTTOM
            w = bottom[len(bottom) - 1]
            j = top.index(w)
            beta = top[j + 1]
            loser = top[len(top) - 1]
            del top[j + 1]
            top.append(beta)
        lw = lam[w]
        lb = lam[beta]
        tw = tau[w]
        tb = tau[beta]
        for k in range(m):
            lw[k] = lw[k] + lb[k]
            tw[k] = tw[k] + tb[k]
            total[k] = total[k] + tb[k]
        rw = mat[w]
        rb = mat[beta]
        for k in range(d):
            rw[k] = rw[k] + rb[k]
        if track_max:
            amax, asign = max_abs_index(tau, bounds, ladder)
            records.append((kind, w, loser, s, amax, asign, tuple(tau[amax])))
        else:
            records.append((kind, w, loser, s, None, None, None))
    return records, False
