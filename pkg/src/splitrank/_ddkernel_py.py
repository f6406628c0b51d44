"""Pure-Python double description kernel.

Integer arithmetic only: every generator is a gcd-normalized list of Python
ints, so the results are exact whatever their size.  The compiled twin in
``_ddkernel.pyx`` implements the same two functions with the same semantics.
"""
from math import gcd

BACKEND = "python"


def _normalize(v):
    g = gcd(*v)
    if g > 1:
        return [x // g for x in v]
    return v


def _dot(a, v):
    s = 0
    for x, y in zip(a, v):
        if x:
            s += x * y
    return s


def adjacent_pairs(masks, left, right, min_common, symmetric=False):
    """Pairs ``(i, j)`` whose common zero set is not covered by another mask.

    ``masks`` are Python ints used as bitsets.  A pair is kept when its common
    zero set has at least ``min_common`` bits and no third mask contains it.
    With ``symmetric`` only ``i < j`` is tested.
    """
    out = []
    nmask = len(masks)
    for i in left:
        mi = masks[i]
        for j in right:
            if symmetric and j <= i:
                continue
            if j == i:
                continue
            common = mi & masks[j]
            if bin(common).count("1") < min_common:
                continue
            for r in range(nmask):
                if r != i and r != j and masks[r] & common == common:
                    break
            else:
                out.append((i, j))
    return out


def dd_cone(dim, eqs, ineqs):
    """Generators of ``{y : a.y = 0 for a in eqs, a.y >= 0 for a in ineqs}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and one
    representative per extreme ray of the cone modulo lineality.  Constraints
    are processed equalities first, then inequalities, in the order given.
    """
    lin = [[int(i == j) for j in range(dim)] for i in range(dim)]
    rays = []
    masks = []
    processed = 0
    constraints = [(list(a), True) for a in eqs] + [(list(a), False) for a in ineqs]
    for idx, (a, is_eq) in enumerate(constraints):
        bit = 1 << idx
        lvals = [_dot(a, l) for l in lin]
        piv = next((i for i, v in enumerate(lvals) if v), None)
        if piv is not None:
            l0 = lin[piv]
            s = lvals[piv]
            if s < 0:
                l0 = [-x for x in l0]
                s = -s
            newlin = []
            for i, l in enumerate(lin):
                if i == piv:
                    continue
                v = lvals[i]
                if v:
                    l = _normalize([s * x - v * y for x, y in zip(l, l0)])
                newlin.append(l)
            lin = newlin
            for i, r in enumerate(rays):
                v = _dot(a, r)
                if v:
                    rays[i] = _normalize([s * x - v * y for x, y in zip(r, l0)])
                masks[i] |= bit
            if not is_eq:
                rays.append(l0)
                masks.append(processed)
        else:
            vals = [_dot(a, r) for r in rays]
            pos = [i for i, v in enumerate(vals) if v > 0]
            neg = [i for i, v in enumerate(vals) if v < 0]
            zero = [i for i, v in enumerate(vals) if v == 0]
            new_rays = []
            new_masks = []
            if pos and neg:
                min_common = dim - len(lin) - 2
                for p, n in adjacent_pairs(masks, pos, neg, min_common):
                    vp, vn = vals[p], -vals[n]
                    rp, rn = rays[p], rays[n]
                    new_rays.append(_normalize([vp * x + vn * y for x, y in zip(rn, rp)]))
                    new_masks.append((masks[p] & masks[n]) | bit)
            keep_rays = []
            keep_masks = []
            if not is_eq:
                for i in pos:
                    keep_rays.append(rays[i])
                    keep_masks.append(masks[i])
            for i in zero:
                keep_rays.append(rays[i])
                keep_masks.append(masks[i] | bit)
            rays = keep_rays + new_rays
            masks = keep_masks + new_masks
        processed |= bit
    return lin, rays
