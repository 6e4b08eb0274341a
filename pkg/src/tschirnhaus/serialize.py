"""Stable JSON formats for scalars, polynomials, subspaces, and certificates.

Scalars serialize as decimal-string pairs ["re", "im"] at a digit count
fixed by the certificate's precision, which is what makes reruns with the
same seed and precision byte-identical.
"""

from __future__ import annotations

import json

import mpmath as mp

from .multipoly import MultiPoly
from .numeric import UniPoly, mpc_of
from .obliteration import ProjPoint, SolveLog
from .transform import MonicPoly, Transformation


def digits_for_bits(bits):
    return int(bits * 0.30103) + 6


def scalar_to_json(z, dps):
    z = mpc_of(z)
    with mp.workprec(int(dps * 3.33) + 16):
        return [mp.nstr(z.real, dps, strip_zeros=True),
                mp.nstr(z.imag, dps, strip_zeros=True)]


def scalar_from_json(pair, bits):
    with mp.workprec(bits + 32):
        return mp.mpc(mp.mpf(pair[0]), mp.mpf(pair[1]))


def scalars_to_json(vals, dps):
    return [scalar_to_json(z, dps) for z in vals]


def scalars_from_json(items, bits):
    return tuple(scalar_from_json(p, bits) for p in items)


def unipoly_to_json(u, dps):
    return {"coeffs": scalars_to_json(u.coeffs, dps)}


def unipoly_from_json(obj, bits):
    return UniPoly(scalars_from_json(obj["coeffs"], bits))


def monic_to_json(p, dps):
    return {"n": p.n, "a": scalars_to_json(p.a, dps)}


def monic_from_json(obj, bits):
    return MonicPoly(int(obj["n"]), scalars_from_json(obj["a"], bits))


def transformation_to_json(t, dps):
    return {"b": scalars_to_json(t.b, dps)}


def transformation_from_json(obj, n, bits):
    return Transformation(n, scalars_from_json(obj["b"], bits))


def multipoly_to_json(f, dps):
    return {
        "nvars": f.nvars,
        "degree": f.degree,
        "terms": [{"exps": list(e), "c": scalar_to_json(c, dps)}
                  for e, c in f.sorted_terms()],
    }


def multipoly_from_json(obj, bits):
    terms = {tuple(t["exps"]): scalar_from_json(t["c"], bits)
             for t in obj["terms"]}
    return MultiPoly(int(obj["nvars"]), int(obj["degree"]), terms)


def subspace_to_json(s, dps):
    return {
        "ambient": s.ambient,
        "dim": s.dim,
        "basis": [scalars_to_json(v, dps) for v in s.basis],
    }


def subspace_from_json(obj, bits):
    from .subspaces import LinearSubspace
    return LinearSubspace(
        int(obj["ambient"]), int(obj["dim"]),
        tuple(scalars_from_json(v, bits) for v in obj["basis"]))


def point_to_json(p, dps):
    coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
    return scalars_to_json(coords, dps)


def solvelog_to_json(log):
    return [[label, degree] for label, degree in log.entries]


def solvelog_from_json(items):
    log = SolveLog()
    for label, degree in items:
        log.record(label, degree)
    return log


def dumps(obj):
    return json.dumps(obj, indent=2) + "\n"
