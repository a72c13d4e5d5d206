"""JSON serialization for triple systems, symmetric algebras, and pairs.

The format is canonical: keys are sorted, separators are fixed, bracket
entries are listed in lexicographic index order, and exact values are
rendered as fraction strings.  Saving what was just loaded reproduces the
file byte for byte, which makes fixtures diffable and cache-friendly.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from triplekit import lts as lt
from triplekit import numerics as nx
from triplekit import symlie as sl
from triplekit import sympair as sp
from triplekit.numerics import FLOAT, RATIONAL


class FormatError(ValueError):
    """The document does not describe a known object."""


def _enc(x, mode):
    return str(x) if mode == RATIONAL else float(x)


def _dec(v, mode):
    return Fraction(v) if mode == RATIONAL else float(v)


def _enc_matrix(m, mode):
    return [[_enc(x, mode) for x in row] for row in m]


def _dec_matrix(rows, mode):
    if mode == RATIONAL:
        return nx.rational_array([[str(x) for x in row] for row in rows])
    return np.array(rows, dtype=float)


def _labels_out(labels):
    return list(labels) if labels is not None else None


def _labels_in(v):
    return tuple(v) if v is not None else None


# ----------------------------------------------------------------- to dicts

def lts_to_dict(system: lt.LieTripleSystem) -> dict:
    entries = []
    d = system.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    x = system.tensor[i, j, k, l]
                    if x != 0:
                        entries.append([i, j, k, l, _enc(x, system.mode)])
    return {"kind": "lts", "dim": d, "mode": system.mode,
            "labels": _labels_out(system.labels), "bracket": entries}


def lie_to_dict(algebra: sl.LieAlgebra) -> dict:
    entries = []
    d = algebra.dim
    for i in range(d):
        for j in range(d):
            for k in range(d):
                x = algebra.tensor[i, j, k]
                if x != 0:
                    entries.append([i, j, k, _enc(x, algebra.mode)])
    return {"kind": "lie", "dim": d, "mode": algebra.mode,
            "labels": _labels_out(algebra.labels), "bracket": entries}


def symmetric_to_dict(sla: sl.SymmetricLieAlgebra) -> dict:
    return {"kind": "symmetric_lie",
            "algebra": lie_to_dict(sla.algebra),
            "theta": _enc_matrix(sla.theta, sla.algebra.mode)}


def pair_to_dict(pair: sp.MatrixSymmetricPair) -> dict:
    exact = pair.exact_basis is not None
    mode = RATIONAL if exact else FLOAT
    mats = pair.exact_basis if exact else pair.lie_basis
    basis = [_enc_matrix(m, mode) for m in mats]
    if isinstance(pair.sigma, sp.SigmaTransposeInverse):
        sigma = "transpose_inverse"
    else:
        if exact and pair.exact_sigma_matrix is not None:
            sigma = {"conjugation_by": _enc_matrix(pair.exact_sigma_matrix, RATIONAL)}
        else:
            sigma = {"conjugation_by": _enc_matrix(pair.sigma.matrix, FLOAT)}
    return {"kind": "pair", "ambient_n": pair.ambient_n, "mode": mode,
            "basis": basis, "sigma": sigma,
            "policy": pair.fixed_group_policy, "name": pair.name}


# --------------------------------------------------------------- from dicts

def lts_from_dict(doc: dict) -> lt.LieTripleSystem:
    d = int(doc["dim"])
    mode = doc["mode"]
    tensor = nx.zeros((d, d, d, d), mode)
    for i, j, k, l, v in doc["bracket"]:
        tensor[i, j, k, l] = _dec(v, mode)
    return lt.LieTripleSystem(d, tensor, mode, _labels_in(doc.get("labels")))


def lie_from_dict(doc: dict) -> sl.LieAlgebra:
    d = int(doc["dim"])
    mode = doc["mode"]
    tensor = nx.zeros((d, d, d), mode)
    for i, j, k, v in doc["bracket"]:
        tensor[i, j, k] = _dec(v, mode)
    return sl.LieAlgebra(d, tensor, mode, _labels_in(doc.get("labels")))


def symmetric_from_dict(doc: dict) -> sl.SymmetricLieAlgebra:
    algebra = lie_from_dict(doc["algebra"])
    theta = _dec_matrix(doc["theta"], algebra.mode)
    return sl.SymmetricLieAlgebra(algebra, theta)


def pair_from_dict(doc: dict) -> sp.MatrixSymmetricPair:
    mode = doc.get("mode", FLOAT)
    exact = mode == RATIONAL
    mats = [_dec_matrix(m, mode) for m in doc["basis"]]
    lie_basis = [nx.to_float(m) for m in mats] if exact else mats
    sigma_doc = doc["sigma"]
    exact_sigma = None
    if sigma_doc == "transpose_inverse":
        sigma = sp.SigmaTransposeInverse()
    elif isinstance(sigma_doc, dict) and "conjugation_by" in sigma_doc:
        smat = _dec_matrix(sigma_doc["conjugation_by"], mode)
        if exact:
            exact_sigma = smat
            sigma = sp.SigmaConjugation(nx.to_float(smat))
        else:
            sigma = sp.SigmaConjugation(smat)
    else:
        raise FormatError("unknown sigma description")
    return sp.MatrixSymmetricPair(
        int(doc["ambient_n"]), lie_basis, sigma,
        fixed_group_policy=doc.get("policy", sp.FULL_FIXED_GROUP),
        name=doc.get("name", ""),
        exact_basis=mats if exact else None,
        exact_sigma_matrix=exact_sigma)


# ------------------------------------------------------------------ file API

_TO = {
    lt.LieTripleSystem: lts_to_dict,
    sl.LieAlgebra: lie_to_dict,
    sl.SymmetricLieAlgebra: symmetric_to_dict,
    sp.MatrixSymmetricPair: pair_to_dict,
}

_FROM = {
    "lts": lts_from_dict,
    "lie": lie_from_dict,
    "symmetric_lie": symmetric_from_dict,
    "pair": pair_from_dict,
}


def to_dict(obj) -> dict:
    fn = _TO.get(type(obj))
    if fn is None:
        raise FormatError(f"cannot serialize {type(obj).__name__}")
    return fn(obj)


def sniff_kind(doc: dict) -> str:
    """Recover the document kind, trusting the tag but surviving without it."""
    kind = doc.get("kind")
    if kind in _FROM:
        return kind
    if "sigma" in doc and "basis" in doc:
        return "pair"
    if "theta" in doc and "algebra" in doc:
        return "symmetric_lie"
    if "bracket" in doc and doc.get("bracket") is not None:
        arity = len(doc["bracket"][0]) if doc["bracket"] else None
        if arity == 5 or (arity is None and "dim" in doc):
            return "lts"
        if arity == 4:
            return "lie"
        return "lts"
    raise FormatError("document matches no known object layout")


def from_dict(doc: dict):
    return _FROM[sniff_kind(doc)](doc)


def dumps(obj) -> str:
    doc = to_dict(obj) if not isinstance(obj, dict) else obj
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save(path, obj) -> None:
    with open(path, "w") as f:
        f.write(dumps(obj))


def load(path):
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    return from_dict(doc)
