"""JSON and CSV codecs shared by the CLI.

Complex scalars serialize as [re, im]; matrices as row-major nested lists.
JSON round-trips bit-exactly (shortest repr floats); CSV cells hold
`re;im` pairs and round-trip value-exactly.
"""
from __future__ import annotations

import csv
import json

import numpy as np

from .filterbank import CascadeResult, Signal, SubbandPair
from .masks import MaskPair, MatrixMask, PolyphaseMatrix
from .realization import Realization

__all__ = [
    "mask_pair_to_json",
    "mask_pair_from_json",
    "polyphase_to_json",
    "polyphase_from_json",
    "realization_to_json",
    "realization_from_json",
    "save_json",
    "load_json",
    "signal_to_csv",
    "signal_from_csv",
    "subbands_to_csv",
    "subbands_from_csv",
    "cascade_to_csv",
    "cascade_from_csv",
]


def _matrix_to_lists(A):
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def _matrix_from_lists(rows) -> np.ndarray:
    return np.array([[complex(c[0], c[1]) for c in row] for row in rows])


def mask_pair_to_json(pair: MaskPair) -> dict:
    return {
        "M": pair.M,
        "n": pair.n,
        "p": [_matrix_to_lists(c) for c in pair.p.coeffs],
        "q": [_matrix_to_lists(c) for c in pair.q.coeffs],
    }


def mask_pair_from_json(data: dict) -> MaskPair:
    p = np.array([_matrix_from_lists(c) for c in data["p"]])
    q = np.array([_matrix_from_lists(c) for c in data["q"]])
    pair = MaskPair(MatrixMask(p), MatrixMask(q))
    if pair.M != data["M"] or pair.n != data["n"]:
        raise ValueError("mask JSON header disagrees with coefficient shapes")
    return pair


def polyphase_to_json(F: PolyphaseMatrix) -> dict:
    return {"M": F.M, "N": F.N, "F": [_matrix_to_lists(c) for c in F.coeffs]}


def polyphase_from_json(data: dict) -> PolyphaseMatrix:
    F = PolyphaseMatrix(np.array([_matrix_from_lists(c) for c in data["F"]]))
    if F.M != data["M"] or F.N != data["N"]:
        raise ValueError("polyphase JSON header disagrees with coefficient shapes")
    return F


def realization_to_json(R: Realization) -> dict:
    return {
        "M": R.M,
        "N": R.N,
        "A": _matrix_to_lists(R.A),
        "B": _matrix_to_lists(R.B),
        "C": _matrix_to_lists(R.C),
        "D": _matrix_to_lists(R.D),
        "U": _matrix_to_lists(R.U),
    }


def realization_from_json(data: dict) -> Realization:
    return Realization(
        M=data["M"],
        N=data["N"],
        A=_matrix_from_lists(data["A"]),
        B=_matrix_from_lists(data["B"]),
        C=_matrix_from_lists(data["C"]),
        D=_matrix_from_lists(data["D"]),
        U=_matrix_from_lists(data["U"]),
    )


def save_json(data: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _cell(z: complex) -> str:
    return f"{float(z.real)!r};{float(z.imag)!r}"


def _uncell(s: str) -> complex:
    re, im = s.split(";")
    return complex(float(re), float(im))


def signal_to_csv(sig: Signal, path: str) -> None:
    """One row per sample, M `re;im` columns, no header."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in sig.values:
            w.writerow([_cell(z) for z in row])


def signal_from_csv(path: str) -> Signal:
    with open(path, newline="") as fh:
        rows = [[_uncell(c) for c in row] for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError("empty signal file")
    return Signal(np.array(rows))


def subbands_to_csv(s: SubbandPair, path: str) -> None:
    """Low rows stacked over high rows (a length-L signal file)."""
    stacked = Signal(np.vstack([s.low.values, s.high.values]))
    signal_to_csv(stacked, path)


def subbands_from_csv(path: str) -> SubbandPair:
    stacked = signal_from_csv(path)
    K = stacked.L // 2
    return SubbandPair(Signal(stacked.values[:K]), Signal(stacked.values[K:]))


def cascade_to_csv(result: CascadeResult, path: str) -> None:
    M = result.phi.shape[1]
    header = (["x"] + [f"phi_{j + 1}" for j in range(M)]
              + [f"psi_{j + 1}" for j in range(M)])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for x, prow, qrow in zip(result.x, result.phi, result.psi):
            w.writerow([repr(float(x))] + [_cell(z) for z in prow]
                       + [_cell(z) for z in qrow])


def cascade_from_csv(path: str):
    """Return (x, phi, psi) arrays from a cascade CSV."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        M = (len(header) - 1) // 2
        xs, phis, psis = [], [], []
        for row in r:
            if not row:
                continue
            xs.append(float(row[0]))
            phis.append([_uncell(c) for c in row[1:1 + M]])
            psis.append([_uncell(c) for c in row[1 + M:1 + 2 * M]])
    return np.array(xs), np.array(phis), np.array(psis)
