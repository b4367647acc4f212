"""Command-line frontend.

Subcommands: synth, verify, realize, factor, solve, cascade, dwt, idwt.
Mask/realization data travels as JSON, signals and cascade samples as CSV.
`MWFORGE_TOL` overrides the default tolerance when --tol is not given.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import formats, synthesis
from .filterbank import analyze, cascade, synthesize
from .masks import (RT2, MaskPair, PolyphaseMatrix, SumRuleVectors,
                    polyphase_assemble, polyphase_split, sum_rule_residual,
                    symbol_eval, vanishing_moment_residual)
from .qmf import displacement_residual, qmf_residual, uep_residual
from .realization import (build_abcd, nilpotency_residual,
                          state_equation_residual, unitarity_residual)

_FLOAT_FIELDS = ("qmf_residual", "uep_residual", "abcd_unitarity",
                 "u_unitarity", "nilpotency", "displacement", "state_equation")


@dataclass
class VerificationReport:
    qmf_residual: float
    uep_residual: float
    abcd_unitarity: float
    u_unitarity: float
    nilpotency: float
    displacement: float
    state_equation: float
    sum_rule_order_achieved: int
    vanishing_moment_order_achieved: int
    passed: bool

    def to_json(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "passed"}
        d["pass"] = self.passed
        return d


def detect_sum_rule_vectors(p, tol: float = 1e-6):
    """Eigenvectors of p(1) with eigenvalue sqrt(2), canonically scaled.

    Returns None when no eigenvalue is close enough; rank-1 families yield
    one vector, full-rank families all M.
    """
    lam, vecs = np.linalg.eig(symbol_eval(p, 1.0))
    cols = [i for i in range(len(lam)) if abs(lam[i] - RT2) < tol]
    if not cols:
        return None
    rows = []
    for i in cols:
        v = vecs[:, i]
        v = v / v[int(np.argmax(np.abs(v)))]
        rows.append(v / np.linalg.norm(v))
    V = np.array(rows)
    if np.linalg.matrix_rank(V, tol=1e-8) < V.shape[0]:
        V = V[:1]
    return SumRuleVectors(V)


def _achieved_order(residual_fn, mask, v, tol: float) -> int:
    achieved = 0
    for order in range(1, mask.n + 3):
        try:
            r = residual_fn(mask, v, order)
        except ValueError:
            break
        if r < tol:
            achieved = order
        else:
            break
    return achieved


def _pad_constant(F: PolyphaseMatrix) -> PolyphaseMatrix:
    """Degree-0 polyphase matrices get one zero coefficient so the ABCD
    machinery applies (A = F0, everything else vanishes)."""
    if F.N > 0:
        return F
    zero = np.zeros_like(F.coeffs[0])
    return PolyphaseMatrix(np.array([F.coeffs[0], zero]))


def build_report(pair: MaskPair, tol: float, samples: int, seed: int) -> VerificationReport:
    F = polyphase_assemble(pair)
    Fr = _pad_constant(F)
    R = build_abcd(Fr)
    v = detect_sum_rule_vectors(pair.p)
    if v is None:
        sr = vm = 0
    else:
        sr = _achieved_order(sum_rule_residual, pair.p, v, tol)
        vm = _achieved_order(vanishing_moment_residual, pair.q, v, tol)
    rep = VerificationReport(
        qmf_residual=qmf_residual(F),
        uep_residual=uep_residual(F),
        abcd_unitarity=unitarity_residual(R.block_matrix),
        u_unitarity=unitarity_residual(R.U),
        nilpotency=nilpotency_residual(R),
        displacement=displacement_residual(Fr, samples=samples, seed=seed),
        state_equation=state_equation_residual(R, Fr, samples=samples, seed=seed),
        sum_rule_order_achieved=sr,
        vanishing_moment_order_achieved=vm,
        passed=True,
    )
    rep.passed = all(getattr(rep, f) < tol for f in _FLOAT_FIELDS)
    return rep


def _resolve_tol(args) -> float:
    if args.tol is not None:
        return args.tol
    return float(os.environ.get("MWFORGE_TOL", "1e-10"))


def _load_pair(path: str) -> MaskPair:
    return formats.mask_pair_from_json(formats.load_json(path))


def cmd_synth(args) -> int:
    pair = synthesis.build_family(args.family, b=args.b, b1=args.b1,
                                  b2=args.b2, sign=args.sign, ell=args.ell)
    formats.save_json(formats.mask_pair_to_json(pair), args.out)
    tol = _resolve_tol(args)
    v = synthesis.designated_vectors(args.family)
    sr = _achieved_order(sum_rule_residual, pair.p, v, tol)
    vm = _achieved_order(vanishing_moment_residual, pair.q, v, tol)
    print(f"wrote {args.out} (M={pair.M}, n={pair.n})")
    print(f"sum rules achieved: order {sr}")
    print(f"vanishing moments achieved: order {vm}")
    return 0


def cmd_verify(args) -> int:
    pair = _load_pair(args.mask)
    tol = _resolve_tol(args)
    rep = build_report(pair, tol, args.samples, args.seed)
    for name in _FLOAT_FIELDS:
        print(f"{name:28s} {getattr(rep, name):.3e}")
    print(f"{'sum_rule_order_achieved':28s} {rep.sum_rule_order_achieved}")
    print(f"{'vanishing_moment_order_achieved':28s} {rep.vanishing_moment_order_achieved}")
    print(f"pass: {'true' if rep.passed else 'false'} (tol {tol:g})")
    if args.json:
        formats.save_json(rep.to_json(), args.json)
    return 0 if rep.passed else 1


def cmd_realize(args) -> int:
    pair = _load_pair(args.mask)
    F = _pad_constant(polyphase_assemble(pair))
    R = build_abcd(F)
    formats.save_json(formats.realization_to_json(R), args.out)
    print(f"wrote {args.out} (M={R.M}, N={R.N})")
    print(f"block unitarity residual: {unitarity_residual(R.block_matrix):.3e}")
    print(f"U unitarity residual:     {unitarity_residual(R.U):.3e}")
    return 0


def cmd_factor(args) -> int:
    if args.family is not None:
        if args.family != "d6-potapov":
            raise ValueError(f"no factored form for family: {args.family}")
        b1, b2 = synthesis.solve_blaschke_d6()
    elif args.b1 is not None and args.b2 is not None:
        b1, b2 = args.b1, args.b2
    else:
        raise ValueError("factor needs --family or both --b1 and --b2")
    factors = [synthesis.BlaschkeFactor(synthesis.scalar_projection(b, "-"))
               for b in (b1, b2)]
    tail = synthesis.FullRankUnitary(1.0).U.conj().T
    pair = polyphase_split(synthesis.blaschke_product(factors, tail))
    formats.save_json(formats.mask_pair_to_json(pair), args.out)
    print(f"wrote {args.out} (b1={b1!r}, b2={b2!r})")
    return 0


def cmd_solve(args) -> int:
    if args.family == "d4":
        params = {"b": synthesis.solve_scalar_order2()}
    elif args.family == "d6":
        params = {"t": synthesis.solve_d6()}
    elif args.family == "d6-potapov":
        b1, b2 = synthesis.solve_blaschke_d6()
        params = {"b1": b1, "b2": b2}
    else:
        raise ValueError(f"no solver for family: {args.family}")
    out = {"family": args.family, "params": params}
    print(json.dumps(out))
    if args.out:
        formats.save_json(out, args.out)
    return 0


def cmd_cascade(args) -> int:
    pair = _load_pair(args.mask)
    v = detect_sum_rule_vectors(pair.p)
    if v is None:
        raise ValueError("mask has no sum-rule vector: cascade would diverge")
    result = cascade(pair, v, args.levels)
    formats.cascade_to_csv(result, args.out)
    print(f"wrote {args.out} (level {result.level}, step {result.step:g})")
    if result.diffs:
        print(f"last sup-difference: {result.diffs[-1]:.3e}")
    if args.plot:
        png = os.path.splitext(args.out)[0] + ".png"
        _plot_cascade(result, png)
        print(f"wrote {png}")
    return 0


def _plot_cascade(result, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    M = result.phi.shape[1]
    fig, axes = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for j in range(M):
        axes[0].step(result.x, result.phi[:, j].real, where="post",
                     label=f"phi_{j + 1}", lw=1.0)
        axes[1].step(result.x, result.psi[:, j].real, where="post",
                     label=f"psi_{j + 1}", lw=1.0)
    axes[0].set_ylabel("phi")
    axes[1].set_ylabel("psi")
    axes[1].set_xlabel("x")
    for ax in axes:
        ax.legend(loc="best", fontsize=8)
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_dwt(args) -> int:
    pair = _load_pair(args.mask)
    sig = formats.signal_from_csv(args.signal)
    sub = analyze(sig, pair)
    formats.subbands_to_csv(sub, args.out)
    print(f"wrote {args.out} ({sub.low.L} low + {sub.high.L} high rows)")
    return 0


def cmd_idwt(args) -> int:
    pair = _load_pair(args.mask)
    sub = formats.subbands_from_csv(args.subbands)
    sig = synthesize(sub, pair)
    formats.signal_to_csv(sig, args.out)
    print(f"wrote {args.out} ({sig.L} rows)")
    return 0


def _add_common(sp) -> None:
    sp.add_argument("--tol", type=float, default=None,
                    help="residual tolerance (default 1e-10 or MWFORGE_TOL)")
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mwforge",
        description="Orthogonal (multi)wavelet filter banks from unitary "
                    "system realizations.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="construct a built-in mask family")
    sp.add_argument("family", choices=synthesis.FAMILY_NAMES)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--b1", type=float, default=None)
    sp.add_argument("--b2", type=float, default=None)
    sp.add_argument("--sign", choices=["+", "-"], default="+")
    sp.add_argument("--ell", type=float, default=None)
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("verify", help="residual report for a mask file")
    sp.add_argument("mask")
    sp.add_argument("--json", default=None, help="also write the report as JSON")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("realize", help="build the ABCD realization")
    sp.add_argument("mask")
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("factor", help="mask pair from degree-1 factors")
    sp.add_argument("--family", default=None)
    sp.add_argument("--b1", type=float, default=None)
    sp.add_argument("--b2", type=float, default=None)
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("solve", help="solve family parameters from moment conditions")
    sp.add_argument("family")
    sp.add_argument("-o", "--out", default=None)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("cascade", help="render phi/psi samples to CSV")
    sp.add_argument("mask")
    sp.add_argument("--levels", type=int, default=10)
    sp.add_argument("--plot", action="store_true",
                    help="also write a PNG next to the CSV")
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(func=cmd_cascade)

    sp = sub.add_parser("dwt", help="analysis transform of a signal CSV")
    sp.add_argument("signal")
    sp.add_argument("--mask", required=True)
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(func=cmd_dwt)

    sp = sub.add_parser("idwt", help="synthesis transform of a subband CSV")
    sp.add_argument("subbands")
    sp.add_argument("--mask", required=True)
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(func=cmd_idwt)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
