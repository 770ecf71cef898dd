"""Check suites for completely positive maps and for the quantum language."""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import cpm, qcat
from .laws import LawUniverse, check_free_laws, check_linear_laws, check_plus_laws
from .linalg import DEFAULT_TOL, Tolerance, matrix_to_json
from .qlc import COIN, TELEPORT, denote_program, parse_program
from .report import FAIL, PASS, CheckRecord

__all__ = ["transpose_map", "check_kraus_roundtrip", "check_transpose_rejected", "cpm_suite", "qlc_suite"]


def transpose_map(d: int) -> cpm.LinMap:
    """``rho -> rho^T``: positive but not completely positive for ``d >= 2``."""
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            # C[(i,a),(j,b)] = (|i><j|^T)[a,b] = [a==j][b==i]
            swap[i * d + j, j * d + i] = 1
    return cpm.LinMap(d, d, swap)


def check_kraus_roundtrip(seed: int = 0, n: int = 100, tol: Tolerance = DEFAULT_TOL) -> CheckRecord:
    rng = np.random.default_rng([seed, 10])
    worst = 0.0
    for case in range(n):
        din, dout, k = (int(v) for v in (rng.integers(1, 5), rng.integers(1, 5), rng.integers(1, 5)))
        ks = cpm.random_kraus(din, dout, k, rng)
        f = cpm.kraus_to_choi(ks)
        back = cpm.kraus_to_choi(cpm.choi_to_kraus(f, tol))
        rho = cpm.random_density(din, rng)
        direct = sum(op @ rho @ op.conj().T for op in ks.ops)
        for got in (cpm.apply(f, rho), cpm.apply(back, rho)):
            dev = float(np.max(np.abs(got - direct)))
            worst = max(worst, dev)
            if dev > tol.eps_eq * (1 + float(np.max(np.abs(direct)))):
                return CheckRecord("kraus_roundtrip", FAIL, {
                    "case": case, "kraus": ks.to_json(), "rho": matrix_to_json(rho), "deviation": dev,
                })
    return CheckRecord("kraus_roundtrip", PASS, {"cases": n, "max_deviation": worst})


def check_transpose_rejected(tol: Tolerance = DEFAULT_TOL) -> CheckRecord:
    evidence = {}
    for d in (2, 3):
        t = transpose_map(d)
        if cpm.is_completely_positive(t, tol):
            return CheckRecord("transpose_rejected", FAIL, {"dim": d, "choi": matrix_to_json(t.choi)})
        evidence[f"min_choi_eigenvalue_d{d}"] = float(np.linalg.eigvalsh(t.choi).min())
    return CheckRecord("transpose_rejected", PASS, evidence)


def check_channel_membership(seed: int = 0, n: int = 50, tol: Tolerance = DEFAULT_TOL) -> CheckRecord:
    """Random channels are in ``Q_s'``, subchannels in ``Q_s``, scaled-up maps in neither."""
    rng = np.random.default_rng([seed, 11])
    for case in range(n):
        din, dout = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        tp, tni = cpm.random_tp_map(din, dout, rng), cpm.random_tni_map(din, dout, rng)
        bad = cpm.scale(2.0, tp)
        if not (cpm.is_Qs_prime(tp, tol) and cpm.is_Qs(tni, tol)) or cpm.is_Qs(bad, tol):
            return CheckRecord("channel_membership", FAIL, {"case": case, "tp": tp.to_json(), "tni": tni.to_json()})
    return CheckRecord("channel_membership", PASS, {"cases": n})


def cpm_suite(
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    laws: LawUniverse | None = None,
    keep: Callable[[str], bool] | None = None,
) -> list[CheckRecord]:
    """Choi/Kraus checks then the law suites; ``keep`` skips unselected groups before they run."""
    laws = laws or LawUniverse(seed=seed, tol=tol)
    keep = keep or (lambda name: True)
    groups = [
        (("kraus_roundtrip",), lambda: [check_kraus_roundtrip(seed, 100, tol)]),
        (("transpose_rejected",), lambda: [check_transpose_rejected(tol)]),
        (("channel_membership",), lambda: [check_channel_membership(seed, 50, tol)]),
        (("CPMs_laws", "CPM_laws", "Q_laws", "Qprime_laws"), lambda: check_linear_laws(laws)),
        (("Fwm_laws",), lambda: [check_free_laws(laws)]),
        (("Qpp_laws",), lambda: [check_plus_laws(laws)]),
    ]
    out = []
    for names, run in groups:
        if any(keep(n) for n in names):
            out += [r for r in run() if keep(r.name)]
    return out


def qlc_suite(tol: Tolerance = DEFAULT_TOL) -> list[CheckRecord]:
    out = []
    coin = denote_program(parse_program(COIN))
    # one output state per part of bit
    states = qcat.apply(coin, [np.eye(1)])
    probs = [float(np.real(np.trace(s))) for s in states]
    ok = len(probs) == 2 and all(abs(p - 0.5) <= 1e-9 for p in probs)
    out.append(CheckRecord("coin", PASS if ok else FAIL, {"traces": probs}))

    tele = denote_program(parse_program(TELEPORT))
    ident = cpm.identity(2).choi
    dev = float(np.max(np.abs(tele[0, 0].choi - ident))) if tele.src.dims == (2,) == tele.dst.dims else float("inf")
    out.append(CheckRecord("teleport_identity", PASS if dev <= 1e-9 else FAIL, {
        "max_deviation": dev, "choi": matrix_to_json(tele[0, 0].choi),
    }))

    ok = qcat.is_Q(coin, tol) and qcat.is_Q(tele, tol)
    out.append(CheckRecord("denotations_in_Q", PASS if ok else FAIL, {}))
    return out
