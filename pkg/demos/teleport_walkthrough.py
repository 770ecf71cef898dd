"""Teleportation, step by step.

Run with ``python3 demos/teleport_walkthrough.py``.
"""

import numpy as np

from qsem import cpm, qcat
from qsem.qlc import TELEPORT, denote_program, parse_program, typecheck

prog = parse_program(TELEPORT)
print("inputs:", [(name, str(ty)) for name, ty in prog.inputs])
print("result type:", typecheck(prog.inputs, prog.body))

f = denote_program(prog)
print("denotation:", f.src.dims, "->", f.dst.dims)

# The whole protocol, measurements and classically controlled corrections
# included, collapses to the identity channel on one qubit.
dev = np.max(np.abs(f[0, 0].choi - cpm.identity(2).choi))
print(f"max |Choi - Choi(id)| = {dev:.2e}")
print("trace preserving:", qcat.is_Qprime(f))

# Send a few states through.
rng = np.random.default_rng(7)
for _ in range(3):
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    (out,) = qcat.apply(f, [rho])
    print("fidelity:", np.real(v.conj() @ out @ v).round(12))

# Kraus rank of the resulting channel: one operator, the identity up to phase.
ks = cpm.choi_to_kraus(f[0, 0])
print("Kraus operators:", len(ks.ops))
print(np.round(ks.ops[0], 6))
