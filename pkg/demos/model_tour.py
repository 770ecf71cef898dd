"""A small tour of the model verifier.

Builds a reduced universe, runs every hypothesis check, then shows how each
negative control breaks exactly the hypotheses it was built to break.
"""

from qsem.modelcheck import NEGATIVE_CONTROLS, Universe, check_hypotheses, run_negative_control

u = Universe(finset_max=2, max_seq_len=1, max_family=2, samples=5, law_family=1)

report = check_hypotheses(u)
for r in report.records:
    print(f"{r.status:>6}  {r.name}")

for name, targets in NEGATIVE_CONTROLS.items():
    failing = run_negative_control(name, u).failing()
    print(f"\n{name}: fails {sorted(failing)}")
    print("  as targeted:", failing == targets)
