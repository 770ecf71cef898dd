from qsem.cpm import HObject
from qsem.freecat import FWM, FwmObject
from qsem.laws import LawUniverse, _exhaustive, check_free_laws, check_linear_laws, check_plus_laws
from qsem.report import FAIL, PASS

from oracles import fwm_hom_count

TINY = LawUniverse(dims=(1, 2), max_seq_len=1, max_family=2, full_family=1, quadruples=20,
                   max_triples=256, random_triples=10)


def test_free_laws_frozen_counts():
    # three labels, sequences of length <= 2: 1 + 3 + 9 objects
    r = check_free_laws(LawUniverse())
    assert r.status == PASS
    assert r.evidence["objects"] == 13
    labels = [[]] + [[d] for d in "123"] + [[a, b] for a in "123" for b in "123"]
    assert r.evidence["morphisms"] == sum(fwm_hom_count(x, y) for x in labels for y in labels)


def test_plus_laws_small():
    r = check_plus_laws(TINY)
    assert r.status == PASS
    assert r.evidence["sampled_quadruples"] == 20


def test_linear_laws_small():
    records = check_linear_laws(TINY)
    assert [r.name for r in records] == ["CPMs_laws", "CPM_laws", "Q_laws", "Qprime_laws"]
    assert all(r.status == PASS for r in records)
    assert all(r.evidence["max_deviation"] < 1e-9 for r in records)


class _NoIdentity:
    """Fwm whose identities fail to fix the projections out of a pair."""

    def hom(self, x, y):
        return FWM.hom(x, y)

    def identity(self, x):
        return FWM.identity(x)

    def compose(self, g, f):
        if g == FWM.identity(g.src) and len(f.src) == 2 and len(f.dst) == 1:
            return FWM.terminal(f.src)
        return FWM.compose(g, f)


def test_exhaustive_detects_identity_failure():
    a = HObject("A", 2)
    objs = [FwmObject(()), FwmObject((a,)), FwmObject((a, a))]
    r = _exhaustive(_NoIdentity(), objs, "broken")
    assert r.status == FAIL and "identity_law" in r.evidence
