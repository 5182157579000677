"""Deciding a formula on succinct graphs promised to be cliques or independent sets.

Above a threshold the rank-m types of looped cliques stop changing, and so
do those of edgeless graphs, so one probe of the arc 0 -> 0 settles the
answer.  Below it, the decoded graph is compared against a finite list of
models found by exhaustive checking.  The clique side carries loops on
every vertex (the convention of the ``xi`` corpus formula), which is what
makes the 0 -> 0 probe distinguish the two sides.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..msotypes import type_of
from ..mso.check import models
from ..mso.corpus import formula
from ..mso.syntax import rank
from ..structures import R2Graph, complete, edgeless
from .ir import eval_circuit
from .succinct import SuccinctGraph, decode

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
XI_FIXTURE_PATH = DATA_DIR / "xi_fixture.json"


@dataclass(frozen=True)
class XiFixture:
    psi: str                # corpus name of the decided formula
    rank: int
    threshold: int          # N_r: types are constant on both sides from here on
    clique_value: bool
    independent_value: bool
    small_models: tuple     # sorted arc lists of the xi-models of psi with n <= threshold
    small_sizes: tuple      # the n of each entry in small_models
    clique_loops: bool = True
    horizon: int = 8        # largest n at which stabilization was confirmed

    def to_json(self) -> str:
        d = asdict(self)
        d["small_models"] = [[list(a) for a in m] for m in self.small_models]
        d["small_sizes"] = list(self.small_sizes)
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "XiFixture":
        d = json.loads(text)
        d["small_models"] = tuple(tuple(tuple(a) for a in m) for m in d["small_models"])
        d["small_sizes"] = tuple(d["small_sizes"])
        return cls(**d)


def _arc_key(g: R2Graph) -> tuple:
    return tuple(sorted(g.arcs))


def stabilization_threshold(m: int, horizon: int = 8) -> tuple:
    """(N*, clique type ids, independent type ids) over n = 1..horizon."""
    kt = [type_of(complete(n), m).root for n in range(1, horizon + 1)]
    it = [type_of(edgeless(n), m).root for n in range(1, horizon + 1)]
    start = horizon
    while start > 1 and kt[start - 2] == kt[-1] and it[start - 2] == it[-1]:
        start -= 1
    return start, kt, it


def build_xi_fixture(psi_name: str = "psi1", horizon: int = 8) -> XiFixture:
    psi = formula(psi_name)
    m = max(rank(psi), rank(formula("xi")))
    threshold, _, _ = stabilization_threshold(m, horizon)
    small, sizes = [], []
    for n in range(1, threshold + 1):
        for g in (complete(n), edgeless(n)):
            if models(g, psi):
                small.append(_arc_key(g))
                sizes.append(n)
    return XiFixture(psi_name, m, threshold, models(complete(horizon), psi),
                     models(edgeless(horizon), psi), tuple(small), tuple(sizes),
                     True, horizon)


def load_xi_fixture(path=XI_FIXTURE_PATH) -> XiFixture:
    return XiFixture.from_json(Path(path).read_text())


def xi_decider(sg: SuccinctGraph, fixture: XiFixture) -> bool:
    """Answer psi on sg under the promise that sg decodes to a model of xi."""
    if sg.N <= fixture.threshold:
        g = decode(sg)
        return any(n == g.n and tuple(a) == _arc_key(g)
                   for n, a in zip(fixture.small_sizes, fixture.small_models))
    sym = fixture_symbol_index(sg)
    zero = [0] * sg.arc_circuit.width
    looped = eval_circuit(sg.arc_circuit, zero)[sym]
    return fixture.clique_value if looped else fixture.independent_value


def fixture_symbol_index(sg: SuccinctGraph) -> int:
    return sg.symbols.index("->") if "->" in sg.symbols else 0
