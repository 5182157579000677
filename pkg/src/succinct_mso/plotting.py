"""Report figures for ``verify-all --figures DIR``."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import fixtures as F  # noqa: E402
from .circuits import CnfInstance, decode, min_order_reduction, pump_circuit, triple_table  # noqa: E402
from .circuits.xi import stabilization_threshold  # noqa: E402
from .pumping import extract_pump, make_idempotent  # noqa: E402
from .structures import R2Graph  # noqa: E402


def _adjacency(g: R2Graph, sym: str) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.uint8)
    for s, u, v in g.arcs:
        if s == sym:
            a[u, v] = 1
    return a


def _fixture_triples():
    out = []
    for fx in F.pump_fixtures():
        out.append((fx.name, make_idempotent(extract_pump(fx.decomposition, fx.phi, fx.m, L_test=-1))))
    return out


def gate_growth_figure(path: Path, triples=None):
    triples = triples or _fixture_triples()
    fig, ax = plt.subplots(figsize=(6, 4))
    ells = [2 ** j for j in range(8)]
    for name, t in triples:
        table = triple_table(t)
        sgs = [pump_circuit(t, ell, table) for ell in ells]
        ax.plot([sg.bits for sg in sgs], [sg.gates for sg in sgs], marker="o", label=name)
    ax.set_xlabel("vertex bit-width")
    ax.set_ylabel("gates")
    ax.set_title("pump circuit size, ell = 1 .. 128")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def adjacency_figure(path: Path, triples=None):
    triples = triples or _fixture_triples()
    panels = [(f"{name}, ell=4", _adjacency(decode(pump_circuit(t, 4)), "->"))
              for name, t in triples]
    mo = decode(min_order_reduction(CnfInstance(3, ((1, 2), (-1, 3)))))
    panels.append(("min-order <=, n=3", _adjacency(mo, "<=")))
    fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 4))
    for ax, (title, a) in zip(axes, panels):
        ax.imshow(a, cmap="Greys", interpolation="nearest")
        ax.set_title(title)
        ax.set_xlabel("v")
        ax.set_ylabel("u")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def stabilization_figure(path: Path, m: int = 2, horizon: int = 8):
    n_star, kt, it = stabilization_threshold(m, horizon)
    ids = {}
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = list(range(1, horizon + 1))
    for label, series in (("looped clique", kt), ("edgeless", it)):
        ax.plot(ns, [ids.setdefault(x, len(ids)) for x in series], marker="o", label=label)
    ax.axvline(n_star, color="grey", linestyle="--", label=f"N* = {n_star}")
    ax.set_xlabel("n")
    ax.set_ylabel(f"rank-{m} type (order of first appearance)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def render_all(directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    triples = _fixture_triples()
    paths = [out / "gate_growth.png", out / "adjacency.png", out / "type_stabilization.png"]
    gate_growth_figure(paths[0], triples)
    adjacency_figure(paths[1], triples)
    stabilization_figure(paths[2])
    return paths
