"""The shipped fixture formulas (``formulas/*.psi`` and ``*.chi``)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..structures import Signature
from .parse import parse
from .syntax import Formula, rank


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str  # "psi" or "chi"
    formula: Formula
    recorded_rank: int
    signature: Signature
    description: str
    text: str


def parse_formula_file(text: str, name: str = "?", kind: str = "psi") -> CorpusEntry:
    meta, notes, body = {}, [], []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            content = stripped[1:].strip()
            key, sep, value = content.partition(":")
            if sep and key in ("name", "rank", "sig", "unary", "colors"):
                meta[key] = value.strip()
            else:
                notes.append(content)
        else:
            body.append(line)
    sig = Signature(
        tuple(s for s in meta.get("sig", "->").split(",") if s),
        tuple(s for s in meta.get("unary", "").split(",") if s),
        int(meta.get("colors", "1")),
    )
    formula = parse("\n".join(body), sig)
    recorded = int(meta["rank"]) if "rank" in meta else rank(formula)
    return CorpusEntry(meta.get("name", name), kind, formula, recorded, sig,
                       " ".join(n for n in notes if n).strip(), text)


@lru_cache(maxsize=None)
def load_corpus() -> dict[str, CorpusEntry]:
    out = {}
    root = resources.files(__package__).joinpath("formulas")
    for item in sorted(root.iterdir(), key=lambda p: p.name):
        stem, _, ext = item.name.rpartition(".")
        if ext not in ("psi", "chi"):
            continue
        out[stem] = parse_formula_file(item.read_text(encoding="utf-8"), stem, ext)
    return out


def formula(name: str) -> Formula:
    return load_corpus()[name].formula


def load_formula_path(path) -> Formula:
    """Read a formula from a file: corpus-style header comments optional."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_formula_file(text).formula if text.lstrip().startswith("#") else parse(text)
