"""Built-in diagram corpus.

Static PD codes live in ``data/corpus.json``; kinked and clasp-sum diagrams
are constructed here from their base entries so the construction code is
exercised every time the corpus loads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from khoval.diagram import LinkDiagram, add_kink, clasp_sum, parse_pd


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    diagram: LinkDiagram
    kind: str  # unknot, knot, link, control, construction
    notes: str = ""
    clasp: tuple[int, int] | None = None  # clasp crossings of a clasp sum
    base: str | None = None  # entry the construction started from
    same_link_as: str | None = None


def _static() -> list[CorpusEntry]:
    text = resources.files("khoval").joinpath("data/corpus.json").read_text()
    return [CorpusEntry(e["id"], parse_pd(e["pd"]), e["kind"], e.get("notes", "")) for e in json.loads(text)]


def _clasped(id_: str, d: LinkDiagram, base: str | None, notes: str) -> CorpusEntry:
    out = clasp_sum(d)
    return CorpusEntry(id_, out, "construction", notes, (out.n - 2, out.n - 1), base)


@lru_cache(maxsize=1)
def builtin() -> tuple[CorpusEntry, ...]:
    entries = _static()
    by_id = {e.id: e.diagram for e in entries}
    unknot = by_id["unknot"]
    hopf = clasp_sum(unknot)
    fig8_clasp = clasp_sum(by_id["4_1"])
    entries += [
        CorpusEntry("unknot+kink", add_kink(unknot, positive=True), "construction", "positive curl", same_link_as="unknot"),
        CorpusEntry("unknot-kink", add_kink(unknot, positive=False), "construction", "negative curl", same_link_as="unknot"),
        CorpusEntry("3_1+kink", add_kink(by_id["3_1"]), "construction", "curl on the trefoil", same_link_as="3_1"),
        _clasped("hopf#clasp", hopf, None, "chain of three rings"),
        _clasped("hopf#clasp#clasp", clasp_sum(hopf), "hopf#clasp", "chain of four rings"),
        _clasped("3_1#clasp", by_id["3_1"], "3_1", "trefoil summed with the clasp"),
        _clasped("4_1#clasp", by_id["4_1"], "4_1", "figure-8 summed with the clasp"),
        CorpusEntry(
            "4_1#clasp#clasp",
            clasp_sum(fig8_clasp),
            "construction",
            "figure-8 summed with two clasps",
            (fig8_clasp.n, fig8_clasp.n + 1),
            "4_1#clasp",
        ),
    ]
    return tuple(entries)


def get(id_: str) -> CorpusEntry:
    for e in builtin():
        if e.id == id_:
            return e
    raise KeyError(id_)
