"""Per-diagram predicate battery and batch driver.

Each predicate reports ``pass``, ``fail`` or ``hypotheses-not-met``.  Reports
are plain dicts with sorted keys so that JSON output is reproducible; the only
run-dependent field is ``timing_s``.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from khoval.altstruct import classify_case, split_case3
from khoval.complex import build_unnormalized, decompose, normalize
from khoval.cube import DEFAULT_MAX_CROSSINGS, o
from khoval.diagram import (
    LinkDiagram,
    emit_pd,
    is_alternating,
    is_connected,
    is_reduced,
    is_split,
    mirror,
    resolve_at,
)
from khoval.errors import KhovalError
from khoval.homology import BigradedGroup, connecting_map, homology
from khoval.invariants import jones_kauffman, kh_polynomial, signature_gl, verify_box, verify_thin, verify_torsion

PASS, FAIL, SKIP = "pass", "fail", "hypotheses-not-met"

PREDICATES = (
    "thin",
    "box",
    "torsion",
    "euler",
    "signature-identity",
    "region-identity",
    "case-classification",
    "clasp-shift",
    "ses-rank",
    "mirror-duality",
)


@dataclass
class VerificationReport:
    id: str
    crossings: int
    results: dict[str, dict] = field(default_factory=dict)
    digests: dict[str, str] = field(default_factory=dict)
    sigma: int | None = None
    timing_s: float = 0.0
    error: str | None = None

    def set(self, name: str, status: str, detail=None) -> None:
        entry: dict = {"status": status}
        if detail:
            entry["detail"] = detail
        self.results[name] = entry

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.results.items() if v["status"] == FAIL]

    @property
    def ok(self) -> bool:
        return self.error is None and not self.failed

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "crossings": self.crossings,
            "sigma": self.sigma,
            "predicates": self.results,
            "digests": self.digests,
            "timing_s": round(self.timing_s, 3),
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def render(self) -> str:
        head = f"{self.id} (c={self.crossings}, sigma={self.sigma})"
        if self.error:
            return f"{head}: ERROR {self.error}"
        width = max(len(p) for p in PREDICATES)
        lines = [head]
        for name in PREDICATES:
            r = self.results.get(name)
            if r is None:
                continue
            lines.append(f"  {name:<{width}}  {r['status']}")
            if r["status"] == FAIL and "detail" in r:
                lines.append(f"  {'':<{width}}  {json.dumps(r['detail'])}")
        return "\n".join(lines)


def digest(h: BigradedGroup) -> str:
    return hashlib.sha256(h.to_json().encode()).hexdigest()


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _ses_check(d: LinkDiagram, hbar: BigradedGroup, max_crossings: int) -> tuple[bool, list]:
    dec = decompose(d, d.n - 1, max_crossings=max_crossings)
    cm = connecting_map(dec)
    h0 = homology(dec.c0).rational()
    h1 = homology(dec.c1).rational()
    bad = []
    keys = set(hbar.support()) | set(cm.h0) | set(cm.h1)
    for bd in sorted(keys):
        want = cm.kernel_rank(bd) + cm.cokernel_rank(bd)
        if hbar.rank(*bd) != want:
            bad.append({"i": bd[0], "j": bd[1], "detail": f"rank {hbar.rank(*bd)} != ker + coker = {want}"})
    union = h0.support() | h1.support()
    for bd in sorted(hbar.support() - union):
        bad.append({"i": bd[0], "j": bd[1], "detail": "outside the union of the sequence supports"})
    return not bad, bad


def _clasp_shift(d: LinkDiagram, clasp: tuple[int, int], max_crossings: int) -> tuple[bool, list]:
    dprime, _ = split_case3(d, clasp)
    hp = homology(build_unnormalized(dprime, max_crossings=max_crossings), check=False).rational()
    bad = []
    for star in clasp:
        h0 = homology(build_unnormalized(resolve_at(d, star, 0), max_crossings=max_crossings), check=False).rational()
        h1 = homology(build_unnormalized(resolve_at(d, star, 1), max_crossings=max_crossings), check=False).rational()
        if h0.groups != hp.shifted(0, 1).groups:
            bad.append({"crossing": star, "detail": "H(D(*0)) != H(D')[0]{1}"})
        if h1.shifted(-1, -1).groups != hp.shifted(-2, -3).groups:
            bad.append({"crossing": star, "detail": "H(D(*1))[-1]{-1} != H(D')[-2]{-3}"})
    return not bad, bad


def verify_diagram(
    id_: str,
    d: LinkDiagram,
    clasp: tuple[int, int] | None = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport(id_, d.n)
    try:
        _run(rep, d, clasp, max_crossings)
    except KhovalError as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    rep.timing_s = time.perf_counter() - start
    return rep


def _run(rep: VerificationReport, d: LinkDiagram, clasp, max_crossings: int) -> None:
    hbar = homology(build_unnormalized(d, max_crossings=max_crossings))
    kh = hbar.shifted(d.x, 2 * d.x - d.y)
    sigma = signature_gl(d) if d.n == 0 or is_connected(d) else None
    rep.sigma = sigma
    rep.digests = {"hbar": digest(hbar), "kh": digest(kh)}
    alt = is_alternating(d)
    connected = is_connected(d)
    thin_hyp = alt and not is_split(d) and is_reduced(d)
    c, od = d.n, o(d)

    def record(name: str, hyp: bool, ok: bool, detail=None) -> None:
        # outside its hypotheses a predicate is still evaluated; what it saw is kept
        rep.set(name, _status(ok) if hyp else SKIP, None if ok else detail)

    if sigma is not None and kh.support():
        thin = verify_thin(kh.rational(), sigma)
        record("thin", thin_hyp, thin.passed, thin.violations)
        khp = kh_polynomial(kh, sigma)
        tors = verify_torsion(kh, sigma, khp.p, khp.m)
        record("torsion", alt and connected, tors.passed, tors.violations)
    else:
        rep.set("thin", SKIP)
        rep.set("torsion", SKIP)
    box = verify_box(hbar, c, od)
    record("box", thin_hyp, box.passed, box.violations)

    jones = jones_kauffman(d, max_crossings)
    euler = kh.euler()
    rep.set("euler", _status(euler == jones), None if euler == jones else {"kh": _poly(euler), "jones": _poly(jones)})

    m = mirror(d)
    if sigma is not None:
        sig_m = signature_gl(m)
        ok = sigma == od - d.y - 1 and sig_m == -sigma
        record("signature-identity", thin_hyp, ok, {"gl": sigma, "o-y-1": od - d.y - 1, "mirror": sig_m})
    else:
        rep.set("signature-identity", SKIP)

    total = od + o(m)
    record("region-identity", connected and alt, total == c + 2, {"o+o!": total, "c+2": c + 2})

    if thin_hyp and c > 0:
        res = classify_case(d)
        ok = res.tag in ("I", "II", "III")
        if res.tag == "III":
            dp = res.dprime
            ok = ok and dp.n == c - 2 and is_alternating(dp) and not is_split(dp) and is_reduced(dp)
        rep.set("case-classification", _status(ok), res.to_json())
        if res.tag == "III" and clasp is None:
            clasp = res.clasp
    else:
        rep.set("case-classification", SKIP)

    if clasp is not None:
        ok, bad = _clasp_shift(d, clasp, max_crossings)
        rep.set("clasp-shift", _status(ok), bad)
    else:
        rep.set("clasp-shift", SKIP)

    if c > 0:
        ok, bad = _ses_check(d, hbar.rational(), max_crossings)
        rep.set("ses-rank", _status(ok), bad)
    else:
        rep.set("ses-rank", SKIP)

    hm = homology(normalize(build_unnormalized(m, max_crossings=max_crossings), m), check=False)
    rep.set("mirror-duality", _status(hm.rational().groups == kh.mirrored().groups))


def _poly(p: dict[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in p.items()}


def _worker(args) -> dict:
    id_, pd, clasp, max_crossings = args
    from khoval.diagram import parse_pd

    return verify_diagram(id_, parse_pd(pd), clasp, max_crossings).to_json()


def verify_corpus(entries, max_crossings: int = DEFAULT_MAX_CROSSINGS, jobs: int = 1) -> list[dict]:
    """Reports in corpus order; diagrams above the limit are listed as skipped."""
    tasks, out = [], []
    for e in entries:
        if e.diagram.n > max_crossings:
            out.append(None)
        else:
            out.append(len(tasks))
            tasks.append((e.id, emit_pd(e.diagram), e.clasp, max_crossings))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_worker, tasks, chunksize=1))
    else:
        done = [_worker(t) for t in tasks]
    reports = []
    for e, slot in zip(entries, out):
        if slot is None:
            reports.append({"id": e.id, "crossings": e.diagram.n, "skipped": f"more than {max_crossings} crossings"})
        else:
            reports.append(done[slot])
    return reports
