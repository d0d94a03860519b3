from __future__ import annotations

import json

from khoval.corpus import builtin, get
from khoval.diagram import parse_pd
from khoval.verify import FAIL, PASS, PREDICATES, SKIP, verify_corpus, verify_diagram


def statuses(rep):
    return {k: v["status"] for k, v in rep.results.items()}


def test_trefoil_passes_everything_applicable():
    rep = verify_diagram("3_1", get("3_1").diagram)
    st = statuses(rep)
    assert set(st) == set(PREDICATES)
    assert st["clasp-shift"] == SKIP
    assert all(v == PASS for k, v in st.items() if k != "clasp-shift")
    assert rep.sigma == -2 and rep.ok


def test_control_marks_hypotheses_and_keeps_what_it_saw():
    rep = verify_diagram("8_19", get("8_19").diagram)
    st = statuses(rep)
    assert st["thin"] == SKIP and st["region-identity"] == SKIP
    assert st["euler"] == PASS and st["ses-rank"] == PASS and st["mirror-duality"] == PASS
    assert rep.results["thin"]["detail"][0]["i"] == 4
    assert rep.ok


def test_clasp_sums_check_shift_identities():
    for id_ in ("3_1#clasp", "4_1#clasp", "hopf#clasp"):
        e = get(id_)
        rep = verify_diagram(id_, e.diagram, e.clasp)
        assert rep.results["clasp-shift"]["status"] == PASS, id_


def test_unlink_is_not_connected():
    rep = verify_diagram("unlink2", parse_pd("O,O"))
    assert rep.results["region-identity"]["status"] == SKIP
    assert rep.results["euler"]["status"] == PASS


def test_limit_becomes_an_error_entry():
    rep = verify_diagram("3_1", get("3_1").diagram, max_crossings=2)
    assert rep.error and "TooManyCrossings" in rep.error
    assert not rep.ok


def test_batch_order_and_parallel_agree():
    entries = [e for e in builtin() if e.diagram.n <= 4]
    serial = verify_corpus(entries, jobs=1)
    parallel = verify_corpus(entries, jobs=3)
    strip = lambda rs: [{k: v for k, v in r.items() if k != "timing_s"} for r in rs]
    assert [r["id"] for r in serial] == [e.id for e in entries]
    assert json.dumps(strip(serial), sort_keys=True) == json.dumps(strip(parallel), sort_keys=True)


def test_batch_skips_large_diagrams():
    reps = verify_corpus([get("3_1"), get("8_19")], max_crossings=5)
    assert "skipped" in reps[1] and "predicates" in reps[0]


def test_render_lists_failures():
    rep = verify_diagram("3_1", get("3_1").diagram)
    rep.set("euler", FAIL, {"x": 1})
    text = rep.render()
    assert "euler" in text and '{"x": 1}' in text
