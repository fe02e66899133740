import json
from dataclasses import replace

import pytest

from polycert.certify import (
    AT_MOST,
    IRREDUCIBLE,
    PREFERENCE,
    analyze,
    certificate_from_dict,
    certificate_from_json,
    certificate_to_dict,
    certificate_to_json,
    report_to_json,
    verify_certificate,
)
from polycert.config import ScanConfig, update_params
from polycert.criteria import Certificate, PrimeWitness, check_theorem2
from polycert.errors import (
    DegreeTooLow,
    EmptyWitnessRange,
    Malformed,
    ZeroEndCoefficient,
    ZeroPolynomial,
)
from polycert.newton import TRIVIAL_BOUND
from polycert.poly import Polynomial

SCANS = {
    "leading_quartic": 20,
    "pk_quartic": 20,
    "cubic_square": 10,
    "F2": 10,
    "F3": 10,
    "reversal_sextic": 10,
    "dominant_sextic": 10,
    "cyclotomic": 10,
}


def _rejected(f, cert):
    try:
        return not verify_certificate(f, cert).passed
    except Malformed:
        return True


def test_analyze_irreducible_quadratic():
    report = analyze(Polynomial.of(1, 1, 1), ScanConfig(m_max=10))
    assert report.verdict == IRREDUCIBLE
    assert report.best.theorem == "T1"
    assert report.best.m == 3
    # stopped at the first witness
    assert report.m_range == (3, 3)
    assert report.tried_count == 1


def test_analyze_leading_quartic(polys):
    report = analyze(polys["leading_quartic"], ScanConfig(m_max=20))
    assert report.verdict == AT_MOST
    assert report.bound == 2
    assert report.verdict_text == "AtMost(2)"
    assert any(c.theorem == "T2" and c.m == 8 for c in report.all_certificates)
    assert report.best.bound == min(c.bound for c in report.all_certificates)


def test_analyze_cubic_square(polys):
    report = analyze(polys["cubic_square"], ScanConfig(m_max=10))
    assert report.verdict_text == "AtMost(2)"
    assert report.delta.bound == 3
    t4 = [c for c in report.all_certificates if c.theorem == "T4" and c.m == 7]
    assert t4 and t4[0].bound == 2


def test_analyze_finds_reversed_lemma3(polys):
    report = analyze(polys["reversal_sextic"], ScanConfig(m_max=10))
    l3 = [c for c in report.all_certificates if c.theorem == "L3"]
    assert any(c.reversed and c.bound == 2 for c in l3)
    assert report.bound <= 2


def test_analyze_degree_floor():
    # Eisenstein at 2: every factor has degree 3
    report = analyze(Polynomial.of(2, 2, 0, 1))
    assert report.verdict == IRREDUCIBLE
    assert report.best.theorem == "NP"
    assert report.m_range is None
    assert verify_certificate(Polynomial.of(2, 2, 0, 1), report.best)


def test_analyze_records_content():
    f = Polynomial.of(2, 2, 2)
    report = analyze(f, ScanConfig(m_max=10))
    assert report.content == 2
    assert report.primitive == Polynomial.of(1, 1, 1)
    assert report.best.content == 2
    assert verify_certificate(f, report.best)
    assert not verify_certificate(Polynomial.of(1, 1, 1), report.best)


def test_analyze_errors():
    with pytest.raises(ZeroPolynomial):
        analyze(Polynomial(()))
    with pytest.raises(DegreeTooLow):
        analyze(Polynomial.of(5))
    with pytest.raises(ZeroEndCoefficient):
        analyze(Polynomial.of(0, 1, 1))
    with pytest.raises(EmptyWitnessRange):
        analyze(Polynomial.of(1, 1, 1), ScanConfig(m_max=2))


def test_criteria_mask_limits_theorems(polys):
    report = analyze(polys["leading_quartic"], ScanConfig(m_max=12, criteria=frozenset({"t2"})))
    assert {c.theorem for c in report.all_certificates} == {"T2"}


def test_early_stop_matches_full_scan():
    f = Polynomial.of(1, 1, 1)
    short = analyze(f, ScanConfig(m_max=10))
    full = analyze(f, ScanConfig(m_max=60))
    assert short.verdict == full.verdict == IRREDUCIBLE
    assert short.best == full.best
    assert short.m_range == full.m_range == (3, 3)


def test_sharded_scan_matches_serial(polys):
    f = polys["leading_quartic"]
    serial = analyze(f, ScanConfig(m_max=20))
    update_params(n_jobs=2, chunk_size=4)
    sharded = analyze(f, ScanConfig(m_max=20))
    assert sharded.best == serial.best
    assert set(sharded.all_certificates) == set(serial.all_certificates)


def test_sharded_scan_stops_at_serial_witness():
    # chunk 20 would contribute a T1 certificate a serial scan never reaches
    f = Polynomial.of(13, 1, 1)
    scan = ScanConfig(m_max=40, criteria=frozenset({"t1", "t3"}))
    update_params(n_jobs=1, chunk_size=1)
    serial = analyze(f, scan)
    update_params(n_jobs=2, chunk_size=1)
    sharded = analyze(f, scan)
    assert serial.verdict == IRREDUCIBLE
    assert sharded.best == serial.best
    assert set(sharded.all_certificates) == set(serial.all_certificates)
    assert sharded.m_range == serial.m_range
    assert sharded.tried_count == serial.tried_count


def test_direct_lemma_needs_no_witness_range(polys):
    # scan would start at 12, so the range is empty
    report = analyze(polys["dominant_sextic"], ScanConfig(m_max=10))
    assert report.m_range is None
    assert report.bound == 2
    assert any(c.theorem == "L5" and c.bound == 2 for c in report.all_certificates)
    assert verify_certificate(polys["dominant_sextic"], report.best)


def test_preference_order():
    assert PREFERENCE == ("T1", "T2", "T3", "T4", "L4", "L5", "L3", "NP")


@pytest.mark.parametrize("name", sorted(SCANS))
def test_every_emitted_certificate_verifies(polys, name):
    f = polys[name]
    report = analyze(f, ScanConfig(m_max=SCANS[name]))
    assert report.all_certificates
    for cert in report.all_certificates:
        result = verify_certificate(f, cert)
        assert result.passed, (cert, result.failure)


@pytest.mark.parametrize("name", sorted(SCANS))
def test_single_field_mutations_are_rejected(polys, mutations, name):
    f = polys[name]
    report = analyze(f, ScanConfig(m_max=SCANS[name]))
    for cert in report.all_certificates:
        for label, bad in mutations(cert):
            assert _rejected(f, bad), (cert.theorem, label)


def test_t2_index_mutations(polys):
    f = polys["leading_quartic"]
    cert = check_theorem2(f, 8).certificate
    first = cert.primes[0]
    up = replace(cert, primes=(PrimeWitness(first.p, first.k, 3),) + cert.primes[1:])
    down = replace(cert, primes=(PrimeWitness(first.p, first.k, 1),) + cert.primes[1:])
    assert verify_certificate(f, up).failure == "slope_condition"
    assert verify_certificate(f, down).failure == "valuation_nonzero"
    assert verify_certificate(f, replace(cert, bound=1)).failure == "bound"
    assert verify_certificate(f, replace(cert, q=6473)).failure == "q_smallest"


def test_verify_rejects_other_polynomial(polys):
    cert = check_theorem2(polys["leading_quartic"], 8).certificate
    assert verify_certificate(polys["F2"], cert).failure == "polynomial"


def test_verify_malformed():
    cert = Certificate(theorem="T9", poly=Polynomial.of(1, 1, 1), bound=1)
    with pytest.raises(Malformed):
        verify_certificate(Polynomial.of(1, 1, 1), cert)
    with pytest.raises(Malformed):
        verify_certificate(Polynomial.of(1, 1, 1),
                           Certificate(theorem="T1", poly=Polynomial.of(1, 1, 1), bound=1))


@pytest.mark.parametrize("name", sorted(SCANS))
def test_json_round_trip(polys, name):
    report = analyze(polys[name], ScanConfig(m_max=SCANS[name]))
    for cert in report.all_certificates:
        text = certificate_to_json(cert)
        assert certificate_from_json(text) == cert
        obj = json.loads(text)
        assert obj["schema"] == "polycert-1"
        assert all(isinstance(a, str) for a in obj["poly"])


def test_json_big_integers():
    big = 10**999 + 7
    cert = Certificate(
        theorem="T1", poly=Polynomial.of(big, -big, 1), bound=1, m=big,
        sign=-1, primes=(PrimeWitness(big, 1, 1),), prime_certainty="probable",
    )
    assert certificate_from_json(certificate_to_json(cert)) == cert
    assert certificate_to_dict(cert)["m"] == str(big)


def test_json_rejects_bad_documents():
    cert = Certificate(theorem="NP", poly=Polynomial.of(1, 1), bound=1, delta=TRIVIAL_BOUND)
    obj = certificate_to_dict(cert)
    assert certificate_from_dict(obj) == cert
    with pytest.raises(Malformed):
        certificate_from_dict({**obj, "theorem": "T7"})
    with pytest.raises(Malformed):
        certificate_from_dict({**obj, "poly": [1, 1]})
    with pytest.raises(Malformed):
        certificate_from_dict({**obj, "extra": True})
    with pytest.raises(Malformed):
        certificate_from_json("{not json")


def test_report_outputs(polys):
    report = analyze(polys["leading_quartic"], ScanConfig(m_max=12))
    obj = json.loads(report_to_json(report))
    assert obj["verdict"] == AT_MOST
    assert obj["bound"] == 2
    assert obj["tried_m"]["start"] == "3"
    assert certificate_from_dict(obj["best"]) == report.best
    frame = report.to_frame()
    assert list(frame.columns) == ["theorem", "m", "reversed", "bound", "primes", "d", "q", "delta"]
    assert len(frame) == len(report.all_certificates)
    assert frame["bound"].iloc[0] == report.best.bound
