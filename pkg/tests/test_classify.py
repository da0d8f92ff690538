"""Composite classification and triviality certification."""

import math

import pytest

from ccslab.classify import (
    CertificateKind,
    Determinism,
    ProductStatus,
    certify_triviality,
    classify,
)
from ccslab.core import (
    CommutationClass,
    CorrelationClass,
    DensityState,
    PreconditionError,
    check_lemma_wcomm,
    is_ccs,
)
from ccslab.families import Family, FamilyParams, TrivialityLevel, associated_state, generate
from ccslab.goldentable import CellStatus, reference_state, run_golden_table
from ccslab.sampling import SamplerConfig
from ccslab.twoqubit import canonical_events

CFG = SamplerConfig(seed=42, n_states=250, n_event_pairs=60)
RT2 = math.sqrt(2.0)


@pytest.fixture
def pair():
    return canonical_events()


def _classified(family, params=FamilyParams()):
    inst = generate(family, params)
    state = reference_state(family, params)
    return classify(inst.partition, canonical_events(), state, CFG)


def test_rotated_basis_report():
    report = _classified(Family.CCSGabor)
    assert report.is_ccs and report.atomic
    assert report.commutation is CommutationClass.NONCOMMUTING
    assert report.product is ProductStatus.ALL_PRODUCT
    assert report.triviality is TrivialityLevel.STRONG
    assert report.certificate.kind is CertificateKind.ANALYTIC
    assert report.ltp is True
    assert report.deterministic is Determinism.INDETERMINISTIC


def test_nonscreening_partition_report():
    report = _classified(Family.CLTP)
    assert not report.is_ccs
    assert report.triviality is TrivialityLevel.NOT_A_CCS
    assert report.deterministic is Determinism.NOT_A_CCS
    assert report.ltp is True
    assert report.notes


def test_rank_two_contrast_report(pair):
    params = FamilyParams(c=1.0 / RT2, s=1.0 / RT2, r1=1.0, r2=0.0, r3=0.0)
    inst = generate(Family.CCS22ntratC, params)
    state = associated_state(Family.CCS22ntratC, params)
    report = classify(inst.partition, pair, state, CFG)
    assert report.triviality is TrivialityLevel.NONTRIVIAL
    assert report.commutation is CommutationClass.NONCOMMUTING
    assert report.ltp is True
    assert report.deterministic is Determinism.DETERMINISTIC
    assert report.correlation_class is CorrelationClass.MAXIMALLY_CORRELATED
    assert not report.atomic and report.rank_profile == (2, 2)


def test_zero_probability_elements_reported(pair):
    inst = generate(Family.CCSntrat, FamilyParams(theta=1.0))
    state = reference_state(Family.CCSntrat, FamilyParams(theta=1.0))
    report = classify(inst.partition, pair, state, CFG)
    assert report.zero_probability_elements == (1, 2)
    assert report.commutation is CommutationClass.WEAKLY_COMMUTING


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def test_product_atomic_certified_strong_analytically(pair, max_mixed):
    inst = generate(Family.CCSclassU, FamilyParams(theta=math.pi / 3))
    level, cert = certify_triviality(inst.partition, pair, max_mixed, CFG)
    assert level is TrivialityLevel.STRONG
    assert cert.kind is CertificateKind.ANALYTIC


def test_exponential_family_certified_weak_analytically(pair, max_mixed):
    inst = generate(Family.CCShyper, FamilyParams(xi=0.9, zeta=-1.4))
    level, cert = certify_triviality(inst.partition, pair, max_mixed, CFG)
    assert level is TrivialityLevel.WEAK
    assert cert.kind is CertificateKind.ANALYTIC
    assert cert.counterexample is not None  # the strong-level falsifier


def test_complement_form_certified_weak(pair, bell_density):
    inst = generate(Family.TrivAB2)
    level, cert = certify_triviality(inst.partition, pair, bell_density, CFG)
    assert level is TrivialityLevel.WEAK
    assert cert.kind is CertificateKind.ANALYTIC
    assert "complement" in cert.detail


def test_nontrivial_atomic_with_replayable_counterexample(pair, bell_density):
    inst = generate(Family.CCSntrat, FamilyParams(theta=math.pi / 3))
    level, cert = certify_triviality(inst.partition, pair, bell_density, CFG)
    assert level is TrivialityLevel.NONTRIVIAL
    witness = DensityState(cert.counterexample["state"])
    assert not is_ccs(witness, inst.partition, pair).holds


def test_nontrivial_rank_two_sampled(pair, bell_density):
    inst = generate(Family.CCS22ntrat, FamilyParams(theta=math.pi / 3))
    level, cert = certify_triviality(inst.partition, pair, bell_density, CFG)
    assert level is TrivialityLevel.NONTRIVIAL
    assert cert.kind is CertificateKind.SAMPLED
    assert cert.seed == CFG.seed and cert.n is not None
    witness = DensityState(cert.counterexample["state"])
    assert not is_ccs(witness, inst.partition, pair).holds


def test_one_sided_rank_two_partition_weak_by_sampling(pair, bell_density):
    # at multiples of pi the rank-two rotated family screens for every state
    inst = generate(Family.CCS22ntratU, FamilyParams(theta=0.0))
    level, cert = certify_triviality(inst.partition, pair, bell_density, CFG)
    assert level is TrivialityLevel.WEAK
    assert cert.kind is CertificateKind.SAMPLED


def test_certification_needs_a_screening_partition(pair, full_support_state):
    inst = generate(Family.CLTP)
    with pytest.raises(PreconditionError):
        certify_triviality(inst.partition, pair, full_support_state, CFG)


# ---------------------------------------------------------------------------
# report consistency
# ---------------------------------------------------------------------------

def test_commuting_report_passes_weak_commutation_lemma(pair):
    for family, params in [
        (Family.CCSclass, FamilyParams()),
        (Family.CCSntrat, FamilyParams(theta=1.2)),
    ]:
        inst = generate(family, params)
        state = reference_state(family, params)
        report = classify(inst.partition, pair, state, CFG)
        if report.commutation in (
            CommutationClass.COMMUTING,
            CommutationClass.WEAKLY_COMMUTING,
        ):
            assert check_lemma_wcomm(state, inst.partition, pair)


def test_deterministic_report_implies_binary_conditionals(pair):
    from ccslab.twoqubit import conditional_probs_canonical

    params = FamilyParams(theta=2.1)
    inst = generate(Family.CCS22ntrat, params)
    state = reference_state(Family.CCS22ntrat, params)
    report = classify(inst.partition, pair, state, CFG)
    assert report.deterministic is Determinism.DETERMINISTIC
    table = conditional_probs_canonical(state, inst.partition)
    for entry in table.entries:
        if entry is None:
            continue
        for p in entry:
            assert min(abs(p), abs(1.0 - p)) <= 1e-9


# ---------------------------------------------------------------------------
# golden-table harness self-test
# ---------------------------------------------------------------------------

def test_golden_subset_passes():
    outcomes = run_golden_table(
        CFG,
        thetas=(0.0, math.pi / 3),
        families=[Family.CCSGabor, Family.CCSntrat, Family.CLTP],
    )
    assert all(o.status is not CellStatus.FAIL for o in outcomes)
    skipped = [o for o in outcomes if o.status is CellStatus.SKIPPED]
    assert skipped  # not-applicable cells are surfaced, not hidden


def test_golden_detects_corrupted_expectations():
    from ccslab.families import expected_table_row
    import dataclasses

    def corrupted(family, params):
        row = expected_table_row(family, params)
        if family is Family.CCSGabor:
            return dataclasses.replace(row, deterministic=True)
        return row

    outcomes = run_golden_table(
        CFG, families=[Family.CCSGabor], expected_override=corrupted
    )
    fails = [o for o in outcomes if o.status is CellStatus.FAIL]
    assert len(fails) == 1
    assert fails[0].column == "deterministic"
    assert fails[0].family is Family.CCSGabor


def test_unresolved_ltp_cells_report_residuals():
    outcomes = run_golden_table(CFG, thetas=(math.pi / 3,), families=[Family.CCSBell])
    ltp_cells = [o for o in outcomes if o.column == "ltp"]
    assert all(o.status is CellStatus.SKIPPED for o in ltp_cells)
    assert all("residuals" in o.detail for o in ltp_cells)
