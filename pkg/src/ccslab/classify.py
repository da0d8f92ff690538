"""Composite classification of (partition, event pair, state) triples.

``classify`` assembles the full report: screening, commutation class,
productness, triviality level, determinism, law of total probability and
correlation strength.  Triviality is certified analytically where a theorem
applies (product-atomic partitions are strongly trivial; atomic partitions
are weakly trivial exactly when every element satisfies the state-independent
screening identity; complement-of-the-pair forms are weakly trivial) and by
seeded sampling otherwise, with the certificate kind reported honestly and
counterexamples recorded verbatim.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    CommutationClass,
    CorrelationClass,
    DEFAULT_TOL,
    DensityState,
    EventPair,
    Partition,
    PreconditionError,
    ProjectionEvent,
    Tolerance,
    commutation_class,
    correlation_class,
    density_matrix,
    is_ccs,
    is_deterministic_ccs,
    operators_close,
    satisfies_ltp,
)
from .families import TrivialityLevel
from .sampling import (
    SamplerConfig,
    ginibre_state,
    haar_pure_state,
    random_commuting_pair,
    random_product_pair,
    rng_for,
)
from .twoqubit import principal_vector

__all__ = [
    "ProductStatus",
    "Determinism",
    "CertificateKind",
    "TrivialityCertificate",
    "CCSReport",
    "classify",
    "certify_triviality",
]


class ProductStatus(enum.Enum):
    ALL_PRODUCT = "all_product"
    SOME_NONPRODUCT = "some_nonproduct"
    NOT_APPLICABLE = "not_applicable"


class Determinism(enum.Enum):
    DETERMINISTIC = "yes"
    INDETERMINISTIC = "no"
    NOT_A_CCS = "not_a_ccs"


class CertificateKind(enum.Enum):
    ANALYTIC = "analytic"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class TrivialityCertificate:
    kind: CertificateKind
    detail: str
    seed: int | None = None
    n: int | None = None
    counterexample: dict | None = None


@dataclass(frozen=True)
class CCSReport:
    """Everything the classifier knows about one (partition, pair, state) triple."""

    is_ccs: bool
    rank_profile: tuple
    atomic: bool
    commutation: CommutationClass
    product: ProductStatus
    triviality: TrivialityLevel
    ltp: bool
    ltp_residuals: tuple
    deterministic: Determinism
    correlation_class: CorrelationClass
    zero_probability_elements: tuple
    certificate: TrivialityCertificate | None = None
    counterexamples: tuple = ()
    notes: tuple = ()


# ---------------------------------------------------------------------------
# Structure helpers
# ---------------------------------------------------------------------------

def _element_schmidt_product(vec: np.ndarray, dims: tuple, tol: Tolerance) -> bool:
    m = vec.reshape(dims)
    sv = np.linalg.svd(m, compute_uv=False)
    return bool(sv[1:].max(initial=0.0) <= tol.eps_eq)


def _all_elements_product(partition: Partition, dims: tuple, tol: Tolerance) -> bool:
    for c in partition:
        if not _element_schmidt_product(principal_vector(c, tol), dims, tol):
            return False
    return True


def _atomic_screening_identities(partition: Partition, pair: EventPair, tol: Tolerance):
    """Per-element state-independent screening defect of an atomic partition.

    For atomic C = |g><g| the conditional probabilities are <g|X|g>
    independently of the state, so screening given C holds for every state
    iff <g|AB|g><g|A'B'|g> - <g|AB'|g><g|A'B|g> vanishes.
    """
    ab, ab_, a_b, a_b_ = pair.products()
    defects = []
    for c in partition:
        g = principal_vector(c, tol)
        vals = [float(np.real(g.conj() @ (x @ g))) for x in (ab, ab_, a_b, a_b_)]
        defects.append(vals[0] * vals[3] - vals[1] * vals[2])
    return defects


def _is_complement_form(partition: Partition, pair: EventPair, tol: Tolerance) -> bool:
    """{X, I-X} for X in {A, B}, or the four products of the pair, in any order."""
    n = partition.dim
    if len(partition) == 2:
        for x in (pair.a.op, pair.b.op):
            comp = np.eye(n) - x
            for first, second in ((0, 1), (1, 0)):
                if operators_close(partition.elements[first].op, x, tol) and operators_close(
                    partition.elements[second].op, comp, tol
                ):
                    return True
        return False
    if len(partition) == 4:
        products = list(pair.products())
        used = set()
        for c in partition:
            hit = next(
                (
                    j
                    for j, p in enumerate(products)
                    if j not in used and operators_close(c.op, p, tol)
                ),
                None,
            )
            if hit is None:
                return False
            used.add(hit)
        return True
    return False


# ---------------------------------------------------------------------------
# Triviality certification
# ---------------------------------------------------------------------------

def _serialize_counterexample(kind: str, state, pair: EventPair | None) -> dict:
    out = {"kind": kind, "state": np.array(density_matrix(state))}
    if pair is not None:
        out["pair_a"] = np.array(pair.a.op)
        out["pair_b"] = np.array(pair.b.op)
    return out


def _bell_basis_pair(dim: int) -> EventPair | None:
    # maximally entangled orthogonal projectors; the standard probe that
    # product-form pairs cannot replace
    if dim != 4:
        return None
    phi_plus = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    phi_minus = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    return EventPair(
        ProjectionEvent.from_vector(phi_plus), ProjectionEvent.from_vector(phi_minus)
    )


def _strong_probe_pairs(dim: int, dims: tuple | None, cfg: SamplerConfig):
    """Deterministic probes first, then seeded product-form and general pairs."""
    bell = _bell_basis_pair(dim)
    if bell is not None:
        yield bell
    n_product = cfg.n_event_pairs // 2 if dims is not None else 0
    n_general = cfg.n_event_pairs - n_product
    for i in range(n_product):
        yield random_product_pair(dims, rng_for(cfg.seed, 11, i))
    for i in range(n_general):
        yield random_commuting_pair(dim, rng_for(cfg.seed, 12, i))


def _probe_states(dim: int, rho_ref: np.ndarray, cfg: SamplerConfig, count: int):
    yield DensityState(np.eye(dim, dtype=complex) / dim)
    for i in range(count):
        rng = rng_for(cfg.seed, 13, i)
        samp = ginibre_state(dim, rng).rho
        w = (0.5, 0.1, 0.01)[i % 3]
        mixed = (1.0 - w) * rho_ref + w * samp
        yield DensityState(mixed / np.trace(mixed).real)
        yield haar_pure_state(dim, rng).density()


def _weak_counterexample_states(dim: int, rho_ref: np.ndarray, cfg: SamplerConfig):
    """Mixtures of the reference state with samples first (nontrivial CCSs fail
    only off the reference support, so full-support witnesses live there),
    then pure resamples."""
    yield DensityState(np.eye(dim, dtype=complex) / dim)
    for i in range(cfg.n_states):
        rng = rng_for(cfg.seed, 14, i)
        samp = ginibre_state(dim, rng).rho
        w = (0.5, 0.1, 0.01)[i % 3]
        mixed = (1.0 - w) * rho_ref + w * samp
        yield DensityState(mixed / np.trace(mixed).real)
        yield haar_pure_state(dim, rng).density()


def certify_triviality(
    partition: Partition,
    pair: EventPair,
    state,
    cfg: SamplerConfig | None = None,
    tol: Tolerance = DEFAULT_TOL,
    bipartite: tuple | None = None,
) -> tuple:
    """(TrivialityLevel, TrivialityCertificate) for a screening partition.

    Strongly trivial: screens every commuting pair in every state.  Certified
    analytically for product-atomic partitions (given a bipartite split);
    falsified by deterministic probes plus seeded sampling over commuting
    pairs and states.  Weakly trivial: screens the fixed pair in every state.
    Certified analytically for atomic partitions via the per-element
    screening identity and for complement forms of the pair; decided by
    state sampling otherwise.  Never certifies beyond what was checked: every
    sampled verdict carries (seed, n).
    """
    cfg = cfg or SamplerConfig()
    rho_ref = density_matrix(state)
    if not is_ccs(state, partition, pair, tol).holds:
        raise PreconditionError("triviality is only defined for partitions that screen off")
    dim = partition.dim
    if bipartite is None and dim == 4:
        bipartite = (2, 2)
    atomic = partition.is_atomic()

    if atomic and bipartite is not None and _all_elements_product(partition, bipartite, tol):
        return (
            TrivialityLevel.STRONG,
            TrivialityCertificate(
                CertificateKind.ANALYTIC, "product-atomic partition in the declared bipartite split"
            ),
        )

    strong_counterexample = None
    n_checked = 0
    for probe_pair in _strong_probe_pairs(dim, bipartite, cfg):
        for probe_state in _probe_states(dim, rho_ref, cfg, count=2):
            n_checked += 1
            if not is_ccs(probe_state, partition, probe_pair, tol).holds:
                strong_counterexample = _serialize_counterexample(
                    "strong_triviality", probe_state, probe_pair
                )
                break
        if strong_counterexample is not None:
            break
    if strong_counterexample is None:
        return (
            TrivialityLevel.STRONG,
            TrivialityCertificate(
                CertificateKind.SAMPLED,
                "no commuting pair/state broke screening",
                seed=cfg.seed,
                n=n_checked,
            ),
        )

    if atomic:
        defects = _atomic_screening_identities(partition, pair, tol)
        bad = [k for k, d in enumerate(defects) if abs(d) > tol.eps_eq]
        if not bad:
            return (
                TrivialityLevel.WEAK,
                TrivialityCertificate(
                    CertificateKind.ANALYTIC,
                    "per-element screening identity holds (state-independent)",
                    counterexample=strong_counterexample,
                ),
            )
        # a full-support state gives the failing element nonzero probability
        for witness in _weak_counterexample_states(dim, rho_ref, cfg):
            if not is_ccs(witness, partition, pair, tol).holds:
                return (
                    TrivialityLevel.NONTRIVIAL,
                    TrivialityCertificate(
                        CertificateKind.ANALYTIC,
                        f"screening identity fails for elements {bad}",
                        counterexample=_serialize_counterexample("weak_triviality", witness, None),
                    ),
                )
        raise PreconditionError(
            "screening identity fails but no witness state found (inconsistent tolerances)"
        )

    if _is_complement_form(partition, pair, tol):
        return (
            TrivialityLevel.WEAK,
            TrivialityCertificate(
                CertificateKind.ANALYTIC,
                "complement form of the tested pair",
                counterexample=strong_counterexample,
            ),
        )

    n_states = 0
    for witness in _weak_counterexample_states(dim, rho_ref, cfg):
        n_states += 1
        if not is_ccs(witness, partition, pair, tol).holds:
            return (
                TrivialityLevel.NONTRIVIAL,
                TrivialityCertificate(
                    CertificateKind.SAMPLED,
                    "sampled state breaks screening",
                    seed=cfg.seed,
                    n=n_states,
                    counterexample=_serialize_counterexample("weak_triviality", witness, None),
                ),
            )
    return (
        TrivialityLevel.WEAK,
        TrivialityCertificate(
            CertificateKind.SAMPLED,
            "no sampled state broke screening",
            seed=cfg.seed,
            n=n_states,
            counterexample=strong_counterexample,
        ),
    )


# ---------------------------------------------------------------------------
# The composite report
# ---------------------------------------------------------------------------

def classify(
    partition: Partition,
    pair: EventPair,
    state,
    cfg: SamplerConfig | None = None,
    tol: Tolerance = DEFAULT_TOL,
    bipartite: tuple | None = None,
) -> CCSReport:
    """Full classification of the triple; see CCSReport for the fields."""
    cfg = cfg or SamplerConfig()
    dim = partition.dim
    if bipartite is None and dim == 4:
        bipartite = (2, 2)

    screening = is_ccs(state, partition, pair, tol)
    atomic = partition.is_atomic()

    if atomic and bipartite is not None:
        product = (
            ProductStatus.ALL_PRODUCT
            if _all_elements_product(partition, bipartite, tol)
            else ProductStatus.SOME_NONPRODUCT
        )
    else:
        product = ProductStatus.NOT_APPLICABLE

    notes = []
    counterexamples = []
    certificate = None
    if screening.holds:
        triviality, certificate = certify_triviality(partition, pair, state, cfg, tol, bipartite)
        if certificate.counterexample is not None:
            counterexamples.append(certificate.counterexample)
        deterministic = (
            Determinism.DETERMINISTIC
            if is_deterministic_ccs(state, partition, pair, tol)
            else Determinism.INDETERMINISTIC
        )
    else:
        triviality = TrivialityLevel.NOT_A_CCS
        deterministic = Determinism.NOT_A_CCS
        notes.append("partition does not screen off the correlation in this state")

    ltp = satisfies_ltp(state, partition, pair, tol)
    return CCSReport(
        is_ccs=screening.holds,
        rank_profile=partition.rank_profile(),
        atomic=atomic,
        commutation=commutation_class(partition, pair, state, tol),
        product=product,
        triviality=triviality,
        ltp=ltp.holds,
        ltp_residuals=ltp.residuals,
        deterministic=deterministic,
        correlation_class=correlation_class(state, pair, tol),
        zero_probability_elements=screening.zero_probability_elements,
        certificate=certificate,
        counterexamples=tuple(counterexamples),
        notes=tuple(notes),
    )
