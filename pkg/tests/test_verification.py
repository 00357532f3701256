import math

import numpy as np
import pytest

from sigcloud.aggregation import AggregatedTemplate, Envelope, TemplateVariant, aggregate
from sigcloud.annealing import AnnealingConfig
from sigcloud.errors import ValidationError
from sigcloud.model import ProfileCurve, RasterSignature
from sigcloud.synthetic import GENUINE_STYLE, synth_signature
from sigcloud.verification import (
    Decision,
    DecisionThresholds,
    decide,
    score,
    verify,
)


# --- independent oracle --------------------------------------------------------

def rms_oracle(candidate_y, variant_y) -> float:
    total = sum((a - b) ** 2 for a, b in zip(candidate_y, variant_y))
    return math.sqrt(total / len(candidate_y))


def make_template(variant_ys, grid=None) -> AggregatedTemplate:
    grid = grid if grid is not None else [0.0, 0.5, 1.0]
    m = len(grid)
    variants = tuple(
        TemplateVariant(i, 0.0, ProfileCurve(np.asarray(grid), np.asarray(y)))
        for i, y in enumerate(variant_ys)
    )
    return AggregatedTemplate(
        client_id="c",
        version=1,
        m=m,
        created_from=1,
        variants=variants,
        envelope=Envelope(tuple(grid), tuple([0.0] * m), tuple([1.0] * m)),
    )


def enrollment_batch(k=3, seed=640):
    return [synth_signature(GENUINE_STYLE, seed + i, width=160, height=64) for i in range(k)]


def double_pixels(sig: RasterSignature) -> RasterSignature:
    black = {
        (2 * c + dc, 2 * r + dr)
        for c, r in sig.black
        for dc in (0, 1)
        for dr in (0, 1)
    }
    return RasterSignature(sig.width * 2, sig.height * 2, frozenset(black))


def mirror_vertical(sig: RasterSignature) -> RasterSignature:
    black = {(c, sig.height - 1 - r) for c, r in sig.black}
    return RasterSignature(sig.width, sig.height, frozenset(black))


# --- score ------------------------------------------------------------------------

def test_score_zero_on_identical_candidate():
    template = make_template([[0.2, 0.6, 0.4]])
    candidate = ProfileCurve(np.array([0.0, 0.5, 1.0]), np.array([0.2, 0.6, 0.4]))
    value, index = score(candidate, template)
    assert value == 0.0
    assert index == 0


def test_score_constant_shift_is_the_shift():
    template = make_template([[0.25, 0.25, 0.25]])
    candidate = ProfileCurve(np.array([0.0, 0.5, 1.0]), np.array([0.5, 0.5, 0.5]))
    value, _ = score(candidate, template)
    assert value == 0.25


def test_score_min_over_variants_matches_oracle():
    rng = np.random.default_rng(17)
    grid = list(np.linspace(0, 1, 8))
    for _ in range(20):
        template = make_template([list(rng.uniform(0, 1, 8)) for _ in range(3)], grid=grid)
        y = rng.uniform(0, 1, 8)
        y[0], y[-1] = 0.0, 1.0  # keep candidate normalized-looking
        candidate = ProfileCurve(np.asarray(grid), y)
        value, index = score(candidate, template)
        oracle_scores = [rms_oracle(list(y), [v for v in var.curve.y]) for var in template.variants]
        assert value == pytest.approx(min(oracle_scores), rel=1e-12)
        assert index == oracle_scores.index(min(oracle_scores))
        for s in oracle_scores:
            assert value <= s + 1e-15


def test_score_rejects_degenerate_candidate():
    template = make_template([[0.2, 0.6, 0.4]])
    with pytest.raises(ValidationError):
        score(ProfileCurve(np.array([0.0]), np.array([0.5])), template)
    with pytest.raises(ValidationError):
        score(ProfileCurve(np.array([0.0, 0.7]), np.array([0.5, 0.5])), template)


# --- decide -------------------------------------------------------------------------

def test_decide_trivial_table():
    thresholds = DecisionThresholds(0.05, 0.15)
    assert decide(0.0, thresholds) is Decision.ACCEPTED
    assert decide(0.10, thresholds) is Decision.ESCALATED
    assert decide(0.15, thresholds) is Decision.REJECTED  # boundary: inclusive reject


def test_decide_accept_boundary_exclusive():
    thresholds = DecisionThresholds(0.05, 0.15)
    assert decide(0.05, thresholds) is Decision.ESCALATED


def test_decide_monotone_step_function():
    thresholds = DecisionThresholds(0.06, 0.14)
    rank = {Decision.ACCEPTED: 0, Decision.ESCALATED: 1, Decision.REJECTED: 2}
    decisions = [rank[decide(s, thresholds)] for s in np.linspace(0, 0.3, 301)]
    assert decisions == sorted(decisions)


def test_equal_thresholds_disable_escalation():
    thresholds = DecisionThresholds(0.1, 0.1)
    for s in np.linspace(0, 0.3, 100):
        assert decide(float(s), thresholds) is not Decision.ESCALATED


def test_threshold_validation():
    with pytest.raises(ValidationError):
        DecisionThresholds(0.2, 0.1)
    with pytest.raises(ValidationError):
        DecisionThresholds(-0.1, 0.1)


# --- verify -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def enrolled_template():
    return aggregate(enrollment_batch(), m=32, config=AnnealingConfig(seed=40), client_id="alice")


def test_verify_replayed_enrollment_signature(enrolled_template):
    thresholds = DecisionThresholds()
    sig = enrollment_batch()[0]
    outcome = verify(sig, enrolled_template, thresholds)
    assert outcome.decision in (Decision.ACCEPTED, Decision.ESCALATED)
    mirrored = verify(mirror_vertical(sig), enrolled_template, thresholds)
    assert outcome.score < mirrored.score


def test_verify_blank_signature_rejected(enrolled_template):
    with pytest.raises(ValidationError):
        verify(RasterSignature(20, 20, frozenset()), enrolled_template, DecisionThresholds())


def test_verify_deterministic(enrolled_template):
    sig = enrollment_batch()[1]
    a = verify(sig, enrolled_template, DecisionThresholds(), request_id="r1")
    b = verify(sig, enrolled_template, DecisionThresholds(), request_id="r1")
    assert a == b


def test_verify_fresh_request_ids(enrolled_template):
    sig = enrollment_batch()[1]
    a = verify(sig, enrolled_template, DecisionThresholds())
    b = verify(sig, enrolled_template, DecisionThresholds())
    assert a.request_id != b.request_id


def test_verify_scale_invariance(enrolled_template):
    sig = enrollment_batch()[2]
    base = verify(sig, enrolled_template, DecisionThresholds())
    doubled = verify(double_pixels(sig), enrolled_template, DecisionThresholds())
    assert doubled.decision == base.decision


def test_outcome_wire_keys(enrolled_template):
    outcome = verify(enrollment_batch()[0], enrolled_template, DecisionThresholds())
    payload = outcome.to_dict()
    assert set(payload) == {"request_id", "client_id", "score", "decision", "template_version", "variant"}
    assert payload["client_id"] == "alice"
    assert payload["decision"] in {"accepted", "rejected", "escalated"}
