"""Score candidate signatures against a template and issue three-way decisions.

The score is the root-mean-square vertical deviation between the candidate
profile and a template main line, evaluated at the basis points; the best
(lowest) variant wins. Scores below the accept threshold pass, scores at or
above the reject threshold fail, and the band in between escalates to a
human supervisor.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .aggregation import AggregatedTemplate
from .errors import ValidationError
from .model import ProfileCurve, RasterSignature, interpolate, normalize, simplify


class Decision(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    ESCALATED = "escalated"


@dataclass(frozen=True)
class DecisionThresholds:
    """Accept strictly below ``accept_below``, reject at or above
    ``reject_at_or_above``; the band between escalates. Equal thresholds
    disable escalation."""

    accept_below: float = 0.06
    reject_at_or_above: float = 0.14

    def __post_init__(self):
        if self.accept_below < 0 or self.reject_at_or_above < 0:
            raise ValidationError("thresholds must be non-negative")
        if self.accept_below > self.reject_at_or_above:
            raise ValidationError(
                f"accept_below ({self.accept_below}) must not exceed "
                f"reject_at_or_above ({self.reject_at_or_above})"
            )


@dataclass(frozen=True)
class VerificationOutcome:
    client_id: str
    score: float
    best_variant_index: int
    decision: Decision
    candidate_curve: ProfileCurve
    template_version: int
    request_id: str

    def to_dict(self) -> dict:
        return {
            "request_id": self.request_id,
            "client_id": self.client_id,
            "score": self.score,
            "decision": self.decision.value,
            "template_version": self.template_version,
            "variant": self.best_variant_index,
        }


def score(candidate: ProfileCurve, template: AggregatedTemplate) -> tuple[float, int]:
    """RMS deviation at the basis points, minimized over template variants."""
    if len(candidate) < 2:
        raise ValidationError(f"candidate needs >= 2 points, got {len(candidate)}")
    if candidate.x[0] != 0.0 or candidate.x[-1] != 1.0 or candidate.y.min() < 0.0 or candidate.y.max() > 1.0:
        raise ValidationError("candidate curve is not normalized to [0, 1]")
    grid_x = np.asarray(template.envelope.grid_x)
    resampled = np.interp(grid_x, candidate.x, candidate.y)
    scores = [
        float(np.sqrt(np.mean((resampled - variant.curve.y) ** 2)))
        for variant in template.variants
    ]
    best = int(np.argmin(scores))
    return scores[best], best


def decide(value: float, thresholds: DecisionThresholds) -> Decision:
    """Map a score onto the accept / escalate / reject partition."""
    if value < thresholds.accept_below:
        return Decision.ACCEPTED
    if value >= thresholds.reject_at_or_above:
        return Decision.REJECTED
    return Decision.ESCALATED


def candidate_profile(sig: RasterSignature, m: int) -> ProfileCurve:
    """Simplify, resample to m points, and normalize an incoming signature."""
    profile = simplify(sig)
    if len(profile) < 2:
        raise ValidationError("signature is blank or has fewer than 2 inked columns")
    return normalize(interpolate(profile, m))


def verify(
    sig: RasterSignature,
    template: AggregatedTemplate,
    thresholds: DecisionThresholds,
    request_id: str | None = None,
) -> VerificationOutcome:
    """Full pipeline from raster to outcome; deterministic given a request id."""
    candidate = candidate_profile(sig, template.m)
    value, variant = score(candidate, template)
    return VerificationOutcome(
        client_id=template.client_id,
        score=value,
        best_variant_index=variant,
        decision=decide(value, thresholds),
        candidate_curve=candidate,
        template_version=template.version,
        request_id=request_id if request_id is not None else f"req-{uuid.uuid4().hex[:16]}",
    )
