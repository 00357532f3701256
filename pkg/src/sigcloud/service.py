"""HTTP service over the knowledge store, plus the shared processing core.

The Processor is the single implementation behind both the HTTP endpoints
and the CLI, so the two surfaces cannot drift apart. Errors map onto a
uniform JSON envelope: {"error": {"code": ..., "message": ...}}.
"""

from __future__ import annotations

import base64
import binascii
import json
import logging
import time
import uuid
from typing import Any, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .annealing import AnnealingConfig
from .config import ServiceConfig
from .errors import (
    ConflictError,
    FormatError,
    IntegrityError,
    NotFoundError,
    SigcloudError,
    ValidationError,
)
from .model import RasterSignature
from .pbm import sniff_and_load
from .store import KnowledgeStore, ReviewStatus
from .verification import Decision, VerificationOutcome

logger = logging.getLogger("sigcloud.service")


def outcome_json_bytes(outcome: VerificationOutcome) -> bytes:
    """Canonical wire form of an outcome; shared verbatim by HTTP and CLI."""
    return json.dumps(outcome.to_dict(), sort_keys=True, separators=(",", ":")).encode()


def decode_signature(b64: str) -> RasterSignature:
    try:
        raw = base64.b64decode(b64, validate=True)
    except (binascii.Error, ValueError) as err:
        raise ValidationError(f"signature is not valid base64: {err}") from err
    return sniff_and_load(raw)


class Processor:
    """Request-processing core: enrollment, verification, reviews, backups."""

    def __init__(self, store: KnowledgeStore, config: ServiceConfig):
        self.store = store
        self.config = config

    @classmethod
    def open(cls, config: ServiceConfig) -> "Processor":
        store = KnowledgeStore(config.store_path, default_m=config.basis_points, default_sa=config.sa)
        return cls(store, config)

    def enroll(
        self,
        client_id: str,
        signatures: list[RasterSignature],
        m: int | None = None,
        sa: AnnealingConfig | None = None,
        re_enroll: bool = False,
    ) -> dict[str, Any]:
        template = self.store.enroll(client_id, signatures, m=m, config=sa, re_enroll=re_enroll)
        return {
            "client_id": template.client_id,
            "version": template.version,
            "m": template.m,
            "created_from": template.created_from,
            "variant_count": len(template.variants),
            "fitness": [v.fitness for v in template.variants],
        }

    def verify(self, client_id: str, signature: RasterSignature) -> VerificationOutcome:
        outcome = self.store.record_verification(client_id, signature, self.config.thresholds)
        if outcome.decision is Decision.ACCEPTED and self.config.learn_on_accept:
            self.store.learn(client_id, outcome, signature)
        return outcome

    def template(self, client_id: str) -> dict[str, Any]:
        return self.store.load_template(client_id).to_dict()

    def reviews(self, status: str = "pending") -> dict[str, Any]:
        if status == "all":
            items = self.store.reviews()
        else:
            try:
                items = self.store.reviews(ReviewStatus(status))
            except ValueError:
                raise ValidationError(f"unknown review status {status!r}")
        return {
            "reviews": [item.to_dict() for item in items],
            "thresholds": {
                "accept_below": self.config.accept_below,
                "reject_at_or_above": self.config.reject_at_or_above,
            },
        }

    def review(self, request_id: str) -> dict[str, Any]:
        return self.store.get_review(request_id).to_dict()

    def decide_review(self, request_id: str, decision: str, supervisor: str) -> dict[str, Any]:
        if decision not in ("approve", "deny"):
            raise ValidationError(f"decision must be 'approve' or 'deny', got {decision!r}")
        if not supervisor:
            raise ValidationError("supervisor id must not be empty")
        item = self.store.decide_review(request_id, approve=decision == "approve", supervisor_id=supervisor)
        return item.to_dict()

    def snapshot(self) -> dict[str, Any]:
        return {"snapshot_id": self.store.snapshot()}

    def snapshots(self) -> dict[str, Any]:
        return {"snapshots": self.store.list_snapshots()}

    def restore(self, snapshot_id: str) -> dict[str, Any]:
        self.store.restore(snapshot_id)
        return {"restored": snapshot_id}

    def health(self) -> dict[str, Any]:
        return {
            "status": "ok",
            "format_version": 1,
            "counts": self.store.counts,
            "clients": {c: self.store.active_version(c) for c in self.store.clients()},
            "pending_reviews": len(self.store.pending_reviews()),
        }


# ----------------------------------------------------------------- HTTP layer

class EnrollRequest(BaseModel):
    signatures: list[str]
    m: Optional[int] = None
    sa: Optional[dict] = None
    re_enroll: bool = False


class VerifyRequest(BaseModel):
    signature: str


class ReviewDecisionRequest(BaseModel):
    decision: str
    supervisor: str


class RestoreRequest(BaseModel):
    snapshot_id: str


_ERROR_STATUS = [
    (NotFoundError, 404, "not_found"),
    (ConflictError, 409, "conflict"),
    (IntegrityError, 500, "integrity"),
    (FormatError, 400, "invalid"),
    (ValidationError, 400, "invalid"),
]


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": {"code": code, "message": message}}, status_code=status)


def create_app(processor: Processor) -> FastAPI:
    app = FastAPI(title="sigcloud", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        request_id = uuid.uuid4().hex[:12]
        started = time.perf_counter()
        response = await call_next(request)
        logger.info(
            json.dumps(
                {
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "latency_ms": round((time.perf_counter() - started) * 1000, 3),
                    "request_id": request_id,
                },
                sort_keys=True,
            )
        )
        response.headers["X-Request-Id"] = request_id
        return response

    @app.exception_handler(SigcloudError)
    async def sigcloud_error(request: Request, err: SigcloudError):
        for kind, status, code in _ERROR_STATUS:
            if isinstance(err, kind):
                return _error_response(status, code, str(err))
        return _error_response(500, "internal", str(err))

    @app.exception_handler(RequestValidationError)
    async def body_error(request: Request, err: RequestValidationError):
        return _error_response(400, "invalid", str(err))

    @app.post("/clients/{client_id}/enroll", status_code=201)
    def enroll(client_id: str, body: EnrollRequest):
        if not body.signatures:
            raise ValidationError("signatures must not be empty")
        rasters = [decode_signature(s) for s in body.signatures]
        sa = AnnealingConfig.from_dict(body.sa) if body.sa is not None else None
        return processor.enroll(client_id, rasters, m=body.m, sa=sa, re_enroll=body.re_enroll)

    @app.post("/clients/{client_id}/verify")
    def verify(client_id: str, body: VerifyRequest):
        outcome = processor.verify(client_id, decode_signature(body.signature))
        return Response(content=outcome_json_bytes(outcome), media_type="application/json")

    @app.get("/clients/{client_id}/template")
    def template(client_id: str):
        return processor.template(client_id)

    @app.get("/reviews")
    def reviews(status: str = "pending"):
        return processor.reviews(status)

    @app.get("/reviews/{request_id}")
    def review(request_id: str):
        return processor.review(request_id)

    @app.get("/reviews/{request_id}/signature")
    def review_signature(request_id: str):
        data = processor.store.review_signature_bytes(request_id)
        return Response(content=data, media_type="image/x-portable-bitmap")

    @app.post("/reviews/{request_id}")
    def decide(request_id: str, body: ReviewDecisionRequest):
        return processor.decide_review(request_id, body.decision, body.supervisor)

    @app.post("/admin/snapshot", status_code=201)
    def snapshot():
        return processor.snapshot()

    @app.get("/admin/snapshots")
    def snapshots():
        return processor.snapshots()

    @app.get("/admin/snapshots/{snapshot_id}")
    def snapshot_bundle(snapshot_id: str):
        return processor.store.export_snapshot(snapshot_id)

    @app.post("/admin/snapshots/import", status_code=201)
    def snapshot_import(bundle: dict):
        return {"snapshot_id": processor.store.import_snapshot(bundle)}

    @app.post("/admin/restore")
    def restore(body: RestoreRequest):
        return processor.restore(body.snapshot_id)

    @app.get("/healthz")
    def healthz():
        return processor.health()

    return app


def serve(config: ServiceConfig) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    app = create_app(Processor.open(config))
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
