"""File-backed knowledge store with checksummed manifest and snapshots.

Layout under the store root (all store-owned; unlisted files are treated as
leftovers from interrupted writes and removed on open):

    manifest.json                          format version, counts, checksums
    clients/<id>/enrollment/<n>.pbm        raw signatures, indices only grow
    clients/<id>/aggregation-v<N>.json     m + annealing config + first index
                                           of the enrollment set behind vN
    clients/<id>/template-v<N>.json        aggregated templates, v1..vN kept
    reviews/<request_id>.json              escalated review items (immutable)
    reviews/<request_id>.pbm               the escalated candidate raster
    decisions/<request_id>.json            supervisor decision, written once
    outcomes/<request_id>.json             every verification outcome
    snapshots/<snapshot_id>/...            full store copies, own manifest

Tracked content is append-only: no mutation ever rewrites a tracked file, so
every mutation can write its data files first (each one atomically via
write-to-temp-then-rename) and commit by replacing manifest.json last. An
interrupted mutation leaves the previous manifest pointing at the previous
state, and the unreferenced new files are swept on the next open. Restores
stage a verified copy beside the root and journal the commit with a marker
file; opening the store finishes or rolls back whatever a crash left behind.

Single writer, many readers: mutations serialize through one lock, reads
see atomically replaced files.
"""

from __future__ import annotations

import base64
import hashlib
import json
import re
import shutil
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path, PurePosixPath
from typing import Any, Iterable, Sequence

from .aggregation import DEFAULT_BASIS_POINTS, DEFAULT_SA_CONFIG, AggregatedTemplate, aggregate
from .annealing import AnnealingConfig
from .errors import ConflictError, IntegrityError, NotFoundError, ValidationError
from .model import ProfileCurve, RasterSignature
from .pbm import load_pbm, save_pbm
from .verification import Decision, DecisionThresholds, VerificationOutcome, verify

FORMAT_VERSION = 1
_STAGE_DIR = ".restore-stage"
_COMMIT_MARKER = ".restore-commit"
_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


# File primitives are module-level so fault-injection tests can intercept them.

def _atomic_write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)


def _remove_file(path: Path) -> None:
    path.unlink(missing_ok=True)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _canonical_json(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode() + b"\n"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class ReviewStatus(str, Enum):
    PENDING = "pending"
    APPROVED = "approved"
    DENIED = "denied"


@dataclass(frozen=True)
class ReviewItem:
    """An escalated verification awaiting (or past) a supervisor decision."""

    request_id: str
    client_id: str
    score: float
    candidate_curve: ProfileCurve
    template_version: int
    submitted_at: str
    status: ReviewStatus = ReviewStatus.PENDING
    decided_by: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "request_id": self.request_id,
            "client_id": self.client_id,
            "score": self.score,
            "candidate_curve": [[x, y] for x, y in self.candidate_curve.points],
            "template_version": self.template_version,
            "submitted_at": self.submitted_at,
            "status": self.status.value,
            "decided_by": self.decided_by,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ReviewItem":
        return cls(
            request_id=data["request_id"],
            client_id=data["client_id"],
            score=float(data["score"]),
            candidate_curve=ProfileCurve.from_points(data["candidate_curve"]),
            template_version=int(data["template_version"]),
            submitted_at=data["submitted_at"],
            status=ReviewStatus(data["status"]),
            decided_by=data.get("decided_by"),
        )


def _require_safe_id(value: str, what: str) -> str:
    if not _ID_PATTERN.match(value):
        raise ValidationError(f"{what} {value!r} contains unsupported characters")
    return value


_TEMPLATE_RE = re.compile(r"^clients/([^/]+)/template-v(\d+)\.json$")
_AGGREGATION_RE = re.compile(r"^clients/([^/]+)/aggregation-v(\d+)\.json$")
_ENROLLMENT_RE = re.compile(r"^clients/([^/]+)/enrollment/(\d+)\.pbm$")
_REVIEW_RE = re.compile(r"^reviews/([^/]+)\.json$")
_OUTCOME_RE = re.compile(r"^outcomes/([^/]+)\.json$")


def _counts_from(checksums: dict[str, str]) -> dict[str, int]:
    clients = set()
    templates = reviews = outcomes = 0
    for rel in checksums:
        if m := _TEMPLATE_RE.match(rel):
            clients.add(m.group(1))
            templates += 1
        elif _REVIEW_RE.match(rel):
            reviews += 1
        elif _OUTCOME_RE.match(rel):
            outcomes += 1
    return {"clients": len(clients), "templates": templates, "reviews": reviews, "outcomes": outcomes}


class KnowledgeStore:
    """Persistent signature knowledge: templates, outcomes, reviews, backups."""

    def __init__(
        self,
        root: str | Path,
        default_m: int = DEFAULT_BASIS_POINTS,
        default_sa: AnnealingConfig = DEFAULT_SA_CONFIG,
    ):
        self.root = Path(root)
        self.default_m = default_m
        self.default_sa = default_sa
        self._lock = threading.RLock()
        self._manifest: dict[str, Any] = {}
        self._open()

    # ------------------------------------------------------------------ open

    def _open(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        self._recover_interrupted_restore()
        manifest_path = self.root / "manifest.json"
        if not manifest_path.exists():
            if self._has_data_files():
                raise IntegrityError(f"store at {self.root} has content but no manifest.json")
            self._manifest = {"format_version": FORMAT_VERSION, "counts": _counts_from({}), "checksums": {}}
            _atomic_write_bytes(manifest_path, _canonical_json(self._manifest))
        else:
            try:
                manifest = json.loads(manifest_path.read_bytes())
            except ValueError as err:
                raise IntegrityError(f"manifest.json is not valid JSON: {err}") from err
            if manifest.get("format_version") != FORMAT_VERSION:
                raise IntegrityError(f"unsupported store format {manifest.get('format_version')!r}")
            self._manifest = manifest
        self._remove_orphans()
        self._verify_checksums()

    def _has_data_files(self) -> bool:
        for path in self.root.rglob("*"):
            rel = path.relative_to(self.root)
            if rel.parts[0] in ("snapshots", _STAGE_DIR, _COMMIT_MARKER):
                continue
            if path.is_file() and not path.name.endswith(".tmp"):
                return True
        return False

    def _iter_data_files(self) -> Iterable[Path]:
        for path in self.root.rglob("*"):
            if not path.is_file():
                continue
            rel = path.relative_to(self.root)
            if rel.parts[0] in ("snapshots", _STAGE_DIR) or rel.name == _COMMIT_MARKER:
                continue
            if rel.as_posix() == "manifest.json":
                continue
            yield path

    def _remove_orphans(self) -> None:
        listed = self._manifest["checksums"]
        for path in list(self._iter_data_files()):
            rel = path.relative_to(self.root).as_posix()
            if rel not in listed:
                _remove_file(path)

    def _verify_checksums(self) -> None:
        for rel, digest in self._manifest["checksums"].items():
            path = self.root / rel
            if not path.is_file():
                raise IntegrityError(f"manifest lists {rel} but the file is missing")
            if _sha256(path.read_bytes()) != digest:
                raise IntegrityError(f"checksum mismatch for {rel}")

    def _recover_interrupted_restore(self) -> None:
        marker = self.root / _COMMIT_MARKER
        stage = self.root / _STAGE_DIR
        if marker.exists():
            # The marker is only written after the stage is complete, so the
            # restore can always be finished by replaying the stage.
            if (stage / "manifest.json").exists():
                self._apply_stage(stage)
            _remove_file(marker)
            if stage.exists():
                shutil.rmtree(stage)
        elif stage.exists():
            shutil.rmtree(stage)  # never committed; roll the restore back

    def _apply_stage(self, stage: Path) -> dict[str, Any]:
        manifest = json.loads((stage / "manifest.json").read_bytes())
        for rel in manifest["checksums"]:
            _atomic_write_bytes(self.root / rel, (stage / rel).read_bytes())
        _atomic_write_bytes(self.root / "manifest.json", _canonical_json(manifest))
        return manifest

    # ----------------------------------------------------------------- reads

    @property
    def counts(self) -> dict[str, int]:
        return dict(self._manifest["counts"])

    def clients(self) -> list[str]:
        found = set()
        for rel in self._manifest["checksums"]:
            if m := _TEMPLATE_RE.match(rel):
                found.add(m.group(1))
        return sorted(found)

    def active_version(self, client_id: str) -> int | None:
        versions = [
            int(m.group(2))
            for rel in self._manifest["checksums"]
            if (m := _TEMPLATE_RE.match(rel)) and m.group(1) == client_id
        ]
        return max(versions) if versions else None

    def versions(self, client_id: str) -> list[int]:
        return sorted(
            int(m.group(2))
            for rel in self._manifest["checksums"]
            if (m := _TEMPLATE_RE.match(rel)) and m.group(1) == client_id
        )

    def load_template(self, client_id: str, version: int | None = None) -> AggregatedTemplate:
        _require_safe_id(client_id, "client id")
        version = version if version is not None else self.active_version(client_id)
        if version is None:
            raise NotFoundError(f"client {client_id!r} is not enrolled")
        path = self.root / f"clients/{client_id}/template-v{version}.json"
        if not path.is_file():
            raise NotFoundError(f"client {client_id!r} has no template version {version}")
        return AggregatedTemplate.from_json(path.read_text())

    def _enrollment_indices(self, client_id: str) -> list[int]:
        return sorted(
            int(m.group(2))
            for rel in self._manifest["checksums"]
            if (m := _ENROLLMENT_RE.match(rel)) and m.group(1) == client_id
        )

    def enrollment_signatures(self, client_id: str) -> list[RasterSignature]:
        """The current enrollment set: raster indices from the active start on."""
        _, _, start = self._aggregation_record(client_id)
        return [
            load_pbm((self.root / f"clients/{client_id}/enrollment/{i}.pbm").read_bytes())
            for i in self._enrollment_indices(client_id)
            if i >= start
        ]

    def _aggregation_record(self, client_id: str) -> tuple[int, AnnealingConfig, int]:
        versions = [
            int(m.group(2))
            for rel in self._manifest["checksums"]
            if (m := _AGGREGATION_RE.match(rel)) and m.group(1) == client_id
        ]
        if not versions:
            raise NotFoundError(f"client {client_id!r} has no aggregation settings")
        path = self.root / f"clients/{client_id}/aggregation-v{max(versions)}.json"
        data = json.loads(path.read_text())
        return int(data["m"]), AnnealingConfig.from_dict(data["sa"]), int(data["enrollment_start"])

    def aggregation_settings(self, client_id: str) -> tuple[int, AnnealingConfig]:
        m, config, _ = self._aggregation_record(client_id)
        return m, config

    def _load_decision(self, request_id: str) -> dict[str, Any] | None:
        path = self.root / f"decisions/{request_id}.json"
        rel = f"decisions/{request_id}.json"
        if rel not in self._manifest["checksums"] or not path.is_file():
            return None
        return json.loads(path.read_text())

    def get_review(self, request_id: str) -> ReviewItem:
        _require_safe_id(request_id, "request id")
        path = self.root / f"reviews/{request_id}.json"
        if not path.is_file():
            raise NotFoundError(f"no review with request id {request_id!r}")
        item = ReviewItem.from_dict(json.loads(path.read_text()))
        decision = self._load_decision(request_id)
        if decision is not None:
            item = replace(
                item, status=ReviewStatus(decision["status"]), decided_by=decision["decided_by"]
            )
        return item

    def reviews(self, status: ReviewStatus | None = None) -> list[ReviewItem]:
        items = []
        for rel in self._manifest["checksums"]:
            if m := _REVIEW_RE.match(rel):
                items.append(self.get_review(m.group(1)))
        if status is not None:
            items = [item for item in items if item.status is status]
        items.sort(key=lambda item: (item.submitted_at, item.request_id), reverse=True)
        return items

    def pending_reviews(self) -> list[ReviewItem]:
        return self.reviews(ReviewStatus.PENDING)

    def review_signature(self, request_id: str) -> RasterSignature:
        _require_safe_id(request_id, "request id")
        path = self.root / f"reviews/{request_id}.pbm"
        if not path.is_file():
            raise NotFoundError(f"no stored signature for request id {request_id!r}")
        return load_pbm(path.read_bytes())

    def review_signature_bytes(self, request_id: str) -> bytes:
        _require_safe_id(request_id, "request id")
        path = self.root / f"reviews/{request_id}.pbm"
        if not path.is_file():
            raise NotFoundError(f"no stored signature for request id {request_id!r}")
        return path.read_bytes()

    def load_outcome(self, request_id: str) -> dict[str, Any]:
        _require_safe_id(request_id, "request id")
        path = self.root / f"outcomes/{request_id}.json"
        if not path.is_file():
            raise NotFoundError(f"no outcome with request id {request_id!r}")
        return json.loads(path.read_text())

    # ------------------------------------------------------------- mutations

    def _apply(self, writes: Sequence[tuple[str, bytes]], removes: Iterable[str] = ()) -> None:
        """Write data files, commit the manifest, then drop removed files."""
        for rel, data in writes:
            _atomic_write_bytes(self.root / rel, data)
        checksums = dict(self._manifest["checksums"])
        for rel, data in writes:
            checksums[rel] = _sha256(data)
        removes = list(removes)
        for rel in removes:
            checksums.pop(rel, None)
        manifest = {
            "format_version": FORMAT_VERSION,
            "counts": _counts_from(checksums),
            "checksums": checksums,
        }
        _atomic_write_bytes(self.root / "manifest.json", _canonical_json(manifest))
        self._manifest = manifest
        for rel in removes:
            _remove_file(self.root / rel)

    def enroll(
        self,
        client_id: str,
        signatures: Sequence[RasterSignature],
        m: int | None = None,
        config: AnnealingConfig | None = None,
        re_enroll: bool = False,
    ) -> AggregatedTemplate:
        """Persist raw signatures and their aggregated template, all or nothing."""
        _require_safe_id(client_id, "client id")
        if not signatures:
            raise ValidationError("enrollment needs at least one signature")
        with self._lock:
            active = self.active_version(client_id)
            if active is not None and not re_enroll:
                raise ConflictError(f"client {client_id!r} is already enrolled (version {active})")
            m = m if m is not None else self.default_m
            config = config if config is not None else self.default_sa
            version = (active or 0) + 1
            template = aggregate(signatures, m, config, client_id=client_id, version=version)
            existing = self._enrollment_indices(client_id)
            start = (existing[-1] + 1) if existing else 0
            writes: list[tuple[str, bytes]] = [
                (f"clients/{client_id}/enrollment/{start + i}.pbm", save_pbm(sig))
                for i, sig in enumerate(signatures)
            ]
            writes.append(
                (
                    f"clients/{client_id}/aggregation-v{version}.json",
                    _canonical_json({"m": m, "sa": config.to_dict(), "enrollment_start": start}),
                )
            )
            writes.append((f"clients/{client_id}/template-v{version}.json", _canonical_json(template.to_dict())))
            self._apply(writes)
            return template

    def _learn_writes(
        self, client_id: str, signature: RasterSignature
    ) -> tuple[list[tuple[str, bytes]], AggregatedTemplate]:
        m, config, _ = self._aggregation_record(client_id)
        rasters = self.enrollment_signatures(client_id)
        version = self.active_version(client_id)
        if version is None:
            raise NotFoundError(f"client {client_id!r} is not enrolled")
        extended = list(rasters) + [signature]
        template = aggregate(extended, m, config, client_id=client_id, version=version + 1)
        next_index = self._enrollment_indices(client_id)[-1] + 1
        writes = [
            (f"clients/{client_id}/enrollment/{next_index}.pbm", save_pbm(signature)),
            (f"clients/{client_id}/template-v{version + 1}.json", _canonical_json(template.to_dict())),
        ]
        return writes, template

    def learn(
        self, client_id: str, outcome: VerificationOutcome, signature: RasterSignature
    ) -> AggregatedTemplate:
        """Fold an accepted (or approved-after-escalation) signature into the template."""
        with self._lock:
            if outcome.decision is Decision.ESCALATED:
                review = self.get_review(outcome.request_id)
                if review.status is not ReviewStatus.APPROVED:
                    raise ValidationError(
                        f"escalated outcome {outcome.request_id} is {review.status.value}, not approved"
                    )
            elif outcome.decision is not Decision.ACCEPTED:
                raise ValidationError(f"cannot learn from a {outcome.decision.value} outcome")
            writes, template = self._learn_writes(client_id, signature)
            self._apply(writes)
            return template

    def record_verification(
        self, client_id: str, signature: RasterSignature, thresholds: DecisionThresholds
    ) -> VerificationOutcome:
        """Verify against the active template and persist the outcome.

        Escalated outcomes also enqueue exactly one pending review carrying
        the candidate curve and raster. Request ids are derived from the
        store's outcome sequence, so identical operation histories yield
        identical ids while ids within one store never repeat.
        """
        _require_safe_id(client_id, "client id")
        with self._lock:
            template = self.load_template(client_id)
            seq = self._manifest["counts"]["outcomes"] + 1
            digest_input = b"\n".join(
                [client_id.encode(), str(template.version).encode(), str(seq).encode(), save_pbm(signature)]
            )
            request_id = "req-" + _sha256(digest_input)[:16]
            outcome = verify(signature, template, thresholds, request_id=request_id)
            record = dict(outcome.to_dict(), recorded_at=_utc_now())
            writes = [(f"outcomes/{request_id}.json", _canonical_json(record))]
            if outcome.decision is Decision.ESCALATED:
                item = ReviewItem(
                    request_id=request_id,
                    client_id=client_id,
                    score=outcome.score,
                    candidate_curve=outcome.candidate_curve,
                    template_version=outcome.template_version,
                    submitted_at=_utc_now(),
                )
                writes.append((f"reviews/{request_id}.json", _canonical_json(item.to_dict())))
                writes.append((f"reviews/{request_id}.pbm", save_pbm(signature)))
            self._apply(writes)
            return outcome

    def enqueue_review(self, item: ReviewItem, signature: RasterSignature) -> str:
        """Directly add a pending review (record_verification does this itself)."""
        with self._lock:
            if item.status is not ReviewStatus.PENDING:
                raise ValidationError("only pending items can be enqueued")
            path = self.root / f"reviews/{item.request_id}.json"
            if path.exists():
                raise ConflictError(f"review {item.request_id!r} already exists")
            self._apply(
                [
                    (f"reviews/{item.request_id}.json", _canonical_json(item.to_dict())),
                    (f"reviews/{item.request_id}.pbm", save_pbm(signature)),
                ]
            )
            return item.request_id

    def decide_review(self, request_id: str, approve: bool, supervisor_id: str) -> ReviewItem:
        """Resolve a pending review; approval folds the signature into the template.

        The decision lands as a write-once sidecar in decisions/, so the
        pending record is never rewritten and the decision plus any learned
        template commit atomically together.
        """
        with self._lock:
            item = self.get_review(request_id)
            if item.status is not ReviewStatus.PENDING:
                raise ConflictError(
                    f"review {request_id!r} was already {item.status.value} by {item.decided_by}"
                )
            status = ReviewStatus.APPROVED if approve else ReviewStatus.DENIED
            updated = replace(item, status=status, decided_by=supervisor_id)
            decision = {
                "request_id": request_id,
                "status": status.value,
                "decided_by": supervisor_id,
                "decided_at": _utc_now(),
            }
            writes = [(f"decisions/{request_id}.json", _canonical_json(decision))]
            if approve:
                signature = self.review_signature(request_id)
                learn_writes, _ = self._learn_writes(item.client_id, signature)
                writes.extend(learn_writes)
            self._apply(writes)
            return updated

    # ------------------------------------------------------------- snapshots

    def snapshot(self) -> str:
        """Copy the full store into snapshots/<id>/; the id is content-derived."""
        with self._lock:
            manifest_bytes = _canonical_json(self._manifest)
            stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
            snapshot_id = f"snap-{stamp}-{_sha256(manifest_bytes)[:8]}"
            snapdir = self.root / "snapshots" / snapshot_id
            if (snapdir / "manifest.json").exists():
                return snapshot_id  # identical content captured in the same second
            for rel in self._manifest["checksums"]:
                _atomic_write_bytes(snapdir / rel, (self.root / rel).read_bytes())
            _atomic_write_bytes(snapdir / "manifest.json", manifest_bytes)
            return snapshot_id

    def list_snapshots(self) -> list[dict[str, Any]]:
        """Snapshot ids with their counts; incomplete snapshot dirs are skipped."""
        out = []
        snapdir = self.root / "snapshots"
        if not snapdir.is_dir():
            return out
        for child in sorted(snapdir.iterdir()):
            manifest_path = child / "manifest.json"
            if child.is_dir() and manifest_path.is_file():
                try:
                    manifest = json.loads(manifest_path.read_bytes())
                except ValueError:
                    continue
                out.append({"snapshot_id": child.name, "counts": manifest.get("counts", {})})
        return out

    def restore(self, snapshot_id: str) -> None:
        """Replace store content with a snapshot's, atomically via stage + journal."""
        _require_safe_id(snapshot_id, "snapshot id")
        with self._lock:
            snapdir = self.root / "snapshots" / snapshot_id
            manifest_path = snapdir / "manifest.json"
            if not manifest_path.is_file():
                raise NotFoundError(f"no snapshot {snapshot_id!r}")
            try:
                manifest = json.loads(manifest_path.read_bytes())
            except ValueError as err:
                raise IntegrityError(f"snapshot {snapshot_id!r} manifest is corrupt: {err}") from err
            # Verify everything before touching live content.
            contents: dict[str, bytes] = {}
            for rel, digest in manifest["checksums"].items():
                path = snapdir / rel
                if not path.is_file():
                    raise IntegrityError(f"snapshot {snapshot_id!r} is missing {rel}")
                data = path.read_bytes()
                if _sha256(data) != digest:
                    raise IntegrityError(f"snapshot {snapshot_id!r} checksum mismatch for {rel}")
                contents[rel] = data
            stage = self.root / _STAGE_DIR
            if stage.exists():
                shutil.rmtree(stage)
            for rel, data in contents.items():
                _atomic_write_bytes(stage / rel, data)
            _atomic_write_bytes(stage / "manifest.json", _canonical_json(manifest))
            _atomic_write_bytes(self.root / _COMMIT_MARKER, snapshot_id.encode())
            old_checksums = set(self._manifest["checksums"])
            new_manifest = self._apply_stage(stage)
            _remove_file(self.root / _COMMIT_MARKER)
            shutil.rmtree(stage)
            for rel in old_checksums - set(new_manifest["checksums"]):
                _remove_file(self.root / rel)
            self._manifest = new_manifest

    def export_snapshot(self, snapshot_id: str) -> dict[str, Any]:
        """Snapshot as a transferable JSON bundle of base64 file contents."""
        _require_safe_id(snapshot_id, "snapshot id")
        snapdir = self.root / "snapshots" / snapshot_id
        if not (snapdir / "manifest.json").is_file():
            raise NotFoundError(f"no snapshot {snapshot_id!r}")
        files = {}
        for path in snapdir.rglob("*"):
            if path.is_file():
                rel = path.relative_to(snapdir).as_posix()
                files[rel] = base64.b64encode(path.read_bytes()).decode()
        return {"snapshot_id": snapshot_id, "files": files}

    def import_snapshot(self, bundle: dict[str, Any]) -> str:
        """Install a bundle produced by export_snapshot; restorable afterwards."""
        snapshot_id = _require_safe_id(str(bundle["snapshot_id"]), "snapshot id")
        files: dict[str, bytes] = {}
        for rel, data in bundle["files"].items():
            pure = PurePosixPath(rel)
            if pure.is_absolute() or ".." in pure.parts:
                raise ValidationError(f"snapshot bundle path {rel!r} escapes the snapshot dir")
            files[str(pure)] = base64.b64decode(data)
        if "manifest.json" not in files:
            raise ValidationError("snapshot bundle has no manifest.json")
        manifest = json.loads(files["manifest.json"])
        for rel, digest in manifest.get("checksums", {}).items():
            if rel not in files:
                raise IntegrityError(f"snapshot bundle is missing {rel}")
            if _sha256(files[rel]) != digest:
                raise IntegrityError(f"snapshot bundle checksum mismatch for {rel}")
        with self._lock:
            snapdir = self.root / "snapshots" / snapshot_id
            for rel, data in files.items():
                if rel == "manifest.json":
                    continue
                _atomic_write_bytes(snapdir / rel, data)
            _atomic_write_bytes(snapdir / "manifest.json", files["manifest.json"])
            return snapshot_id
