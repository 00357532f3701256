"""The full service loop over real HTTP: enroll, verify, review, backup.

Starts the service in a background thread on a local port, then drives it
with plain urllib: a client enrolls, a genuine signature verifies, a
borderline one escalates to the supervisor queue, approval folds it back
into the template, and a snapshot/restore round-trip rolls the store back.
"""

import base64
import json
import tempfile
import threading
import time
import urllib.request
from pathlib import Path

import uvicorn

from sigcloud.config import ServiceConfig
from sigcloud.pbm import save_pbm
from sigcloud.service import Processor, create_app
from sigcloud.synthetic import GENUINE_STYLE, synth_signature

PORT = 8714
BASE = f"http://127.0.0.1:{PORT}"

store_dir = Path(tempfile.mkdtemp(prefix="sigcloud-demo-"))
# accept tightened so a noisy-but-genuine probe lands in the hesitation band
config = ServiceConfig(store_path=store_dir, accept_below=0.014, reject_at_or_above=0.14)
server = uvicorn.Server(
    uvicorn.Config(create_app(Processor.open(config)), host="127.0.0.1", port=PORT, log_level="error")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)


def call(method: str, path: str, payload=None):
    data = json.dumps(payload).encode() if payload is not None else None
    req = urllib.request.Request(
        BASE + path, data=data, method=method, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def b64(sig) -> str:
    return base64.b64encode(save_pbm(sig)).decode()


enrolled = [synth_signature(GENUINE_STYLE, seed=500 + i) for i in range(4)]
status, summary = call("POST", "/clients/maria/enroll", {"signatures": [b64(s) for s in enrolled]})
print(f"enroll -> {status}: version {summary['version']}, {summary['variant_count']} variants")

status, outcome = call("POST", "/clients/maria/verify", {"signature": b64(enrolled[0])})
print(f"verify replay -> {status}: {outcome['decision']} (score {outcome['score']:.4f})")

probe = synth_signature(GENUINE_STYLE, seed=600)
status, outcome = call("POST", "/clients/maria/verify", {"signature": b64(probe)})
print(f"verify fresh -> {status}: {outcome['decision']} (score {outcome['score']:.4f})")

if outcome["decision"] == "escalated":
    status, listing = call("GET", "/reviews?status=pending")
    print(f"pending reviews: {[r['request_id'] for r in listing['reviews']]}")
    rid = outcome["request_id"]
    status, decided = call("POST", f"/reviews/{rid}", {"decision": "approve", "supervisor": "sup-1"})
    print(f"approve -> {status}: review {decided['status']}")
    status, template = call("GET", "/clients/maria/template")
    print(f"template now v{template['version']} from {template['created_from']} signatures")

status, snap = call("POST", "/admin/snapshot", {})
print(f"snapshot -> {status}: {snap['snapshot_id']}")

call("POST", "/clients/maria/verify", {"signature": b64(enrolled[1])})
status, health = call("GET", "/healthz")
print(f"outcomes recorded since snapshot: {health['counts']['outcomes']}")

status, _ = call("POST", "/admin/restore", {"snapshot_id": snap["snapshot_id"]})
status, health = call("GET", "/healthz")
print(f"after restore -> outcomes back to {health['counts']['outcomes']}, "
      f"clients {health['clients']}")

server.should_exit = True
thread.join(timeout=5)
print("done; store was at", store_dir)
