"""From a raster signature to a normalized profile curve, step by step.

Synthesizes one signature stroke, reduces it column by column to a single
function graph, resamples it, and maps it onto the unit square. Writes the
intermediate bitmaps next to this script under ./out/01/.
"""

from pathlib import Path

from sigcloud.model import interpolate, normalize, simplify
from sigcloud.pbm import save_pbm
from sigcloud.render import render_curve
from sigcloud.synthetic import GENUINE_STYLE, synth_signature

out = Path(__file__).parent / "out" / "01"
out.mkdir(parents=True, exist_ok=True)

sig = synth_signature(GENUINE_STYLE, seed=7, width=240, height=80)
print(f"raster: {sig.width}x{sig.height}, {sig.ink_count} black pixels")
(out / "raster.pbm").write_bytes(save_pbm(sig))

profile = simplify(sig)
print(f"simplified: {len(profile)} points, one per inked column")
print("first five:", [(x, round(y, 2)) for x, y in profile.points[:5]])

resampled = interpolate(profile, 32)
print(f"resampled to {len(resampled)} equally spaced points")

unit = normalize(resampled)
print("normalized x range:", unit.x[0], "to", unit.x[-1])
print("normalized y range:", unit.y.min(), "to", unit.y.max())
(out / "profile.pbm").write_bytes(save_pbm(render_curve(unit, 240, 80)))

# normalize is idempotent: a second pass changes nothing
assert normalize(unit) == unit
print("wrote", out / "raster.pbm", "and", out / "profile.pbm")
