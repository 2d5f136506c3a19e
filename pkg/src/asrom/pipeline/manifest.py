"""Per-run bookkeeping: which stage produced what, from what, how long.

The manifest is the one output that is not byte-reproducible (it records
wall-clock times); every data artifact is.
"""

import json
import time
from pathlib import Path


class StageTimer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def update_manifest(outdir, stage, config_hash, inputs, outputs, wall_clock, stats=None):
    outdir = Path(outdir)
    path = outdir / "manifest.json"
    doc = {"config_hash": config_hash, "stages": {}}
    if path.exists():
        doc = json.loads(path.read_text())
        if doc.get("config_hash") != config_hash:
            doc = {"config_hash": config_hash, "stages": {}}
    doc["stages"][stage] = {
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "wall_clock_s": wall_clock,
        "stats": stats or {},
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def check_manifest_outputs(outdir):
    """Every file any stage recorded must still exist."""
    path = Path(outdir) / "manifest.json"
    doc = json.loads(path.read_text())
    missing = []
    for stage, entry in doc["stages"].items():
        for f in entry["outputs"]:
            if not Path(f).exists():
                missing.append((stage, f))
    return missing
