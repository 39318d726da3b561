"""Driving the command-line interface programmatically.

Every subcommand takes a single JSON config plus a few override flags;
outputs are deterministic given the config and seed.  The same calls
work from a shell as `conclab <command> --config cfg.json`.
"""

import json
import tempfile
from pathlib import Path

from conclab.cli import main

tmp = Path(tempfile.mkdtemp())

def cfg(obj, name):
    path = tmp / name
    path.write_text(json.dumps(obj))
    return str(path)

# ---------------------------------------------------------------------
# 1. norms: Hilbert-Schmidt and operator norms of a tensor or of the
#    derivative tensors of a polynomial
print("== norms ==")
main(["norms", "--config", cfg({
    "tensor": {"order": 2, "dim": 3,
               "entries": [1, 0, 0, 0, 1, 0, 0, 0, 1]},
}, "norms.json")])

# ---------------------------------------------------------------------
# 2. bound: a tail curve as CSV
print("\n== bound ==")
main(["bound", "--config", cfg({
    "setting": {"tag": "lsi", "sigma2": 1.0},
    "K": [1.0],
    "grid": {"start": 0.0, "stop": 8.0, "step": 2.0},
}, "bound.json")])

# ---------------------------------------------------------------------
# 3. sample: reproducible draws to CSV or binary
print("\n== sample ==")
out = tmp / "draws.csv"
main(["sample", "--config", cfg({
    "measure": {"tag": "sphere", "n": 3},
    "count": 4,
    "out": str(out),
}, "sample.json"), "--seed", "7"])
print(out.read_text().strip())

# ---------------------------------------------------------------------
# 4. verify: Monte Carlo tail check, JSON report on stdout
print("\n== verify ==")
main(["verify", "--config", cfg({
    "kind": "tail",
    "setting": {"tag": "gaussian"},
    "function": {"linear": [1.0, 0.0, 0.0]},
    "measure": {"tag": "gaussian", "n": 3},
    "K": [1.0],
    "grid": {"start": 0.0, "stop": 4.0, "step": 1.0},
    "samples": 20000,
}, "verify.json")])

# ---------------------------------------------------------------------
# 5. discrete: interdependence diagnostics of a spin system
print("\n== discrete ==")
main(["discrete", "--config", cfg({
    "space": {"ising": {"n": 3, "edges": [[0, 1, 1.0], [1, 2, 0.5]],
                        "beta": 0.3}},
}, "discrete.json")])
