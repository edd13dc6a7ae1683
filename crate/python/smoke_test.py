"""Smoke test for the wavecraft_py extension module.

Locates the compiled cdylib under target/, imports it under the module name
Python expects, and exercises the expression API plus both solver entry
points end to end.
"""

import json
import pathlib
import shutil
import sys
import tempfile


def locate_library() -> pathlib.Path:
    root = pathlib.Path(__file__).resolve().parents[1]
    names = ("libwavecraft_py.so", "libwavecraft_py.dylib", "wavecraft_py.dll")
    candidates = [
        path
        for profile in ("debug", "release")
        for name in names
        if (path := root / "target" / profile / name).exists()
    ]
    if not candidates:
        sys.exit("extension module not built; run `cargo build -p wavecraft-py` first")
    return max(candidates, key=lambda p: p.stat().st_mtime)


library = locate_library()
staging = tempfile.mkdtemp(prefix="wavecraft-py-")
shutil.copy2(library, pathlib.Path(staging) / "wavecraft_py.so")
sys.path.insert(0, staging)

import wavecraft_py as wc  # noqa: E402

# ---- expression API ----
u = wc.Expr("u^2 + 3*u")
assert str(u.diff("u")) == "3 + 2*u", str(u.diff("u"))
assert abs(u.eval({"u": 2.0}) - 10.0) < 1e-12
assert u.expand() == wc.Expr("3*u + u^2")
assert u.free_symbols() == ["u"]
assert repr(u.diff("u")) == 'Expr("3 + 2*u")'

profile = wc.Expr("(1 + C*exp(xi))^-2")
assert str(profile.substitute("C", wc.Expr("1"))) == "(1 + exp(xi))^-2"

ratio = wc.Expr("lambda/(8*a1*alpha^2)")
assert ratio.latex() == r"\frac{\lambda}{8\,a_{1}\,\alpha^{2}}", ratio.latex()

try:
    wc.Expr("u +")
except ValueError:
    pass
else:
    sys.exit("malformed input should raise ValueError")

# ---- travelling-wave solver ----
report = json.loads(wc.solve_problem("eq: u_t = u_xx + u - u^2", method="ffx"))
assert report["method"] == "ffx"
branches = report["branches"]
assert len(branches) == 2, f"expected 2 branches, got {len(branches)}"
for branch in branches:
    assert branch["assignments"]["b2"]["exact"] == "6"
    assert branch["residual"]["max"] < 1e-10

# ---- boundary-value pipeline ----
alpha_c, lambda_c = wc.bratu_critical()
assert abs(alpha_c - 1.19967864) < 1e-6, alpha_c
assert abs(lambda_c - 0.8784576797) < 1e-8, lambda_c

print("smoke test passed")
