"""Writes data/twisted_4.json: the flat Norden pair pushed through a
position-dependent shear A = I + a(x) E_12, with a conformal factor.

J = A J0 A^-1 and g = exp(2u) A^-T g0 A^-1 stay Norden at every point,
but J is no longer integrable when a varies.
"""

import json
import pathlib
import re

import sympy as sp

x = sp.symbols("x1:5")
a = sp.Rational(3, 10) * sp.sin(x[2]) + sp.Rational(1, 5) * x[3]
u = sp.Rational(1, 5) * x[0] * x[1]

A = sp.eye(4)
A[0, 1] = a
Ainv = A.inv()
J0 = sp.Matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
g0 = sp.diag(1, 1, -1, -1)

J = sp.simplify(A * J0 * Ainv)
g = sp.simplify(sp.exp(2 * u) * Ainv.T * g0 * Ainv)

assert sp.simplify(J * J + sp.eye(4)) == sp.zeros(4)
assert sp.simplify(J.T * g * J + g) == sp.zeros(4)


def text(e):
    s = sp.sstr(sp.expand(e))
    s = s.replace("**", "^")
    for k in range(4, 0, -1):
        s = re.sub(rf"\bx{k}\b", f"x{k}", s)
    return s


doc = {
    "name": "twisted-4",
    "dimension": 4,
    "domain": [[-0.5, 0.5]] * 4,
    "g": [[text(g[i, j]) for j in range(4)] for i in range(4)],
    "J": [[text(J[i, j]) for j in range(4)] for i in range(4)],
}

out = pathlib.Path(__file__).resolve().parent.parent / "data" / "twisted_4.json"
lines = ["{", f'  "name": {json.dumps(doc["name"])},', f'  "dimension": {doc["dimension"]},']
for key in ("domain", "g", "J"):
    rows = ",\n".join("    " + json.dumps(r, separators=(",", ":")) for r in doc[key])
    lines.append(f'  "{key}": [\n{rows}\n  ]' + ("," if key != "J" else ""))
lines.append("}")
out.write_text("\n".join(lines) + "\n")
print(out)
