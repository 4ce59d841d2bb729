"""Walk through the 9_46 computation from Python.

    python3 demos/walkthrough.py
"""

import json

from legdga import augment as au
from legdga import certify as ce
from legdga import chekanov as ch
from legdga import data_path
from legdga import diagram as dg
from legdga import gluing as gl
from legdga.ncalg import Zmod

trefoil = ch.build_dga(dg.load(data_path("trefoil.front")))
print("trefoil:")
for g in trefoil.generators:
    print(f"  d {g.name} = {trefoil.d(g.name)}   (degree {g.degree})")
print("  augmentations over Z/2:", len(au.enumerate_augmentations(trefoil, Zmod(2))))

front = dg.load(data_path("k946.front"))
K = ch.build_dga(front)
print("\n9_46:", len(K.generators), "generators, tb =", dg.thurston_bennequin(front))

eps = {k: au.Augmentation.from_json(json.loads(data_path(k + ".json").read_text()))
       for k in ("eps0", "eps1")}
for k, e in eps.items():
    print(f"  {k}: {e.support()}  linearized homology {ce.linearized_homology(K, e).nonzero()}")

arc = dg.load(data_path("arc946.front"))
A_arc = ch.build_dga(arc)
arc_eps = {k: au.arc_augmentation(e, arc) for k, e in eps.items()}

for F, G in [("eps0", "eps1"), ("eps0", "eps0"), ("eps1", "eps1")]:
    glued = ce.certify(gl.glue(gl.GluedSpec(K, eps[F], eps[G])))
    spun = ce.certify(gl.spin(gl.GluedSpec(A_arc, arc_eps[F], arc_eps[G], 3)))
    line = f"  ({F}, {G}): glued {glued.status:<11} spun (n = 3) {spun.status}"
    if glued.witness is not None:
        line += f"   witness {glued.witness.element}"
    print(line)
